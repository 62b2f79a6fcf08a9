//! JSONL corpus persistence in the discriminator's expected schema.
//!
//! Loading tolerates the two field-naming conventions found in the wild:
//! the body may arrive under `"article"` or `"text"`, and `"authors"` may
//! be a JSON list or a single `", "`-joined string. Unknown keys are
//! preserved verbatim in the article's extras map so files round-trip.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use textfray_core::segment::segment_sentences;
use textfray_core::{Article, Label, Provenance};

use crate::error::{Error, Result};

/// Which key carries the body on output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKey {
    Article,
    Text,
}

impl BodyKey {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyKey::Article => "article",
            BodyKey::Text => "text",
        }
    }
}

/// How authors are written on output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorsAs {
    List,
    JoinedString,
}

/// Loads one article per line. Blank lines are skipped; any malformed line
/// fails with its line number.
pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Vec<Article>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut articles = Vec::new();
    for (index, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        articles.push(parse_line(path, index + 1, line)?);
    }
    Ok(articles)
}

fn parse_line(path: &Path, line: usize, raw: &str) -> Result<Article> {
    let value: Value = serde_json::from_str(raw).map_err(|e| Error::MalformedLine {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    })?;
    let Value::Object(mut obj) = value else {
        return Err(Error::BadRecord {
            path: path.to_path_buf(),
            line,
            message: "expected a JSON object".into(),
        });
    };
    let bad = |message: String| Error::BadRecord { path: path.to_path_buf(), line, message };

    let body = obj
        .remove("article")
        .or_else(|| obj.remove("text"))
        .ok_or_else(|| Error::MissingBody { path: path.to_path_buf(), line })?;
    let Value::String(body) = body else {
        return Err(bad("body must be a string".into()));
    };

    let title = take_string(&mut obj, "title").map_err(&bad)?.unwrap_or_default();
    let domain = take_string(&mut obj, "domain").map_err(&bad)?.unwrap_or_default();
    let date = take_string(&mut obj, "date").map_err(&bad)?.unwrap_or_default();

    let authors = match obj.remove("authors") {
        None => Vec::new(),
        Some(Value::String(joined)) => split_authors(&joined),
        Some(Value::Array(items)) => {
            let mut authors = Vec::with_capacity(items.len());
            for item in items {
                let Value::String(a) = item else {
                    return Err(bad("authors list must contain strings".into()));
                };
                authors.push(a);
            }
            authors
        }
        Some(other) => {
            return Err(bad(format!("authors must be a list or string, got {other}")));
        }
    };

    let label = match take_string(&mut obj, "label").map_err(&bad)? {
        None => Label::Unknown,
        Some(s) => match s.as_str() {
            "human" => Label::Human,
            "machine" => Label::Machine,
            other => return Err(bad(format!("unrecognized label {other:?}"))),
        },
    };

    let sentence_provenance = match obj.remove("sentence_provenance") {
        None => None,
        Some(Value::Array(items)) => {
            let mut prov = Vec::with_capacity(items.len());
            for item in items {
                let p = match item.as_str() {
                    Some("human") => Provenance::Human,
                    Some("machine") => Provenance::Machine,
                    Some("generated") => Provenance::Generated,
                    _ => return Err(bad(format!("unrecognized provenance {item}"))),
                };
                prov.push(p);
            }
            let sentences = segment_sentences(&body).len();
            if prov.len() != sentences {
                return Err(bad(format!(
                    "sentence_provenance has {} entries for {} sentences",
                    prov.len(),
                    sentences
                )));
            }
            Some(prov)
        }
        Some(other) => return Err(bad(format!("sentence_provenance must be a list, got {other}"))),
    };

    let mut article = Article::new(domain, date, authors, title, body, label);
    article.sentence_provenance = sentence_provenance;
    for (key, value) in obj {
        article.extras.insert(key, value.to_string());
    }
    Ok(article)
}

type StringFieldResult = std::result::Result<Option<String>, String>;

fn take_string(obj: &mut Map<String, Value>, key: &str) -> StringFieldResult {
    match obj.remove(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(format!("{key} must be a string, got {other}")),
    }
}

fn split_authors(joined: &str) -> Vec<String> {
    if joined.is_empty() {
        return Vec::new();
    }
    joined.split(", ").map(String::from).collect()
}

/// Serializes one article to the wire object used by the JSONL files.
pub fn article_to_json(article: &Article, body_key: BodyKey, authors_as: AuthorsAs) -> Value {
    let mut obj = Map::new();
    obj.insert(body_key.as_str().into(), Value::String(article.body.clone()));
    obj.insert("title".into(), Value::String(article.title.clone()));
    let authors = match authors_as {
        AuthorsAs::JoinedString => Value::String(article.authors.join(", ")),
        AuthorsAs::List => {
            Value::Array(article.authors.iter().cloned().map(Value::String).collect())
        }
    };
    obj.insert("authors".into(), authors);
    obj.insert("domain".into(), Value::String(article.domain.clone()));
    obj.insert("date".into(), Value::String(article.date.clone()));
    if article.label != Label::Unknown {
        obj.insert("label".into(), Value::String(article.label.as_str().into()));
    }
    if let Some(prov) = &article.sentence_provenance {
        obj.insert(
            "sentence_provenance".into(),
            Value::Array(prov.iter().map(|p| Value::String(p.as_str().into())).collect()),
        );
    }
    for (key, fragment) in &article.extras {
        // Extras were stored as raw JSON text; a parse failure here would
        // mean the map was populated by hand with invalid JSON.
        let value: Value = serde_json::from_str(fragment)
            .unwrap_or_else(|_| Value::String(fragment.clone()));
        obj.insert(key.clone(), value);
    }
    Value::Object(obj)
}

/// Writes one article per line. `load_jsonl(save_jsonl(x))` reproduces `x`
/// field for field under either output convention. Note the joined-string
/// authors convention cannot represent a `", "` inside a single author
/// name; such a name splits back into two.
pub fn save_jsonl(
    articles: &[Article],
    path: impl AsRef<Path>,
    body_key: BodyKey,
    authors_as: AuthorsAs,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for article in articles {
        let value = article_to_json(article, body_key, authors_as);
        serde_json::to_writer(&mut out, &value).expect("in-memory write cannot fail");
        out.push(b'\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write_lines(dir: &tempfile::TempDir, name: &str, lines: &[&str]) -> std::path::PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, lines.join("\n")).unwrap();
        path
    }

    #[test]
    fn loads_text_alias_and_author_list() {
        let dir = tempdir().unwrap();
        let path = write_lines(
            &dir,
            "a.jsonl",
            &[r#"{"text": "A. B.", "title": "T", "authors": ["X","Y"], "domain": "d.com", "date": "04-19-2019", "label": "human"}"#],
        );
        let articles = load_jsonl(&path).unwrap();
        assert_eq!(articles.len(), 1);
        let a = &articles[0];
        assert_eq!(a.body, "A. B.");
        assert_eq!(a.authors, vec!["X", "Y"]);
        assert_eq!(a.label, Label::Human);
        assert_eq!(a.title, "T");
    }

    #[test]
    fn loads_article_alias_and_joined_authors() {
        let dir = tempdir().unwrap();
        let path = write_lines(&dir, "a.jsonl", &[r#"{"article": "A.", "authors": "X, Y"}"#]);
        let articles = load_jsonl(&path).unwrap();
        assert_eq!(articles[0].body, "A.");
        assert_eq!(articles[0].authors, vec!["X", "Y"]);
        assert_eq!(articles[0].label, Label::Unknown);
    }

    #[test]
    fn empty_file_yields_empty_list() {
        let dir = tempdir().unwrap();
        let path = write_lines(&dir, "a.jsonl", &[]);
        assert!(load_jsonl(&path).unwrap().is_empty());
    }

    #[test]
    fn malformed_json_names_the_line() {
        let dir = tempdir().unwrap();
        let path = write_lines(&dir, "a.jsonl", &[r#"{"article": "A."}"#, "{not json"]);
        match load_jsonl(&path) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected MalformedLine, got {other:?}"),
        }
    }

    #[test]
    fn missing_body_names_the_record() {
        let dir = tempdir().unwrap();
        let path = write_lines(&dir, "a.jsonl", &[r#"{"title": "T"}"#]);
        match load_jsonl(&path) {
            Err(Error::MissingBody { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected MissingBody, got {other:?}"),
        }
    }

    #[test]
    fn authors_join_rule_on_save() {
        let article = Article::new(
            "d",
            "dt",
            vec!["X".into(), "Y".into()],
            "T",
            "A.",
            Label::Human,
        );
        let joined = article_to_json(&article, BodyKey::Article, AuthorsAs::JoinedString);
        assert_eq!(joined["authors"], Value::String("X, Y".into()));
        let listed = article_to_json(&article, BodyKey::Article, AuthorsAs::List);
        assert_eq!(listed["authors"], serde_json::json!(["X", "Y"]));
    }

    #[test]
    fn extras_round_trip() {
        let dir = tempdir().unwrap();
        let path = write_lines(
            &dir,
            "a.jsonl",
            &[r#"{"article": "A.", "split": "test", "score": 3.5, "nested": {"k": [1, 2]}}"#],
        );
        let articles = load_jsonl(&path).unwrap();
        let out = dir.path().join("out.jsonl");
        save_jsonl(&articles, &out, BodyKey::Article, AuthorsAs::JoinedString).unwrap();
        let reloaded = load_jsonl(&out).unwrap();
        assert_eq!(articles, reloaded);
        assert_eq!(articles[0].extras["split"], "\"test\"");
    }

    #[test]
    fn body_key_article_wins_over_text() {
        let dir = tempdir().unwrap();
        let path = write_lines(&dir, "a.jsonl", &[r#"{"article": "A.", "text": "B."}"#]);
        let articles = load_jsonl(&path).unwrap();
        assert_eq!(articles[0].body, "A.");
        assert_eq!(articles[0].extras["text"], "\"B.\"");
    }

    #[test]
    fn provenance_round_trips_and_is_validated() {
        let dir = tempdir().unwrap();
        let good = write_lines(
            &dir,
            "good.jsonl",
            &[r#"{"article": "A one. B two.", "sentence_provenance": ["human", "generated"]}"#],
        );
        let articles = load_jsonl(&good).unwrap();
        assert_eq!(
            articles[0].sentence_provenance,
            Some(vec![Provenance::Human, Provenance::Generated])
        );
        let out = dir.path().join("out.jsonl");
        save_jsonl(&articles, &out, BodyKey::Text, AuthorsAs::List).unwrap();
        assert_eq!(load_jsonl(&out).unwrap(), articles);

        let bad = write_lines(
            &dir,
            "bad.jsonl",
            &[r#"{"article": "A one. B two.", "sentence_provenance": ["human"]}"#],
        );
        assert!(matches!(load_jsonl(&bad), Err(Error::BadRecord { .. })));
    }
}
