//! Lexicon files: JSON maps `{"word": ["syn1", "syn2"]}` for synonyms and
//! `{"word": weight}` for subjectivity.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use textfray_core::lexical::{SubjectivityLexicon, SynonymLexicon};

use crate::error::{Error, Result};

pub fn load_synonym_lexicon(path: impl AsRef<Path>) -> Result<SynonymLexicon> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let entries: BTreeMap<String, Vec<String>> =
        serde_json::from_str(&raw).map_err(|e| Error::BadFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    Ok(SynonymLexicon::from_entries(entries))
}

pub fn load_subjectivity_lexicon(path: impl AsRef<Path>) -> Result<SubjectivityLexicon> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let weights: BTreeMap<String, f64> =
        serde_json::from_str(&raw).map_err(|e| Error::BadFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    Ok(SubjectivityLexicon::from_weights(weights)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn loads_both_lexicon_shapes() {
        let dir = tempdir().unwrap();
        let syn = dir.path().join("syn.json");
        fs::write(&syn, r#"{"good": ["fine", "good"], "quick": ["fast"]}"#).unwrap();
        let lex = load_synonym_lexicon(&syn).unwrap();
        assert_eq!(lex.get("good"), Some(&["fine".to_string()][..]));

        let subj = dir.path().join("subj.json");
        fs::write(&subj, r#"{"great": 0.75, "bad": 0.667}"#).unwrap();
        let lex = load_subjectivity_lexicon(&subj).unwrap();
        assert_eq!(lex.weight("great"), Some(0.75));
    }

    #[test]
    fn out_of_range_weight_fails() {
        let dir = tempdir().unwrap();
        let subj = dir.path().join("subj.json");
        fs::write(&subj, r#"{"x": 2.0}"#).unwrap();
        assert!(matches!(
            load_subjectivity_lexicon(&subj),
            Err(Error::Core(textfray_core::Error::WeightOutOfRange { .. }))
        ));
    }
}
