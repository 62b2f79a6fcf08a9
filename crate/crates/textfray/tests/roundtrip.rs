//! Corpus persistence properties over randomized articles, and the
//! shipped fixture lexicons against hand-computed scores.

use std::collections::BTreeMap;

use proptest::prelude::*;
use tempfile::tempdir;

use textfray::jsonl::{load_jsonl, save_jsonl, AuthorsAs, BodyKey};
use textfray::lexfile::{load_subjectivity_lexicon, load_synonym_lexicon};
use textfray_core::lexical::{article_subjectivity, SubjectivityMode};
use textfray_core::segment::segment_sentences;
use textfray_core::{Article, Label, Provenance};

fn arb_label() -> impl Strategy<Value = Label> {
    prop::sample::select(vec![Label::Human, Label::Machine, Label::Unknown])
}

fn arb_article() -> impl Strategy<Value = Article> {
    let word = prop::sample::select(vec!["alpha", "beta", "gamma", "delta", "omega"]);
    let sentence = prop::collection::vec(word, 1..5).prop_map(|ws| {
        let mut s = String::new();
        for (i, w) in ws.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            if i == 0 {
                let mut chars = w.chars();
                let first = chars.next().unwrap();
                s.extend(first.to_uppercase());
                s.push_str(chars.as_str());
            } else {
                s.push_str(w);
            }
        }
        s.push('.');
        s
    });
    (
        prop::collection::vec(sentence, 1..5),
        prop::collection::vec("[a-z]{1,8}", 0..3),
        "[a-z.]{1,12}",
        "[0-9-]{1,10}",
        "[a-zA-Z ]{0,16}",
        arb_label(),
        any::<bool>(),
        prop::collection::btree_map("[a-z_]{1,8}", 0i64..1000, 0..3),
    )
        .prop_map(
            |(sentences, authors, domain, date, title, label, with_prov, extra_nums)| {
                let body = sentences.join(" ");
                let mut article = Article::new(domain, date, authors, title, &body, label);
                if with_prov {
                    let n = segment_sentences(&body).len();
                    article.sentence_provenance =
                        Some((0..n).map(|i| match i % 3 {
                            0 => Provenance::Human,
                            1 => Provenance::Machine,
                            _ => Provenance::Generated,
                        }).collect());
                }
                let extras: BTreeMap<String, String> = extra_nums
                    .into_iter()
                    .filter(|(k, _)| {
                        // Keys colliding with schema fields would not be extras.
                        !matches!(
                            k.as_str(),
                            "article" | "text" | "title" | "authors" | "domain" | "date"
                                | "label" | "sentence_provenance"
                        )
                    })
                    .map(|(k, v)| (k, v.to_string()))
                    .collect();
                article.extras = extras;
                article
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jsonl_round_trip_is_identity(
        articles in prop::collection::vec(arb_article(), 0..6),
        body_key in prop::sample::select(vec![BodyKey::Article, BodyKey::Text]),
        authors_as in prop::sample::select(vec![AuthorsAs::List, AuthorsAs::JoinedString]),
    ) {
        let dir = tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        save_jsonl(&articles, &path, body_key, authors_as).unwrap();
        let reloaded = load_jsonl(&path).unwrap();
        prop_assert_eq!(reloaded, articles);
    }
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn shipped_subjectivity_lexicon_scores_the_reference_article() {
    let lexicon = load_subjectivity_lexicon(fixture("subjectivity.json")).unwrap();
    let article = Article::new(
        "d",
        "dt",
        vec![],
        "t",
        "The factory opened on Monday. Critics called it an amazing success. \
         Others found the launch utterly bad. The plain facts suggest a good outcome. \
         It was a boring, dull affair.",
        Label::Human,
    );
    let by = article_subjectivity(&article, &lexicon, SubjectivityMode::BySentences);
    let whole = article_subjectivity(&article, &lexicon, SubjectivityMode::Whole);
    assert!((by - 0.5517).abs() < 1e-12, "by_sentences {by}");
    assert!((whole - 0.6595714285714286).abs() < 1e-12, "whole {whole}");
}

#[test]
fn shipped_corpora_load_cleanly() {
    let targets = load_jsonl(fixture("targets.jsonl")).unwrap();
    let sources = load_jsonl(fixture("sources.jsonl")).unwrap();
    assert_eq!(targets.len(), 3);
    assert_eq!(sources.len(), 3);
    for t in &targets {
        assert_eq!(t.label, Label::Human);
        let n = segment_sentences(&t.body).len();
        assert_eq!(t.sentence_provenance.as_ref().unwrap().len(), n);
    }
    for s in &sources {
        assert_eq!(s.label, Label::Machine);
    }
    let synonyms = load_synonym_lexicon(fixture("synonyms.json")).unwrap();
    assert!(!synonyms.is_empty());
}
