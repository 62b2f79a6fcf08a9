//! End-to-end campaign runs over temporary corpora: curve values, staged
//! vs. single-shot artifact identity, reruns byte-for-byte, and failure
//! isolation.

use std::fs;
use std::path::{Path, PathBuf};

use tempfile::tempdir;

use textfray::campaign::{
    cmd_classify, cmd_generate, cmd_measure, cmd_run, load_curves, CampaignConfig, ModeConfig,
    CURVES_FILE, MANIFEST_FILE, METRICS_FILE,
};
use textfray::classifier::ClassifierConfig;
use textfray::jsonl::{AuthorsAs, BodyKey};

fn write_file(path: &Path, content: &str) -> PathBuf {
    fs::write(path, content).unwrap();
    path.to_path_buf()
}

fn three_sentence_pair(dir: &Path) -> (PathBuf, PathBuf) {
    let targets = write_file(
        &dir.join("targets.jsonl"),
        concat!(
            r#"{"article": "Alpha one. Beta two. Gamma three.", "title": "T", "authors": ["A"], "#,
            r#""domain": "d.com", "date": "01-01-2020", "label": "human", "#,
            r#""sentence_provenance": ["human", "human", "human"]}"#,
            "\n"
        ),
    );
    let sources = write_file(
        &dir.join("sources.jsonl"),
        concat!(
            r#"{"article": "Delta one. Epsilon two. Zeta three.", "title": "T", "authors": ["A"], "#,
            r#""domain": "d.com", "date": "01-01-2020", "label": "machine"}"#,
            "\n"
        ),
    );
    (targets, sources)
}

fn config(targets: PathBuf, sources: Option<PathBuf>, mode: ModeConfig, out: PathBuf) -> CampaignConfig {
    CampaignConfig {
        seed: 42,
        targets,
        sources,
        mode,
        classifier: ClassifierConfig::ProvenanceOracle,
        output_dir: out,
        decision_threshold: 0.5,
        body_key: BodyKey::Article,
        authors_as: AuthorsAs::List,
    }
}

#[test]
fn substitute_campaign_with_oracle_gives_the_linear_curve() {
    let dir = tempdir().unwrap();
    let (targets, sources) = three_sentence_pair(dir.path());
    let cfg = config(targets, Some(sources), ModeConfig::Substitute, dir.path().join("out"));
    let outcome = cmd_run(&cfg).unwrap();
    assert!(outcome.all_completed());
    assert_eq!(outcome.completed, vec!["s0000-substitute".to_string()]);

    let rows = load_curves(cfg.output_dir.join(CURVES_FILE)).unwrap();
    let probs: Vec<f64> = rows.iter().map(|r| r.p_machine).collect();
    assert_eq!(probs, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
    let fractions: Vec<f64> = rows.iter().map(|r| r.fraction).collect();
    assert_eq!(fractions, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(cfg.output_dir.join(METRICS_FILE)).unwrap())
            .unwrap();
    let spectrum = &metrics["spectra"][0];
    assert_eq!(spectrum["flip_point"], serde_json::json!(2));
    assert_eq!(spectrum["hesitation_count"], serde_json::json!(1));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(cfg.output_dir.join(MANIFEST_FILE)).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], serde_json::json!(42));
    assert!(manifest["outputs"].as_object().unwrap().contains_key(CURVES_FILE));
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        for entry in fs::read_dir(&current).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempdir().unwrap();
    let (targets, sources) = three_sentence_pair(dir.path());
    let cfg = config(targets, Some(sources), ModeConfig::Insert, dir.path().join("out"));
    cmd_run(&cfg).unwrap();
    let first = snapshot(&cfg.output_dir);
    cmd_run(&cfg).unwrap();
    let second = snapshot(&cfg.output_dir);
    assert_eq!(first, second);
}

#[test]
fn staged_commands_produce_the_run_artifacts() {
    let dir = tempdir().unwrap();
    let (targets, sources) = three_sentence_pair(dir.path());
    let run_cfg =
        config(targets.clone(), Some(sources.clone()), ModeConfig::Substitute, dir.path().join("a"));
    cmd_run(&run_cfg).unwrap();

    let staged_cfg = config(targets, Some(sources), ModeConfig::Substitute, dir.path().join("b"));
    cmd_generate(&staged_cfg).unwrap();
    cmd_classify(&staged_cfg).unwrap();
    cmd_measure(&staged_cfg).unwrap();

    for file in [CURVES_FILE, METRICS_FILE] {
        let a = fs::read(run_cfg.output_dir.join(file)).unwrap();
        let b = fs::read(staged_cfg.output_dir.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between run and staged execution");
    }
}

#[test]
fn length_campaign_emits_one_row_per_prefix() {
    let dir = tempdir().unwrap();
    let sentences: Vec<String> =
        (0..8).map(|i| format!("Sentence number {i} sits here.")).collect();
    let body = sentences.join(" ");
    let targets = write_file(
        &dir.path().join("targets.jsonl"),
        &format!(
            r#"{{"article": "{body}", "title": "T", "authors": ["A"], "domain": "d", "date": "dt", "label": "human"}}"#,
        ),
    );
    let mut cfg = config(targets, None, ModeConfig::Length, dir.path().join("out"));
    cfg.classifier = ClassifierConfig::LexicalStub;
    let outcome = cmd_run(&cfg).unwrap();
    assert!(outcome.all_completed());
    let rows = load_curves(cfg.output_dir.join(CURVES_FILE)).unwrap();
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.step, i + 1);
        assert_eq!(row.fraction, (i + 1) as f64 / 8.0);
    }
}

#[test]
fn failures_isolate_per_spectrum() {
    let dir = tempdir().unwrap();
    let targets = write_file(
        &dir.path().join("targets.jsonl"),
        concat!(
            r#"{"article": "Good body one. Good body two.", "title": "ok", "label": "human"}"#,
            "\n",
            r#"{"article": "", "title": "broken", "label": "human"}"#,
            "\n",
            r#"{"article": "Fine body three. Fine body four.", "title": "ok2", "label": "human"}"#,
            "\n"
        ),
    );
    let sources = write_file(
        &dir.path().join("sources.jsonl"),
        concat!(r#"{"article": "M one. M two.", "label": "machine"}"#, "\n"),
    );
    let cfg = config(targets, Some(sources), ModeConfig::Substitute, dir.path().join("out"));
    let outcome = cmd_run(&cfg).unwrap();
    assert_eq!(outcome.completed.len(), 2);
    assert_eq!(outcome.failed.len(), 1);
    assert_eq!(outcome.failed[0].id, "s0001-substitute");
    assert!(!outcome.all_completed());

    // The other spectra still produced rows.
    let rows = load_curves(cfg.output_dir.join(CURVES_FILE)).unwrap();
    assert!(rows.iter().all(|r| r.spectrum_id != "s0001-substitute"));
    assert!(!rows.is_empty());
}

#[test]
fn synonym_campaign_runs_from_fixture_lexicon() {
    let dir = tempdir().unwrap();
    let targets = write_file(
        &dir.path().join("targets.jsonl"),
        concat!(
            r#"{"article": "A good plan. A small step.", "title": "T", "label": "human"}"#,
            "\n"
        ),
    );
    let lexicon = write_file(
        &dir.path().join("syn.json"),
        r#"{"good": ["fine"], "small": ["tiny"], "plan": ["scheme"]}"#,
    );
    let mut cfg = config(
        targets,
        None,
        ModeConfig::Synonym { lexicon },
        dir.path().join("out"),
    );
    cfg.classifier = ClassifierConfig::LexicalStub;
    let outcome = cmd_run(&cfg).unwrap();
    assert!(outcome.all_completed());
    let rows = load_curves(cfg.output_dir.join(CURVES_FILE)).unwrap();
    assert_eq!(rows.len(), 4); // base + three candidate words
}

#[test]
fn config_validation_rejects_missing_paths_and_bad_thresholds() {
    let dir = tempdir().unwrap();
    let (targets, sources) = three_sentence_pair(dir.path());
    let mut cfg = config(
        targets.clone(),
        Some(dir.path().join("missing.jsonl")),
        ModeConfig::Substitute,
        dir.path().join("out"),
    );
    assert!(textfray::campaign::validate_config(&cfg).is_err());
    cfg.sources = Some(sources);
    assert!(textfray::campaign::validate_config(&cfg).is_ok());
    cfg.decision_threshold = 1.5;
    assert!(textfray::campaign::validate_config(&cfg).is_err());
    let no_sources = config(targets, None, ModeConfig::Substitute, dir.path().join("out"));
    assert!(textfray::campaign::validate_config(&no_sources).is_err());
}
