//! The informed-attack command: rewrite a corpus against an embedding
//! table and its gradient across a grid of step sizes, emitting the
//! rewritten articles and a plan audit per step size.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use textfray_core::embed::{attack, AttackConfig};
use textfray_core::{ReplacementPlan, Vocabulary};

use crate::error::{Error, Result};
use crate::jsonl::{load_jsonl, save_jsonl, AuthorsAs, BodyKey};
use crate::matrix::load_matrix;
use crate::vocabfile::load_vocabulary;

#[derive(Debug, Clone)]
pub struct AttackRunConfig {
    pub embeddings: PathBuf,
    pub gradients: PathBuf,
    pub vocab: PathBuf,
    pub specials: Option<PathBuf>,
    pub input: PathBuf,
    pub output_dir: PathBuf,
    pub epsilons: Vec<f32>,
    pub threshold: f64,
}

/// One audited pair, resolved to token strings for readability.
fn plan_entry(plan_from: u32, plan: &ReplacementPlan, vocab: &Vocabulary) -> Value {
    let replacement = plan.get(plan_from).expect("iterated key");
    json!({
        "from_id": plan_from,
        "to_id": replacement.to,
        "from_token": vocab.token(plan_from),
        "to_token": vocab.token(replacement.to),
        "similarity": replacement.similarity,
    })
}

pub fn run_attack(config: &AttackRunConfig) -> Result<()> {
    let vocab = load_vocabulary(&config.vocab, config.specials.as_deref())?;
    let embeddings = load_matrix(&config.embeddings)?;
    let gradients = load_matrix(&config.gradients)?;
    let articles = load_jsonl(&config.input)?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;

    for &epsilon in &config.epsilons {
        let attack_config = AttackConfig::new(epsilon, config.threshold, Default::default())?;
        let mut rewritten = Vec::with_capacity(articles.len());
        let mut audits = Vec::with_capacity(articles.len());
        for (index, article) in articles.iter().enumerate() {
            let (out, plan) = attack(article, &embeddings, &gradients, &attack_config, &vocab)?;
            let pairs: Vec<Value> =
                plan.iter().map(|(from, _)| plan_entry(from, &plan, &vocab)).collect();
            audits.push(json!({ "article_index": index, "pairs": pairs }));
            rewritten.push(out);
        }
        let articles_path = config.output_dir.join(format!("attacked_eps{epsilon}.jsonl"));
        save_jsonl(&rewritten, &articles_path, BodyKey::Article, AuthorsAs::List)?;
        let audit = json!({
            "version": 1,
            "epsilon": epsilon,
            "threshold": config.threshold,
            "articles": audits,
        });
        let audit_path = config.output_dir.join(format!("plan_eps{epsilon}.json"));
        let mut body = serde_json::to_string_pretty(&audit).expect("audit serializes");
        body.push('\n');
        fs::write(&audit_path, body).map_err(|e| Error::io(&audit_path, e))?;
    }
    Ok(())
}

/// The audit file written for one epsilon, parsed back (used by tests and
/// downstream tooling).
pub fn load_plan_audit(path: impl AsRef<Path>) -> Result<Value> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&raw).map_err(|e| Error::BadFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
