//! Embedding-table token replacement: displace each used token's embedding
//! along its loss gradient, find the nearest other token by cosine
//! similarity, and rewrite the article one token id for one token id.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::article::Article;
use crate::error::Error;
use crate::segment::segment_sentences;
use crate::vocab::Vocabulary;
use crate::Result;

/// A dense `rows x dims` matrix of f32 values, row `i` belonging to token
/// id `i`. Used both for embedding tables and their loss gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    rows: usize,
    dims: usize,
    values: Vec<f32>,
}

/// Same layout as [`EmbeddingTable`]; row `i` holds d(loss)/d(embedding of
/// token `i`). Produced outside this crate (the matrix file is the
/// contract boundary).
pub type GradientTable = EmbeddingTable;

impl EmbeddingTable {
    /// Builds a table, rejecting size mismatches and non-finite entries.
    pub fn new(rows: usize, dims: usize, values: Vec<f32>) -> Result<Self> {
        if values.len() != rows * dims {
            return Err(Error::TableSize { rows, dims, len: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { row: i / dims.max(1), col: i % dims.max(1) });
        }
        Ok(Self { rows, dims, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn row(&self, index: usize) -> &[f32] {
        &self.values[index * self.dims..(index + 1) * self.dims]
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    fn check_paired(&self, other: &EmbeddingTable) -> Result<()> {
        if self.rows != other.rows || self.dims != other.dims {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows,
                left_dims: self.dims,
                right_rows: other.rows,
                right_dims: other.dims,
            });
        }
        Ok(())
    }
}

/// Attack parameters: gradient step size, similarity floor, and token ids
/// never used as source or candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackConfig {
    pub epsilon: f32,
    pub threshold: f64,
    pub excluded_ids: BTreeSet<u32>,
}

/// Similarity floor found to trade off pair yield against the number of
/// words changed.
pub const DEFAULT_THRESHOLD: f64 = 0.18;

/// Gradient step sizes exercised by default.
pub const EPSILON_GRID: [f32; 4] = [0.001, 0.1, 1.0, 5.0];

impl AttackConfig {
    pub fn new(epsilon: f32, threshold: f64, excluded_ids: BTreeSet<u32>) -> Result<Self> {
        if !(-1.0..=1.0).contains(&threshold) {
            return Err(Error::ThresholdOutOfRange { value: threshold });
        }
        Ok(Self { epsilon, threshold, excluded_ids })
    }
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            threshold: DEFAULT_THRESHOLD,
            excluded_ids: BTreeSet::new(),
        }
    }
}

/// One planned substitution and the similarity that selected it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replacement {
    pub to: u32,
    pub similarity: f64,
}

/// Token id -> token id substitution map. Never maps an id to itself.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReplacementPlan {
    pairs: BTreeMap<u32, Replacement>,
}

impl ReplacementPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: u32, to: u32, similarity: f64) -> Result<()> {
        if from == to {
            return Err(Error::SelfReplacement { id: from });
        }
        self.pairs.insert(from, Replacement { to, similarity });
        Ok(())
    }

    pub fn get(&self, from: u32) -> Option<Replacement> {
        self.pairs.get(&from).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Replacement)> + '_ {
        self.pairs.iter().map(|(&from, &r)| (from, r))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Cosine similarity `dot(u, v) / (|u| * |v|)`.
///
/// A zero-norm operand yields negative infinity so the pair can never win
/// a similarity comparison; the event is logged at debug level.
pub fn cosine_sim(u: &[f32], v: &[f32]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let mut dot = 0.0f64;
    let mut norm_u = 0.0f64;
    let mut norm_v = 0.0f64;
    for (&a, &b) in u.iter().zip(v.iter()) {
        let (a, b) = (a as f64, b as f64);
        dot += a * b;
        norm_u += a * a;
        norm_v += b * b;
    }
    if norm_u == 0.0 || norm_v == 0.0 {
        log::debug!("cosine_sim: zero-norm vector, returning -inf sentinel");
        return f64::NEG_INFINITY;
    }
    dot / (libm::sqrt(norm_u) * libm::sqrt(norm_v))
}

/// Elementwise `E + epsilon * G` (the raw gradient scaled by epsilon, not
/// its sign).
pub fn adversarial_table(
    embeddings: &EmbeddingTable,
    gradients: &GradientTable,
    epsilon: f32,
) -> Result<EmbeddingTable> {
    embeddings.check_paired(gradients)?;
    let values: Vec<f32> = embeddings
        .values
        .iter()
        .zip(&gradients.values)
        .map(|(&e, &g)| e + epsilon * g)
        .collect();
    EmbeddingTable::new(embeddings.rows, embeddings.dims, values)
}

fn displaced_row(
    embeddings: &EmbeddingTable,
    gradients: &GradientTable,
    epsilon: f32,
    token: usize,
) -> Vec<f32> {
    embeddings
        .row(token)
        .iter()
        .zip(gradients.row(token))
        .map(|(&e, &g)| e + epsilon * g)
        .collect()
}

/// Finds the replacement pair for every used token: the candidate id whose
/// original embedding is most cosine-similar to the token's displaced
/// embedding, kept when the similarity clears the threshold strictly.
///
/// The candidate scan covers every non-excluded id other than the token
/// itself; ties break to the smallest candidate id. The result does not
/// depend on scan order, so the per-token searches could run in parallel.
pub fn find_token_pairs(
    embeddings: &EmbeddingTable,
    gradients: &GradientTable,
    config: &AttackConfig,
    tokens_used: &BTreeSet<u32>,
) -> Result<ReplacementPlan> {
    embeddings.check_paired(gradients)?;
    let vocab_size = embeddings.rows;
    let mut plan = ReplacementPlan::new();
    for &token in tokens_used {
        let t = token as usize;
        if t >= vocab_size || config.excluded_ids.contains(&token) {
            continue;
        }
        let adversarial = displaced_row(embeddings, gradients, config.epsilon, t);
        let mut best_similarity = f64::NEG_INFINITY;
        let mut best_candidate: Option<u32> = None;
        for candidate in 0..vocab_size as u32 {
            if candidate == token || config.excluded_ids.contains(&candidate) {
                continue;
            }
            let similarity = cosine_sim(embeddings.row(candidate as usize), &adversarial);
            if similarity > best_similarity {
                best_similarity = similarity;
                best_candidate = Some(candidate);
            }
        }
        if let Some(candidate) = best_candidate {
            if best_similarity > config.threshold {
                plan.insert(token, candidate, best_similarity)?;
            }
        }
    }
    Ok(plan)
}

/// Rewrites the article by encoding, substituting ids per the plan, and
/// decoding. One token in, one token out: sequence length and every
/// unmapped position are preserved.
pub fn apply_plan(
    article: &Article,
    plan: &ReplacementPlan,
    vocab: &Vocabulary,
) -> Result<Article> {
    for (_, replacement) in plan.iter() {
        if replacement.to as usize >= vocab.len() {
            return Err(Error::PlanDestinationOutOfRange {
                id: replacement.to,
                size: vocab.len(),
            });
        }
    }
    let mut sequence = vocab.encode(&article.body);
    for id in sequence.ids.iter_mut() {
        if let Some(replacement) = plan.get(*id) {
            *id = replacement.to;
        }
    }
    let body = vocab.decode(&sequence);
    let mut rewritten = article.clone();
    rewritten.sentence_provenance = match &article.sentence_provenance {
        Some(p) if segment_sentences(&body).len() == p.len() => Some(p.clone()),
        _ => None,
    };
    rewritten.body = body;
    Ok(rewritten)
}

/// The full informed attack: pair search over the distinct ids of the
/// encoded body, then the one-for-one rewrite. The vocabulary's special
/// ids are excluded in addition to the config's own exclusions.
pub fn attack(
    article: &Article,
    embeddings: &EmbeddingTable,
    gradients: &GradientTable,
    config: &AttackConfig,
    vocab: &Vocabulary,
) -> Result<(Article, ReplacementPlan)> {
    if embeddings.rows() != vocab.len() {
        return Err(Error::TableVocabMismatch { rows: embeddings.rows(), vocab: vocab.len() });
    }
    let mut effective = config.clone();
    effective.excluded_ids.extend(vocab.special_ids().iter().copied());
    let tokens_used: BTreeSet<u32> = vocab.encode(&article.body).ids.into_iter().collect();
    let plan = find_token_pairs(embeddings, gradients, &effective, &tokens_used)?;
    let rewritten = apply_plan(article, &plan, vocab)?;
    Ok((rewritten, plan))
}
