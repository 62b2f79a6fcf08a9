//! Sentence-level blending attacks: substitution and insertion spectra,
//! a single-sentence position sweep, and a prefix length sweep.
//!
//! All randomness flows through [`SeededRng`]; equal seeds produce
//! bit-identical spectra on every platform. Variant metadata (title,
//! authors, domain, date) is always copied from the target unchanged.

use alloc::string::String;

use crate::article::{Article, Provenance};
use crate::error::Error;
use crate::rng::{derive_seed, shuffle, SeededRng};
use crate::segment::{join_sentences, segment_sentences};
use crate::spectrum::{Spectrum, SpectrumMode, SpliceOp};
use crate::Result;

/// Rebuilds an article around a new sentence list.
///
/// Provenance is attached only when the rebuilt body re-segments to the
/// same sentence count (an unterminated input sentence can merge with its
/// successor); a misaligned list is dropped rather than stored.
pub(crate) fn article_with_sentences(
    meta: &Article,
    sentences: &[String],
    provenance: &[Provenance],
) -> Article {
    let body = join_sentences(sentences);
    let aligned = segment_sentences(&body).len() == provenance.len();
    let mut article = meta.clone();
    article.body = body;
    article.sentence_provenance = aligned.then(|| provenance.to_vec());
    article
}

/// Builds the substitution spectrum: variant `k` has the first `k` slots of
/// a seeded target permutation replaced by the first `k` sentences of a
/// seeded source permutation (target permutation drawn first, then the
/// source permutation, from the same stream). Fractions are `k / T`; the
/// spectrum stops at `min(T, S)` replacements.
pub fn substitute_spectrum(
    target: &Article,
    source: &Article,
    rng: &mut SeededRng,
) -> Result<Spectrum> {
    let target_sents = segment_sentences(&target.body);
    if target_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    let source_sents = segment_sentences(&source.body);
    let t = target_sents.len();
    let target_perm = shuffle(t, rng);
    let source_perm = shuffle(source_sents.len(), rng);
    let steps = t.min(source_sents.len());

    let source_prov = source.provenance_or_default(source_sents.len());
    let mut sentences = target_sents.clone();
    let mut provenance = target.provenance_or_default(t);

    let mut spectrum = Spectrum::new(SpectrumMode::Substitute, target.clone(), Some(rng.seed()));
    spectrum.push_variant(target.clone(), 0, 0.0)?;
    for k in 1..=steps {
        let slot = target_perm[k - 1];
        let source_index = source_perm[k - 1];
        sentences[slot] = source_sents[source_index].clone();
        provenance[slot] = source_prov[source_index];
        spectrum.log_op(k, SpliceOp::ReplaceSentence { target_slot: slot, source_index });
        let variant = article_with_sentences(target, &sentences, &provenance);
        spectrum.push_variant(variant, k, k as f64 / t as f64)?;
    }
    Ok(spectrum)
}

/// Draws the insertion gap for 1-based step `k`: the first element of a
/// full shuffle over the current gap count, seeded from
/// `derive_seed(seed, k)` so each step is independently replayable.
fn insertion_gap(seed: u64, step: usize, gap_count: usize) -> usize {
    let mut rng = SeededRng::new(derive_seed(seed, step as u64));
    shuffle(gap_count, &mut rng)[0]
}

/// Builds the insertion spectrum: variant `k` has the first `k` sentences
/// of a seeded source permutation inserted at seeded gaps; target sentences
/// are never removed. Fractions are `k / (T + k)`.
pub fn insert_spectrum(
    target: &Article,
    source: &Article,
    rng: &mut SeededRng,
) -> Result<Spectrum> {
    let target_sents = segment_sentences(&target.body);
    if target_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    let source_sents = segment_sentences(&source.body);
    let t = target_sents.len();
    let source_perm = shuffle(source_sents.len(), rng);
    let source_prov = source.provenance_or_default(source_sents.len());
    let seed = rng.seed();

    let mut sentences = target_sents;
    let mut provenance = target.provenance_or_default(t);

    let mut spectrum = Spectrum::new(SpectrumMode::Insert, target.clone(), Some(seed));
    spectrum.push_variant(target.clone(), 0, 0.0)?;
    for k in 1..=source_sents.len() {
        let gap = insertion_gap(seed, k, sentences.len() + 1);
        let source_index = source_perm[k - 1];
        sentences.insert(gap, source_sents[source_index].clone());
        provenance.insert(gap, source_prov[source_index]);
        spectrum.log_op(k, SpliceOp::InsertSentence { gap, source_index });
        let variant = article_with_sentences(target, &sentences, &provenance);
        spectrum.push_variant(variant, k, k as f64 / (t + k) as f64)?;
    }
    Ok(spectrum)
}

/// Inserts `sentence` at every possible gap of the target: variant `p`
/// (step `p`, `0 <= p <= T`) carries the insertion at gap `p`. Every
/// variant has the same perturbation fraction `1 / (T + 1)`.
pub fn position_sweep(target: &Article, sentence: &str) -> Result<Spectrum> {
    let target_sents = segment_sentences(&target.body);
    if target_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    if sentence.trim().is_empty() {
        return Err(Error::EmptySentence);
    }
    let t = target_sents.len();
    let provenance = target.provenance_or_default(t);
    let fraction = 1.0 / (t + 1) as f64;

    let mut spectrum = Spectrum::new(SpectrumMode::Position, target.clone(), None);
    for gap in 0..=t {
        let mut sentences = target_sents.clone();
        let mut prov = provenance.clone();
        sentences.insert(gap, String::from(sentence));
        prov.insert(gap, Provenance::Machine);
        spectrum.log_op(gap, SpliceOp::InsertAt { gap });
        let variant = article_with_sentences(target, &sentences, &prov);
        spectrum.push_variant(variant, gap, fraction)?;
    }
    Ok(spectrum)
}

/// Builds the length spectrum: variant `k` (step `k`, `1 <= k <= T`) is the
/// first `k` sentences of the target in original order, fraction `k / T`.
pub fn length_sweep(target: &Article) -> Result<Spectrum> {
    let target_sents = segment_sentences(&target.body);
    if target_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    let t = target_sents.len();
    let provenance = target.provenance_or_default(t);

    let mut spectrum = Spectrum::new(SpectrumMode::Length, target.clone(), None);
    for k in 1..=t {
        spectrum.log_op(k, SpliceOp::TruncateTo { sentences: k });
        let variant = article_with_sentences(target, &target_sents[..k], &provenance[..k]);
        spectrum.push_variant(variant, k, k as f64 / t as f64)?;
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::Label;
    use crate::segment::normalize_whitespace;
    use alloc::string::ToString;
    use alloc::vec;

    fn article(body: &str, label: Label) -> Article {
        Article::new("d.com", "04-19-2019", vec!["A".to_string()], "T", body, label)
    }

    #[test]
    fn substitute_variant_zero_is_the_target() {
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0. S1. S2.", Label::Machine);
        let mut rng = SeededRng::new(7);
        let spec = substitute_spectrum(&target, &source, &mut rng).unwrap();
        assert_eq!(spec.variants()[0].article, target);
        assert_eq!(spec.variants()[0].step, 0);
        assert_eq!(spec.variants()[0].fraction, 0.0);
    }

    #[test]
    fn substitute_golden_seed7() {
        // Frozen from the independent reference: t_perm = [1, 2, 0],
        // s_perm = [2, 1, 0] for seed 7.
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0. S1. S2.", Label::Machine);
        let mut rng = SeededRng::new(7);
        let spec = substitute_spectrum(&target, &source, &mut rng).unwrap();
        let bodies: Vec<&str> = spec.variants().iter().map(|v| v.article.body.as_str()).collect();
        assert_eq!(
            bodies,
            vec!["T0. T1. T2.", "T0. S2. T2.", "T0. S2. S1.", "S0. S2. S1."]
        );
        let fractions: Vec<f64> = spec.variants().iter().map(|v| v.fraction).collect();
        assert_eq!(fractions, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
    }

    #[test]
    fn substitute_final_variant_has_no_target_sentences() {
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0. S1. S2. S3.", Label::Machine);
        let mut rng = SeededRng::new(123);
        let spec = substitute_spectrum(&target, &source, &mut rng).unwrap();
        let last = &spec.variants().last().unwrap().article;
        for s in ["T0.", "T1.", "T2."] {
            assert!(!last.body.contains(s), "target sentence {s} survived");
        }
        assert_eq!(
            last.sentence_provenance,
            Some(vec![Provenance::Machine; 3])
        );
    }

    #[test]
    fn substitute_truncates_when_source_is_short() {
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0.", Label::Machine);
        let mut rng = SeededRng::new(5);
        let spec = substitute_spectrum(&target, &source, &mut rng).unwrap();
        assert_eq!(spec.len(), 2); // base + one replacement
    }

    #[test]
    fn substitute_rejects_empty_target() {
        let target = article("", Label::Human);
        let source = article("S0.", Label::Machine);
        let mut rng = SeededRng::new(5);
        assert_eq!(
            substitute_spectrum(&target, &source, &mut rng),
            Err(Error::EmptyBody)
        );
    }

    #[test]
    fn insert_golden_seed7() {
        // Frozen from the independent reference: s_perm = [0, 1]; gaps are
        // 3 then 1 for derive_seed(7, 1) and derive_seed(7, 2).
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0. S1.", Label::Machine);
        let mut rng = SeededRng::new(7);
        let spec = insert_spectrum(&target, &source, &mut rng).unwrap();
        let bodies: Vec<&str> = spec.variants().iter().map(|v| v.article.body.as_str()).collect();
        assert_eq!(
            bodies,
            vec!["T0. T1. T2.", "T0. T1. T2. S0.", "T0. S1. T1. T2. S0."]
        );
        let fractions: Vec<f64> = spec.variants().iter().map(|v| v.fraction).collect();
        assert_eq!(fractions, vec![0.0, 0.25, 0.4]);
    }

    #[test]
    fn insert_preserves_target_subsequence() {
        let target = article("T0. T1.", Label::Human);
        let source = article("S0.", Label::Machine);
        let mut rng = SeededRng::new(9);
        let spec = insert_spectrum(&target, &source, &mut rng).unwrap();
        let v1 = &spec.variants()[1].article;
        let sents = segment_sentences(&v1.body);
        assert_eq!(sents.len(), 3);
        let positions: Vec<usize> = ["T0.", "T1."]
            .iter()
            .map(|t| sents.iter().position(|s| s == t).unwrap())
            .collect();
        assert!(positions[0] < positions[1]);
    }

    #[test]
    fn position_sweep_covers_every_gap() {
        let target = article("T0. T1.", Label::Human);
        let spec = position_sweep(&target, "M.").unwrap();
        assert_eq!(spec.len(), 3);
        assert!(spec.variants()[0].article.body.starts_with("M."));
        assert!(spec.variants()[2].article.body.ends_with("M."));
        for v in spec.variants() {
            assert_eq!(v.fraction, 1.0 / 3.0);
            assert_eq!(segment_sentences(&v.article.body).len(), 3);
        }
    }

    #[test]
    fn position_sweep_rejects_empty_sentence() {
        let target = article("T0.", Label::Human);
        assert_eq!(position_sweep(&target, "  "), Err(Error::EmptySentence));
    }

    #[test]
    fn length_sweep_prefixes() {
        let target = article("T0. T1. T2.", Label::Human);
        let spec = length_sweep(&target).unwrap();
        assert_eq!(spec.len(), 3);
        assert_eq!(spec.variants()[0].article.body, "T0.");
        assert_eq!(
            spec.variants()[2].article.body,
            normalize_whitespace(&target.body)
        );
        for (i, v) in spec.variants().iter().enumerate() {
            assert_eq!(segment_sentences(&v.article.body).len(), i + 1);
            assert_eq!(v.step, i + 1);
        }
    }

    #[test]
    fn variants_keep_target_metadata() {
        let target = article("T0. T1. T2.", Label::Human);
        let source = article("S0. S1. S2.", Label::Machine);
        let mut rng = SeededRng::new(11);
        let spec = substitute_spectrum(&target, &source, &mut rng).unwrap();
        for v in spec.variants() {
            assert_eq!(v.article.title, target.title);
            assert_eq!(v.article.authors, target.authors);
            assert_eq!(v.article.domain, target.domain);
            assert_eq!(v.article.date, target.date);
        }
    }

    #[test]
    fn equal_seeds_give_equal_spectra() {
        let target = article("T0. T1. T2. T3.", Label::Human);
        let source = article("S0. S1. S2. S3.", Label::Machine);
        let a = substitute_spectrum(&target, &source, &mut SeededRng::new(3)).unwrap();
        let b = substitute_spectrum(&target, &source, &mut SeededRng::new(3)).unwrap();
        assert_eq!(a, b);
    }
}
