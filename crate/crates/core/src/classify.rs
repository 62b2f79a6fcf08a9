//! Classifier verdicts and the two built-in reference classifiers that
//! keep the whole pipeline testable offline.

use crate::article::{Article, Provenance};
use crate::error::Error;
use crate::Result;

/// The class a verdict assigns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictedClass {
    Human,
    Machine,
}

impl PredictedClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PredictedClass::Human => "human",
            PredictedClass::Machine => "machine",
        }
    }
}

/// Both class probabilities plus the argmax label. Ties label machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub p_machine: f64,
    pub p_human: f64,
    pub label: PredictedClass,
}

impl Verdict {
    /// Builds a verdict from the machine probability; the human
    /// probability is its complement.
    pub fn from_p_machine(p_machine: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_machine) {
            return Err(Error::ProbabilityOutOfRange { value: p_machine });
        }
        let p_human = 1.0 - p_machine;
        Ok(Self { p_machine, p_human, label: label_for(p_machine, p_human) })
    }

    /// Builds a verdict from both probabilities as a remote service
    /// reported them; they must sum to 1 within 1e-6.
    pub fn from_pair(p_machine: f64, p_human: f64) -> Result<Self> {
        for p in [p_machine, p_human] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { value: p });
            }
        }
        if ((p_machine + p_human) - 1.0).abs() > 1e-6 {
            return Err(Error::InconsistentVerdict { p_machine, p_human });
        }
        Ok(Self { p_machine, p_human, label: label_for(p_machine, p_human) })
    }
}

fn label_for(p_machine: f64, p_human: f64) -> PredictedClass {
    if p_machine >= p_human {
        PredictedClass::Machine
    } else {
        PredictedClass::Human
    }
}

/// Reference classifier driven by sentence provenance: the machine
/// probability is the fraction of machine-origin or generated sentences,
/// 0.5 when no provenance is recorded.
pub fn provenance_oracle(article: &Article) -> Result<Verdict> {
    if article.body.trim().is_empty() {
        return Err(Error::EmptyBody);
    }
    let p_machine = match &article.sentence_provenance {
        Some(prov) if !prov.is_empty() => {
            let machine = prov
                .iter()
                .filter(|p| matches!(p, Provenance::Machine | Provenance::Generated))
                .count();
            machine as f64 / prov.len() as f64
        }
        _ => 0.5,
    };
    Verdict::from_p_machine(p_machine)
}

/// Slope of the lexical stub's logistic over mean word length.
pub const LEXICAL_STUB_SLOPE: f64 = 1.0;
/// Intercept of the lexical stub's logistic.
pub const LEXICAL_STUB_INTERCEPT: f64 = -4.5;

/// Deterministic content-sensitive classifier: a logistic over the mean
/// whitespace-token length (in characters) of the body.
pub fn lexical_stub(article: &Article) -> Result<Verdict> {
    if article.body.trim().is_empty() {
        return Err(Error::EmptyBody);
    }
    let mut chars = 0usize;
    let mut words = 0usize;
    for word in article.body.split_whitespace() {
        chars += word.chars().count();
        words += 1;
    }
    let mean_len = chars as f64 / words as f64;
    let p_machine = logistic(LEXICAL_STUB_SLOPE * mean_len + LEXICAL_STUB_INTERCEPT);
    Verdict::from_p_machine(p_machine)
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::Label;
    use alloc::vec;

    fn article(body: &str) -> Article {
        Article::new("d", "date", vec![], "t", body, Label::Human)
    }

    #[test]
    fn tie_labels_machine() {
        let v = Verdict::from_p_machine(0.5).unwrap();
        assert_eq!(v.label, PredictedClass::Machine);
        assert_eq!(v.p_human, 0.5);
        let v = Verdict::from_p_machine(0.49).unwrap();
        assert_eq!(v.label, PredictedClass::Human);
    }

    #[test]
    fn pair_must_sum_to_one() {
        assert!(Verdict::from_pair(0.3, 0.7).is_ok());
        assert!(matches!(
            Verdict::from_pair(0.3, 0.6),
            Err(Error::InconsistentVerdict { .. })
        ));
        assert!(matches!(
            Verdict::from_pair(1.2, -0.2),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn oracle_counts_machine_and_generated_sentences() {
        let mut a = article("A. B. C. D.");
        a.sentence_provenance = Some(vec![Provenance::Human; 4]);
        assert_eq!(provenance_oracle(&a).unwrap().p_machine, 0.0);

        a.sentence_provenance = Some(vec![
            Provenance::Machine,
            Provenance::Generated,
            Provenance::Human,
            Provenance::Human,
        ]);
        let v = provenance_oracle(&a).unwrap();
        assert_eq!(v.p_machine, 0.5);
        assert_eq!(v.label, PredictedClass::Machine);
    }

    #[test]
    fn oracle_without_provenance_is_uncertain() {
        let a = article("A. B.");
        assert_eq!(provenance_oracle(&a).unwrap().p_machine, 0.5);
    }

    #[test]
    fn oracle_rejects_empty_bodies() {
        assert_eq!(provenance_oracle(&article("  ")), Err(Error::EmptyBody));
        assert_eq!(lexical_stub(&article("")), Err(Error::EmptyBody));
    }

    #[test]
    fn stub_is_half_at_mean_word_length_4_5() {
        // (4 + 5) / 2 = 4.5 characters -> logistic(0) = 0.5.
        let v = lexical_stub(&article("abcd abcde")).unwrap();
        assert!((v.p_machine - 0.5).abs() < 1e-12);
        assert_eq!(v.label, PredictedClass::Machine);
    }

    #[test]
    fn stub_moves_with_word_length() {
        let short = lexical_stub(&article("a b c")).unwrap();
        let long = lexical_stub(&article("extraordinary considerations")).unwrap();
        assert!(short.p_machine < 0.5);
        assert!(long.p_machine > 0.5);
    }
}
