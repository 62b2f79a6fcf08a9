//! The spectrum structure: an ordered family of perturbed variants of one
//! base article with a non-decreasing perturbation fraction, plus the
//! splice log that makes every variant auditable.

use alloc::string::String;
use alloc::vec::Vec;

use crate::article::Article;
use crate::error::Error;
use crate::Result;

/// How a spectrum's variants were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    Substitute,
    Insert,
    Position,
    Length,
    SubjectivityAsc,
    SubjectivityDesc,
    Synonym,
    GeneratorSentence,
    GeneratorParagraph,
}

impl SpectrumMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumMode::Substitute => "substitute",
            SpectrumMode::Insert => "insert",
            SpectrumMode::Position => "position",
            SpectrumMode::Length => "length",
            SpectrumMode::SubjectivityAsc => "subjectivity_asc",
            SpectrumMode::SubjectivityDesc => "subjectivity_desc",
            SpectrumMode::Synonym => "synonym",
            SpectrumMode::GeneratorSentence => "generator_sentence",
            SpectrumMode::GeneratorParagraph => "generator_paragraph",
        }
    }
}

/// One recorded edit, keyed by the step that performed it.
#[derive(Debug, Clone, PartialEq)]
pub enum SpliceOp {
    /// Sentence at `target_slot` replaced by source sentence `source_index`.
    ReplaceSentence { target_slot: usize, source_index: usize },
    /// Source sentence `source_index` inserted at gap `gap`.
    InsertSentence { gap: usize, source_index: usize },
    /// The sweep sentence inserted at gap `gap`.
    InsertAt { gap: usize },
    /// Body truncated to its first `sentences` sentences.
    TruncateTo { sentences: usize },
    /// Whitespace token at `position` swapped for a synonym.
    SwapWord { position: usize, from: String, to: String },
    /// Unit at `unit` replaced by generated text.
    ReplaceUnit { unit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpliceEvent {
    pub step: usize,
    pub op: SpliceOp,
}

/// One perturbed variant and its position along the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVariant {
    pub article: Article,
    pub step: usize,
    pub fraction: f64,
}

/// Ordered variants of one base article.
///
/// Steps increase strictly and fractions never decrease. For the
/// substitution, insertion, synonym, subjectivity, and generator modes the
/// first variant is the unmodified base at step 0, fraction 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    mode: SpectrumMode,
    base: Article,
    seed: Option<u64>,
    variants: Vec<SpectrumVariant>,
    splice_log: Vec<SpliceEvent>,
}

impl Spectrum {
    pub fn new(mode: SpectrumMode, base: Article, seed: Option<u64>) -> Self {
        Self {
            mode,
            base,
            seed,
            variants: Vec::new(),
            splice_log: Vec::new(),
        }
    }

    pub fn mode(&self) -> SpectrumMode {
        self.mode
    }

    pub fn base(&self) -> &Article {
        &self.base
    }

    /// The seed the spectrum was generated from, when the mode is seeded.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn variants(&self) -> &[SpectrumVariant] {
        &self.variants
    }

    pub fn splice_log(&self) -> &[SpliceEvent] {
        &self.splice_log
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    /// Appends a variant, enforcing step and fraction monotonicity.
    pub fn push_variant(&mut self, article: Article, step: usize, fraction: f64) -> Result<()> {
        if let Some(last) = self.variants.last() {
            if step <= last.step {
                return Err(Error::NonMonotonicStep { step, prev: last.step });
            }
            if !(0.0..=1.0).contains(&fraction) || fraction < last.fraction {
                return Err(Error::InvalidFraction { fraction, prev: last.fraction });
            }
        } else if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidFraction { fraction, prev: 0.0 });
        }
        self.variants.push(SpectrumVariant { article, step, fraction });
        Ok(())
    }

    /// Records an edit attributed to `step`.
    pub fn log_op(&mut self, step: usize, op: SpliceOp) {
        self.splice_log.push(SpliceEvent { step, op });
    }
}
