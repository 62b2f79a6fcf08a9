//! Unit-level splicing for generated-text substitution.
//!
//! The generation itself arrives from outside (an HTTP completion service
//! in the companion crate); this module owns the pure parts: quote
//! normalization, unit segmentation, and the replace-the-unit-after-the-
//! seed bookkeeping including per-sentence provenance.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::article::{Article, Provenance};
use crate::error::Error;
use crate::segment::{join_paragraphs, join_sentences, segment_paragraphs, segment_sentences};
use crate::Result;

/// Granularity of generation and replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenUnit {
    Sentence,
    Paragraph,
}

impl GenUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            GenUnit::Sentence => "sentence",
            GenUnit::Paragraph => "paragraph",
        }
    }
}

/// Replaces curly double quotes with `"` and curly single
/// quotes/apostrophes with `'`. Idempotent; every other character is
/// untouched.
pub fn normalize_quotes(text: &str) -> String {
    text.chars()
        .map(|c| match c {
            '\u{201C}' | '\u{201D}' => '"',
            '\u{2018}' | '\u{2019}' => '\'',
            other => other,
        })
        .collect()
}

/// Segments text at the given granularity.
pub fn segment_units(text: &str, unit: GenUnit) -> Vec<String> {
    match unit {
        GenUnit::Sentence => segment_sentences(text),
        GenUnit::Paragraph => segment_paragraphs(text),
    }
}

/// The first unit of a generation, or `None` when it segments to nothing.
pub fn first_unit(text: &str, unit: GenUnit) -> Option<String> {
    segment_units(text, unit).into_iter().next()
}

/// An article decomposed into units for cumulative generation splicing.
///
/// Tracks which units hold generated text and the per-sentence provenance
/// of each unit, so intermediate and final articles stay auditable.
#[derive(Debug, Clone)]
pub struct ArticleUnits {
    meta: Article,
    unit_kind: GenUnit,
    units: Vec<String>,
    generated: Vec<bool>,
    unit_provenance: Vec<Vec<Provenance>>,
}

impl ArticleUnits {
    pub fn from_article(article: &Article, unit_kind: GenUnit) -> Result<Self> {
        let units = segment_units(&article.body, unit_kind);
        if units.is_empty() {
            return Err(Error::EmptyBody);
        }
        let unit_provenance: Vec<Vec<Provenance>> = match unit_kind {
            GenUnit::Sentence => {
                let prov = article.provenance_or_default(units.len());
                prov.into_iter().map(|p| vec![p]).collect()
            }
            GenUnit::Paragraph => {
                // Per-paragraph sentence counts are authoritative here; the
                // whole-body segmentation can merge across unterminated
                // paragraph boundaries.
                let counts: Vec<usize> =
                    units.iter().map(|u| segment_sentences(u).len()).collect();
                let total: usize = counts.iter().sum();
                let flat = article.provenance_or_default(total);
                let mut offset = 0usize;
                counts
                    .iter()
                    .map(|&c| {
                        let run = flat[offset..offset + c].to_vec();
                        offset += c;
                        run
                    })
                    .collect()
            }
        };
        Ok(Self {
            meta: article.clone(),
            unit_kind,
            units,
            generated: vec![false; unit_provenance.len()],
            unit_provenance,
        })
    }

    pub fn unit_kind(&self) -> GenUnit {
        self.unit_kind
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn is_generated(&self, index: usize) -> bool {
        self.generated[index]
    }

    pub fn generated_count(&self) -> usize {
        self.generated.iter().filter(|&&g| g).count()
    }

    /// Fraction of units holding generated text.
    pub fn fraction(&self) -> f64 {
        self.generated_count() as f64 / self.units.len() as f64
    }

    /// Seed positions still usable: the seed unit and the unit after it
    /// must both be non-generated, and a following unit must exist.
    pub fn eligible_seeds(&self) -> Vec<usize> {
        (0..self.units.len().saturating_sub(1))
            .filter(|&i| !self.generated[i] && !self.generated[i + 1])
            .collect()
    }

    /// Replaces the unit after `seed_index` with `generation_unit`, marking
    /// it generated.
    pub fn replace_after(&mut self, seed_index: usize, generation_unit: &str) -> Result<()> {
        if seed_index >= self.units.len() {
            return Err(Error::UnitIndexOutOfRange {
                index: seed_index,
                units: self.units.len(),
            });
        }
        if seed_index + 1 >= self.units.len() {
            return Err(Error::SeedAtEnd { index: seed_index });
        }
        let target = seed_index + 1;
        self.units[target] = String::from(generation_unit);
        self.generated[target] = true;
        self.unit_provenance[target] = match self.unit_kind {
            GenUnit::Sentence => vec![Provenance::Generated],
            GenUnit::Paragraph => {
                vec![Provenance::Generated; segment_sentences(generation_unit).len()]
            }
        };
        Ok(())
    }

    /// Reassembles the article. Sentence provenance is attached only when
    /// it aligns with the rebuilt body's own segmentation.
    pub fn to_article(&self) -> Article {
        let body = match self.unit_kind {
            GenUnit::Sentence => join_sentences(&self.units),
            GenUnit::Paragraph => join_paragraphs(&self.units),
        };
        let provenance: Vec<Provenance> =
            self.unit_provenance.iter().flatten().copied().collect();
        let aligned = segment_sentences(&body).len() == provenance.len();
        let mut article = self.meta.clone();
        article.body = body;
        article.sentence_provenance = aligned.then_some(provenance);
        article
    }
}
