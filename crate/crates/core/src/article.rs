//! The article data model shared by every attack.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::segment::segment_sentences;

/// Ground-truth origin of a whole article.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Human,
    Machine,
    Unknown,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Human => "human",
            Label::Machine => "machine",
            Label::Unknown => "unknown",
        }
    }

    /// Default per-sentence provenance for an article that carries no
    /// explicit provenance. Unknown-labeled articles are treated as
    /// human-origin for splice bookkeeping.
    pub fn default_provenance(self) -> Provenance {
        match self {
            Label::Machine => Provenance::Machine,
            Label::Human | Label::Unknown => Provenance::Human,
        }
    }
}

/// Origin of one sentence inside a (possibly blended) article.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Human,
    Machine,
    Generated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Human => "human",
            Provenance::Machine => "machine",
            Provenance::Generated => "generated",
        }
    }
}

/// One news item: the five metadata fields a discriminator consumes, plus
/// per-sentence provenance for auditing blended variants.
///
/// `extras` holds unrecognized persistence keys as raw JSON fragments so
/// corpus files round-trip without loss; the library treats them as opaque.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub domain: String,
    pub date: String,
    pub authors: Vec<String>,
    pub title: String,
    pub body: String,
    pub label: Label,
    pub sentence_provenance: Option<Vec<Provenance>>,
    pub extras: BTreeMap<String, String>,
}

impl Article {
    pub fn new(
        domain: impl Into<String>,
        date: impl Into<String>,
        authors: Vec<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        label: Label,
    ) -> Self {
        Self {
            domain: domain.into(),
            date: date.into(),
            authors: authors,
            title: title.into(),
            body: body.into(),
            label,
            sentence_provenance: None,
            extras: BTreeMap::new(),
        }
    }

    /// The article body segmented into sentences.
    pub fn sentences(&self) -> Vec<String> {
        segment_sentences(&self.body)
    }

    /// Per-sentence provenance for exactly `count` sentences: the explicit
    /// list when present and aligned, otherwise the label default repeated.
    pub fn provenance_or_default(&self, count: usize) -> Vec<Provenance> {
        match &self.sentence_provenance {
            Some(p) if p.len() == count => p.clone(),
            _ => vec![self.label.default_provenance(); count],
        }
    }
}
