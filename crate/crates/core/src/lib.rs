//! Deterministic building blocks for probing news-article discriminators.
//!
//! The crate generates perturbed variants of news articles (sentence
//! blending, insertion sweeps, synonym and generated-text substitution,
//! embedding-space token rewrites), scores them with built-in reference
//! classifiers, and derives detection metrics from the resulting
//! confidence curves. Everything here is pure and seeded: the same
//! inputs and the same 64-bit seed produce bit-identical output on every
//! platform.
//!
//! IO, wire protocols, file formats, and the CLI live in the companion
//! `textfray` crate; this crate is `no_std`-compatible (alloc required).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod article;
pub mod blend;
pub mod classify;
pub mod embed;
mod error;
pub mod gensub;
pub mod lexical;
pub mod metrics;
pub mod rng;
pub mod segment;
pub mod spectrum;
pub mod vocab;

pub use article::{Article, Label, Provenance};
pub use classify::{lexical_stub, provenance_oracle, PredictedClass, Verdict};
pub use embed::{AttackConfig, EmbeddingTable, GradientTable, ReplacementPlan};
pub use error::Error;
pub use gensub::GenUnit;
pub use metrics::{flip_point, hesitation_count, usp, ConfidenceCurve, CurvePoint};
pub use rng::{derive_seed, shuffle, SeededRng};
pub use spectrum::{Spectrum, SpectrumMode, SpectrumVariant, SpliceEvent, SpliceOp};
pub use vocab::{TokenSequence, Vocabulary};

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
