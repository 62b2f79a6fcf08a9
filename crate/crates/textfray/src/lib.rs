//! IO, wire protocols, file formats, and campaign orchestration around
//! [`textfray_core`]: JSONL corpora, vocabulary/matrix/lexicon files, the
//! generator and classifier HTTP clients with cassette capture and verdict
//! caching, bundled stub services, and the campaign runner behind the CLI.

pub mod attackrun;
pub mod campaign;
pub mod classifier;
pub mod cli;
mod error;
pub mod genclient;
mod hashing;
pub mod jsonl;
pub mod lexfile;
pub mod matrix;
pub mod stubs;
pub mod vocabfile;

pub use error::{Error, Result};
pub use hashing::sha256_hex;
