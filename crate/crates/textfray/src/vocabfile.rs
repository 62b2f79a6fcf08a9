//! Vocabulary files: UTF-8, one token per line, line number = token id,
//! with special ids declared in a JSON sidecar `{"unk": id, "special": [ids]}`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use textfray_core::Vocabulary;

use crate::error::{Error, Result};

#[derive(Debug, serde::Serialize, serde::Deserialize)]
struct Sidecar {
    unk: u32,
    #[serde(default)]
    special: Vec<u32>,
}

/// The default sidecar location for a vocabulary file.
pub fn default_sidecar_path(vocab_path: &Path) -> PathBuf {
    let mut name = vocab_path.file_name().unwrap_or_default().to_os_string();
    name.push(".specials.json");
    vocab_path.with_file_name(name)
}

/// Loads a vocabulary and its sidecar (defaulted next to the vocabulary
/// when no explicit sidecar path is given).
pub fn load_vocabulary(vocab_path: impl AsRef<Path>, sidecar: Option<&Path>) -> Result<Vocabulary> {
    let vocab_path = vocab_path.as_ref();
    let content = fs::read_to_string(vocab_path).map_err(|e| Error::io(vocab_path, e))?;
    let mut tokens: Vec<String> = content
        .split('\n')
        .map(|line| line.strip_suffix('\r').unwrap_or(line).to_string())
        .collect();
    // A trailing newline produces one empty final entry, not a token.
    if tokens.last().is_some_and(String::is_empty) {
        tokens.pop();
    }

    let sidecar_path = sidecar
        .map(Path::to_path_buf)
        .unwrap_or_else(|| default_sidecar_path(vocab_path));
    let sidecar_raw =
        fs::read_to_string(&sidecar_path).map_err(|e| Error::io(&sidecar_path, e))?;
    let sidecar: Sidecar = serde_json::from_str(&sidecar_raw).map_err(|e| Error::BadFile {
        path: sidecar_path,
        message: e.to_string(),
    })?;

    let special: BTreeSet<u32> = sidecar.special.into_iter().collect();
    Ok(Vocabulary::new(tokens, sidecar.unk, special)?)
}

/// Writes a vocabulary file and its sidecar.
pub fn save_vocabulary(vocab: &Vocabulary, vocab_path: impl AsRef<Path>) -> Result<()> {
    let vocab_path = vocab_path.as_ref();
    let mut content = String::new();
    for id in 0..vocab.len() as u32 {
        content.push_str(vocab.token(id).expect("dense ids"));
        content.push('\n');
    }
    fs::write(vocab_path, content).map_err(|e| Error::io(vocab_path, e))?;
    let sidecar = Sidecar {
        unk: vocab.unk_id(),
        special: vocab.special_ids().iter().copied().collect(),
    };
    let sidecar_path = default_sidecar_path(vocab_path);
    let body = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    fs::write(&sidecar_path, body).map_err(|e| Error::io(&sidecar_path, e))?;
    Ok(())
}
