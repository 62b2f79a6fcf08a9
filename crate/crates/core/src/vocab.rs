//! Vocabulary-driven tokenization: greedy longest-match encode over the
//! token list, dense ids, and a lossless decode for in-vocabulary text.
//!
//! Leading-space variants are ordinary tokens (`"word"` vs `" word"`), so
//! whatever whitespace-marker convention the exporting model used is
//! carried by the vocabulary file itself.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// An ordered list of distinct token strings; the token id is the list
/// index. Special ids (padding, delimiters, unknown) are excluded from
/// replacement by the embedding attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: BTreeMap<String, u32>,
    unk_id: u32,
    special_ids: BTreeSet<u32>,
    max_token_bytes: usize,
}

impl Vocabulary {
    pub fn new(tokens: Vec<String>, unk_id: u32, special_ids: BTreeSet<u32>) -> Result<Self> {
        let size = tokens.len();
        let mut index = BTreeMap::new();
        let mut max_token_bytes = 0usize;
        for (id, token) in tokens.iter().enumerate() {
            if token.is_empty() {
                return Err(Error::EmptyToken { id });
            }
            if index.insert(token.clone(), id as u32).is_some() {
                return Err(Error::DuplicateToken { token: token.clone() });
            }
            max_token_bytes = max_token_bytes.max(token.len());
        }
        if unk_id as usize >= size {
            return Err(Error::SpecialIdOutOfRange { id: unk_id, size });
        }
        for &id in &special_ids {
            if id as usize >= size {
                return Err(Error::SpecialIdOutOfRange { id, size });
            }
        }
        let mut special_ids = special_ids;
        special_ids.insert(unk_id);
        Ok(Self { tokens, index, unk_id, special_ids, max_token_bytes })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn unk_id(&self) -> u32 {
        self.unk_id
    }

    /// All ids excluded from replacement, the unknown id included.
    pub fn special_ids(&self) -> &BTreeSet<u32> {
        &self.special_ids
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn id_of(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    /// Greedy longest-match tokenization. Positions no token covers emit
    /// the unknown id and advance one character.
    pub fn encode(&self, text: &str) -> TokenSequence {
        let mut ids = Vec::new();
        let bytes = text.len();
        let mut pos = 0usize;
        while pos < bytes {
            let limit = self.max_token_bytes.min(bytes - pos);
            let mut matched = None;
            for len in (1..=limit).rev() {
                if !text.is_char_boundary(pos + len) {
                    continue;
                }
                if let Some(&id) = self.index.get(&text[pos..pos + len]) {
                    matched = Some((id, len));
                    break;
                }
            }
            match matched {
                Some((id, len)) => {
                    ids.push(id);
                    pos += len;
                }
                None => {
                    ids.push(self.unk_id);
                    let ch = text[pos..].chars().next().expect("pos is a char boundary");
                    pos += ch.len_utf8();
                }
            }
        }
        TokenSequence { ids }
    }

    /// Concatenates token strings; never fails. Out-of-range ids decode as
    /// the unknown token.
    pub fn decode(&self, sequence: &TokenSequence) -> String {
        let unk = self.tokens[self.unk_id as usize].as_str();
        let mut out = String::new();
        for &id in &sequence.ids {
            out.push_str(self.token(id).unwrap_or(unk));
        }
        out
    }
}

/// A tokenized text: every id is below the owning vocabulary's size.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSequence {
    pub ids: Vec<u32>,
}
