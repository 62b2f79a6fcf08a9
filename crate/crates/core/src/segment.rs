//! Rule-based sentence and paragraph segmentation.
//!
//! The splitter is deliberately simple: a sentence boundary is a `.`, `?`
//! or `!` followed by whitespace and then an uppercase letter, quote, or
//! digit, with a fixed abbreviation list that never terminates a sentence.
//! The attacks in this crate depend on boundaries being *stable*, not
//! linguistically perfect.

use alloc::string::String;
use alloc::vec::Vec;

/// Tokens that never end a sentence even when followed by an apparent
/// boundary.
const ABBREVIATIONS: &[&str] = &[
    "Mr.", "Mrs.", "Dr.", "U.S.", "St.", "Inc.", "No.", "vs.", "e.g.", "i.e.",
];

const QUOTE_CHARS: &[char] = &['"', '\'', '\u{201C}', '\u{201D}', '\u{2018}', '\u{2019}'];

/// Collapses all whitespace runs to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Splits text into sentences.
///
/// Segments are whitespace-normalized and never empty; joining them with
/// single spaces reproduces `normalize_whitespace(text)`. Re-segmenting any
/// returned sentence yields that sentence back.
pub fn segment_sentences(text: &str) -> Vec<String> {
    let norm = normalize_whitespace(text);
    if norm.is_empty() {
        return Vec::new();
    }
    let chars: Vec<(usize, char)> = norm.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    for (pos, &(byte, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '?' | '!') {
            continue;
        }
        let Some(&(_, next)) = chars.get(pos + 1) else { continue };
        if next != ' ' {
            continue;
        }
        let Some(&(_, after)) = chars.get(pos + 2) else { continue };
        if !is_sentence_opener(after) {
            continue;
        }
        if c == '.' && is_abbreviation(&norm[start..=byte]) {
            continue;
        }
        let end = byte + c.len_utf8();
        sentences.push(String::from(&norm[start..end]));
        start = end + 1; // skip the single separating space
    }
    if start < norm.len() {
        sentences.push(String::from(&norm[start..]));
    }
    sentences
}

fn is_sentence_opener(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || QUOTE_CHARS.contains(&c)
}

/// Checks whether the token ending the candidate boundary is a guarded
/// abbreviation. Leading punctuation on the token (quotes, parentheses) is
/// ignored.
fn is_abbreviation(prefix: &str) -> bool {
    let token = match prefix.rfind(' ') {
        Some(i) => &prefix[i + 1..],
        None => prefix,
    };
    let token = token.trim_start_matches(|c: char| !c.is_alphanumeric());
    ABBREVIATIONS.contains(&token)
}

/// Splits text on runs of newlines. Paragraphs are trimmed and never empty;
/// joining with `"\n"` is the normalized inverse.
pub fn segment_paragraphs(text: &str) -> Vec<String> {
    text.split('\n')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect()
}

/// Joins sentences back into a body with single spaces.
pub fn join_sentences(sentences: &[String]) -> String {
    sentences.join(" ")
}

/// Joins paragraphs back into a body with single newlines.
pub fn join_paragraphs(paragraphs: &[String]) -> String {
    paragraphs.join("\n")
}
