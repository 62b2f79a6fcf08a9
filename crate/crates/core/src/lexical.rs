//! Lexicon-backed word-level operations: subjectivity scoring,
//! subjectivity-ordered insertion spectra, and synonym substitution.
//!
//! Both lexicons are plain data supplied by the caller; nothing here
//! depends on an external language resource at run time.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::article::Article;
use crate::blend::article_with_sentences;
use crate::error::Error;
use crate::rng::{derive_seed, shuffle, SeededRng};
use crate::segment::segment_sentences;
use crate::spectrum::{Spectrum, SpectrumMode, SpliceOp};
use crate::Result;

/// Lowercase lemma -> synonyms. Entries never list the key itself, never
/// contain whitespace (word count must be preserved under substitution),
/// and are deduplicated; entries left empty after sanitizing are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn from_entries<I, S, T>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<T>)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (key, synonyms) in entries {
            let key = key.into().to_lowercase();
            let mut cleaned: Vec<String> = Vec::new();
            for syn in synonyms {
                let syn = syn.into();
                if syn.is_empty()
                    || syn.chars().any(char::is_whitespace)
                    || syn.to_lowercase() == key
                    || cleaned.contains(&syn)
                {
                    continue;
                }
                cleaned.push(syn);
            }
            if !cleaned.is_empty() {
                map.insert(key, cleaned);
            }
        }
        Self { entries: map }
    }

    pub fn get(&self, lemma: &str) -> Option<&[String]> {
        self.entries.get(lemma).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lowercase term -> subjectivity weight in [0, 1].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubjectivityLexicon {
    weights: BTreeMap<String, f64>,
}

impl SubjectivityLexicon {
    pub fn from_weights<I, S>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (term, weight) in weights {
            let term = term.into().to_lowercase();
            if !(0.0..=1.0).contains(&weight) {
                return Err(Error::WeightOutOfRange { term, weight });
            }
            map.insert(term, weight);
        }
        Ok(Self { weights: map })
    }

    pub fn weight(&self, term: &str) -> Option<f64> {
        self.weights.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Splits a whitespace token into (leading punctuation, core, trailing
/// punctuation), where the core runs from the first to the last
/// alphanumeric character.
fn strip_token(word: &str) -> (&str, &str, &str) {
    let Some(first) = word.find(|c: char| c.is_alphanumeric()) else {
        return (word, "", "");
    };
    let last = word.rfind(|c: char| c.is_alphanumeric()).unwrap();
    let end = last + word[last..].chars().next().unwrap().len_utf8();
    (&word[..first], &word[first..end], &word[end..])
}

/// Mean subjectivity weight of the matched lexicon terms in a sentence
/// (lowercased, edge punctuation stripped); 0.0 when nothing matches.
/// Repeated terms count once per occurrence.
pub fn sentence_subjectivity(sentence: &str, lexicon: &SubjectivityLexicon) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for word in sentence.split_whitespace() {
        let (_, core, _) = strip_token(word);
        if core.is_empty() {
            continue;
        }
        if let Some(w) = lexicon.weight(&core.to_lowercase()) {
            sum += w;
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// How to aggregate subjectivity over an article.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubjectivityMode {
    /// Unweighted mean of per-sentence scores.
    BySentences,
    /// One score over the whole body as a single string.
    Whole,
}

pub fn article_subjectivity(
    article: &Article,
    lexicon: &SubjectivityLexicon,
    mode: SubjectivityMode,
) -> f64 {
    match mode {
        SubjectivityMode::Whole => sentence_subjectivity(&article.body, lexicon),
        SubjectivityMode::BySentences => {
            let sentences = segment_sentences(&article.body);
            if sentences.is_empty() {
                return 0.0;
            }
            let sum: f64 = sentences
                .iter()
                .map(|s| sentence_subjectivity(s, lexicon))
                .sum();
            sum / sentences.len() as f64
        }
    }
}

/// Insertion order for [`subjectivity_ordered_insertion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubjectivityOrder {
    /// Least subjective source sentence first.
    Asc,
    /// Most subjective source sentence first (the ascending list reversed,
    /// including its tie order).
    Desc,
}

/// Inserts source sentences one per step, ordered by their subjectivity
/// score (ties broken by original source index, ascending). Gap positions
/// follow the same per-step rule as the insertion spectrum, derived from
/// `seed`.
pub fn subjectivity_ordered_insertion(
    target: &Article,
    source: &Article,
    lexicon: &SubjectivityLexicon,
    order: SubjectivityOrder,
    seed: u64,
) -> Result<Spectrum> {
    let target_sents = segment_sentences(&target.body);
    if target_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    let source_sents = segment_sentences(&source.body);
    if source_sents.is_empty() {
        return Err(Error::EmptyBody);
    }
    let t = target_sents.len();
    let source_prov = source.provenance_or_default(source_sents.len());

    let mut ordered: Vec<usize> = (0..source_sents.len()).collect();
    ordered.sort_by(|&a, &b| {
        sentence_subjectivity(&source_sents[a], lexicon)
            .total_cmp(&sentence_subjectivity(&source_sents[b], lexicon))
            .then(a.cmp(&b))
    });
    if order == SubjectivityOrder::Desc {
        ordered.reverse();
    }

    let mode = match order {
        SubjectivityOrder::Asc => SpectrumMode::SubjectivityAsc,
        SubjectivityOrder::Desc => SpectrumMode::SubjectivityDesc,
    };
    let mut sentences = target_sents;
    let mut provenance = target.provenance_or_default(t);
    let mut spectrum = Spectrum::new(mode, target.clone(), Some(seed));
    spectrum.push_variant(target.clone(), 0, 0.0)?;
    for (k, &source_index) in ordered.iter().enumerate().map(|(i, s)| (i + 1, s)) {
        let mut gap_rng = SeededRng::new(derive_seed(seed, k as u64));
        let gap = shuffle(sentences.len() + 1, &mut gap_rng)[0];
        sentences.insert(gap, source_sents[source_index].clone());
        provenance.insert(gap, source_prov[source_index]);
        spectrum.log_op(k, SpliceOp::InsertSentence { gap, source_index });
        let variant = article_with_sentences(target, &sentences, &provenance);
        spectrum.push_variant(variant, k, k as f64 / (t + k) as f64)?;
    }
    Ok(spectrum)
}

/// Builds the synonym-substitution spectrum: each step swaps one not yet
/// swapped candidate word (chosen uniformly via the seeded RNG) for the
/// first synonym its lexicon entry lists, preserving leading capitalization
/// and edge punctuation. Changes accumulate; fractions are
/// `swapped / word_count`.
pub fn synonym_spectrum(
    target: &Article,
    lexicon: &SynonymLexicon,
    rng: &mut SeededRng,
) -> Result<Spectrum> {
    if target.body.trim().is_empty() {
        return Err(Error::EmptyBody);
    }
    let mut words: Vec<String> = target.body.split_whitespace().map(String::from).collect();
    let total = words.len();
    let mut candidates: Vec<usize> = words
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            let (_, core, _) = strip_token(w);
            !core.is_empty() && lexicon.get(&core.to_lowercase()).is_some()
        })
        .map(|(i, _)| i)
        .collect();

    let mut spectrum = Spectrum::new(SpectrumMode::Synonym, target.clone(), Some(rng.seed()));
    spectrum.push_variant(target.clone(), 0, 0.0)?;
    let mut step = 0usize;
    while !candidates.is_empty() {
        step += 1;
        let position = candidates.remove(rng.next_below(candidates.len()));
        let (prefix, core, suffix) = strip_token(&words[position]);
        let synonym = &lexicon.get(&core.to_lowercase()).expect("candidate has entry")[0];
        let replaced = match_capitalization(core, synonym);
        let from = words[position].clone();
        let mut rebuilt = String::with_capacity(prefix.len() + replaced.len() + suffix.len());
        rebuilt.push_str(prefix);
        rebuilt.push_str(&replaced);
        rebuilt.push_str(suffix);
        words[position] = rebuilt;
        spectrum.log_op(
            step,
            SpliceOp::SwapWord { position, from, to: words[position].clone() },
        );

        let body = words.join(" ");
        let mut variant = target.clone();
        variant.sentence_provenance = match &target.sentence_provenance {
            Some(p) if segment_sentences(&body).len() == p.len() => Some(p.clone()),
            _ => None,
        };
        variant.body = body;
        spectrum.push_variant(variant, step, step as f64 / total as f64)?;
    }
    Ok(spectrum)
}

/// Uppercases the synonym's first letter when the original word starts
/// uppercase.
fn match_capitalization(original: &str, synonym: &str) -> String {
    let starts_upper = original.chars().next().is_some_and(char::is_uppercase);
    if !starts_upper {
        return String::from(synonym);
    }
    let mut chars = synonym.chars();
    match chars.next() {
        Some(first) => {
            let mut out = String::with_capacity(synonym.len());
            out.extend(first.to_uppercase());
            out.push_str(chars.as_str());
            out
        }
        None => String::new(),
    }
}
