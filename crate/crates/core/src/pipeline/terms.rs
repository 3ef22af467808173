//! Per-user term bags for the six term kinds and the k-top term lists.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::lovins::lovins_split;
use super::text::{char_ngrams, Tokens};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Word,
    Stem,
    Costem,
    Digram,
    Trigram,
    Hashtag,
}

impl TermKind {
    pub const ALL: [TermKind; 6] = [
        TermKind::Word,
        TermKind::Stem,
        TermKind::Costem,
        TermKind::Digram,
        TermKind::Trigram,
        TermKind::Hashtag,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Term occurrence counts of one user, per kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermBag {
    counts: [HashMap<String, u64>; 6],
    totals: [u64; 6],
}

impl TermBag {
    fn add(&mut self, kind: TermKind, term: String) {
        *self.counts[kind.index()].entry(term).or_insert(0) += 1;
        self.totals[kind.index()] += 1;
    }

    /// Words, their stems and non-empty co-stems, within-word digrams and
    /// trigrams, and hashtags.
    pub fn from_tokens(tokens: &Tokens) -> TermBag {
        let mut bag = TermBag::default();
        for w in &tokens.words {
            bag.add(TermKind::Word, w.clone());
            let (stem, costem) = lovins_split(w);
            bag.add(TermKind::Stem, stem);
            if !costem.is_empty() {
                bag.add(TermKind::Costem, costem);
            }
            for g in char_ngrams(w, 2) {
                bag.add(TermKind::Digram, g);
            }
            for g in char_ngrams(w, 3) {
                bag.add(TermKind::Trigram, g);
            }
        }
        for h in &tokens.hashtags {
            bag.add(TermKind::Hashtag, h.clone());
        }
        bag
    }

    pub fn count(&self, kind: TermKind, term: &str) -> u64 {
        self.counts[kind.index()].get(term).copied().unwrap_or(0)
    }

    pub fn total(&self, kind: TermKind) -> u64 {
        self.totals[kind.index()]
    }

    pub fn terms(&self, kind: TermKind) -> impl Iterator<Item = (&str, u64)> {
        self.counts[kind.index()].iter().map(|(t, &c)| (t.as_str(), c))
    }

    /// `occurrences / total terms of the kind`, 0 when the user has none.
    pub fn frequency(&self, kind: TermKind, term: &str) -> f64 {
        match self.total(kind) {
            0 => 0.0,
            t => self.count(kind, term) as f64 / t as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermList {
    pub kind: TermKind,
    pub male_terms: Vec<String>,
    pub female_terms: Vec<String>,
    /// The vocabulary held fewer than `k` terms.
    pub short: bool,
}

/// Rank terms by `s(t) = male occurrences - female occurrences` summed over
/// the labelled users. The male list takes the `k` largest scores, the
/// female list the `k` smallest; equal scores are ordered by term.
pub fn select_top_terms(bags: &[(&TermBag, bool)], kind: TermKind, k: usize) -> Result<TermList> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut score: BTreeMap<&str, i64> = BTreeMap::new();
    for (bag, female) in bags {
        let sign = if *female { -1 } else { 1 };
        for (t, c) in bag.terms(kind) {
            *score.entry(t).or_insert(0) += sign * c as i64;
        }
    }
    if score.is_empty() {
        return Err(Error::InvalidInput(format!("no {kind:?} terms in the training corpus")));
    }
    let mut ranked: Vec<(&str, i64)> = score.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let male_terms = ranked.iter().take(k).map(|(t, _)| t.to_string()).collect();
    ranked.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(b.0)));
    let female_terms = ranked.iter().take(k).map(|(t, _)| t.to_string()).collect();
    Ok(TermList {
        kind,
        male_terms,
        female_terms,
        short: ranked.len() < k,
    })
}
