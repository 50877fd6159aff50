use std::collections::HashMap;

use super::CorpusSlice;
use crate::error::{Error, Result};

/// Word/id mapping for one corpus slice.
///
/// Ids are dense and ordered by descending frequency, ties broken
/// lexicographically, so two builds over the same text agree exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    min_count: usize,
}

impl Vocabulary {
    /// Build from `(word, count)` pairs. Pairs below `min_count` are dropped.
    pub fn from_counts<I>(counts: I, min_count: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        if min_count == 0 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        let mut entries: Vec<(String, u64)> = counts
            .into_iter()
            .filter(|(_, c)| *c >= min_count as u64)
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary { min_count });
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i))
            .collect::<HashMap<_, _>>();
        if index.len() != entries.len() {
            return Err(Error::VocabMismatch("duplicate word in counts".into()));
        }
        let (words, counts) = entries.into_iter().unzip();
        Ok(Vocabulary {
            words,
            counts,
            index,
            min_count,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Sum of all in-vocabulary frequencies.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, u64)> + '_ {
        self.words
            .iter()
            .zip(&self.counts)
            .enumerate()
            .map(|(i, (w, &c))| (i, w.as_str(), c))
    }
}

/// Count normalized forms in `slice` and keep those seen at least `min_count` times.
pub fn build_vocabulary(slice: &CorpusSlice, min_count: usize) -> Result<Vocabulary> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for word in slice.words() {
        *counts.entry(word.to_owned()).or_default() += 1;
    }
    Vocabulary::from_counts(counts, min_count)
}
