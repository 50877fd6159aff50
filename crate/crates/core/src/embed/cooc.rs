use std::collections::HashMap;

use rayon::prelude::*;

use super::checked_id_sentences;
use crate::corpus::{CorpusSlice, Vocabulary};
use crate::error::Result;

/// Sparse distance-weighted co-occurrence counts, sorted by `(center, context)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooccurrenceTable {
    vocab_len: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl CooccurrenceTable {
    /// Each context token at distance `d <= window` in the same sentence adds
    /// `1/d` to `(center, context)`.
    ///
    /// With `threads > 1` sentences are split into contiguous chunks whose
    /// partial tables are merged in chunk order.
    pub fn from_id_sentences(sentences: &[Vec<u32>], vocab_len: usize, window: usize, threads: usize) -> Self {
        let threads = threads.max(1);
        let chunk = sentences.len().div_ceil(threads).max(1);
        let partials: Vec<HashMap<(u32, u32), f64>> = sentences
            .par_chunks(chunk)
            .map(|chunk| {
                let mut table = HashMap::new();
                for sentence in chunk {
                    accumulate(sentence, window, &mut table);
                }
                table
            })
            .collect();

        let mut merged: HashMap<(u32, u32), f64> = HashMap::new();
        for part in partials {
            let mut part: Vec<_> = part.into_iter().collect();
            part.sort_unstable_by_key(|&(k, _)| k);
            for (k, w) in part {
                *merged.entry(k).or_default() += w;
            }
        }
        let mut entries: Vec<(u32, u32, f64)> = merged.into_iter().map(|((i, j), w)| (i, j, w)).collect();
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        CooccurrenceTable { vocab_len, entries }
    }

    pub fn vocab_len(&self) -> usize {
        self.vocab_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u32, u32, f64)] {
        &self.entries
    }

    pub fn get(&self, center: u32, context: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&(center, context), |&(i, j, _)| (i, j))
            .ok()
            .map(|k| self.entries[k].2)
    }
}

fn accumulate(sentence: &[u32], window: usize, table: &mut HashMap<(u32, u32), f64>) {
    for (pos, &center) in sentence.iter().enumerate() {
        let lo = pos.saturating_sub(window);
        let hi = (pos + window).min(sentence.len() - 1);
        for (j, &context) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
            if j == pos {
                continue;
            }
            let d = pos.abs_diff(j) as f64;
            *table.entry((center, context)).or_default() += 1.0 / d;
        }
    }
}

/// Build the co-occurrence table of `slice` over `vocab`.
///
/// An empty slice gives an empty table.
pub fn build_cooccurrence(slice: &CorpusSlice, vocab: &Vocabulary, window: usize) -> Result<CooccurrenceTable> {
    let sentences = if slice.token_count() == 0 {
        Vec::new()
    } else {
        checked_id_sentences(slice, vocab)?
    };
    Ok(CooccurrenceTable::from_id_sentences(&sentences, vocab.len(), window, 1))
}
