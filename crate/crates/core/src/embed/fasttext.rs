use std::collections::HashMap;

use super::ngrams::char_ngrams;
use super::predictive::{self, compose, InputRows, Job};
use super::{checked_id_sentences, Embeddings, EmbeddingModel, Flavor, Hyperparams, TrainerKind};
use crate::corpus::{CorpusSlice, Vocabulary};
use crate::error::{Error, Result};

/// A trained fastText model with its subword state.
///
/// Only buckets hit by some vocabulary word's n-grams are materialized;
/// the rest would never be read or written during training.
#[derive(Clone, Debug)]
pub struct FastTextModel {
    model: EmbeddingModel,
    word_rows: Vec<f32>,
    bucket_rows: HashMap<u32, usize>,
    gram_rows: Vec<f32>,
}

impl FastTextModel {
    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }

    pub fn into_model(self) -> EmbeddingModel {
        self.model
    }

    /// Word-level input vector of vocabulary word `id`.
    pub fn word_vector(&self, id: usize) -> &[f32] {
        let d = self.model.hyperparams.dimension;
        &self.word_rows[id * d..(id + 1) * d]
    }

    /// Input vector of hash bucket `bucket`, if any vocabulary word uses it.
    pub fn bucket_vector(&self, bucket: u32) -> Option<&[f32]> {
        let d = self.model.hyperparams.dimension;
        self.bucket_rows
            .get(&bucket)
            .map(|&r| &self.gram_rows[r * d..(r + 1) * d])
    }
}

/// Train fastText; each emitted row is the word vector plus the vectors of all
/// its character n-gram buckets.
pub fn train_fasttext(
    slice: &CorpusSlice,
    vocab: &Vocabulary,
    flavor: Flavor,
    hp: &Hyperparams,
    threads: usize,
) -> Result<FastTextModel> {
    hp.validate()?;
    let trainer = match flavor {
        Flavor::Cbow => TrainerKind::FtCbow,
        Flavor::Skipgram => TrainerKind::FtSg,
        Flavor::None => return Err(Error::Config("fastText needs cbow or skipgram".into())),
    };
    let sentences = checked_id_sentences(slice, vocab)?;
    let v = vocab.len();

    // Compact bucket ids in first-seen order so row layout is deterministic.
    let mut bucket_rows: HashMap<u32, usize> = HashMap::new();
    let mut lists = Vec::with_capacity(v);
    for (id, word, _) in vocab.iter() {
        let mut rows = vec![id as u32];
        for bucket in char_ngrams(word, hp.ngram_min, hp.ngram_max, hp.buckets) {
            let next = bucket_rows.len();
            let r = *bucket_rows.entry(bucket).or_insert(next);
            rows.push((v + r) as u32);
        }
        lists.push(rows);
    }
    let inputs = InputRows::from_lists(lists);
    let input_rows = v + bucket_rows.len();

    let input = predictive::train(&Job {
        sentences: &sentences,
        counts: vocab.counts(),
        inputs: &inputs,
        input_rows,
        flavor,
        hp,
        threads,
    })?;

    let d = hp.dimension;
    let emitted = compose(&input, &inputs, d);
    let mut word_rows = input;
    let gram_rows = word_rows.split_off(v * d);
    Ok(FastTextModel {
        model: EmbeddingModel {
            trainer,
            hyperparams: hp.clone(),
            embeddings: Embeddings::new(vocab.words().to_vec(), d, emitted)?,
            loss_history: Vec::new(),
        },
        word_rows,
        bucket_rows,
        gram_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_vocabulary;
    use crate::synthetic::TopicCorpus;

    fn hp() -> Hyperparams {
        Hyperparams {
            dimension: 12,
            epochs: 2,
            min_count: 1,
            buckets: 5000,
            ..Default::default()
        }
    }

    #[test]
    fn emitted_rows_are_word_plus_ngram_sums() {
        let corpus = TopicCorpus::default().build(11);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        let hp = hp();
        let ft = train_fasttext(&corpus, &vocab, Flavor::Skipgram, &hp, 1).unwrap();
        for (id, word, _) in vocab.iter() {
            let mut expected: Vec<f32> = ft.word_vector(id).to_vec();
            for b in char_ngrams(word, hp.ngram_min, hp.ngram_max, hp.buckets) {
                for (e, g) in expected.iter_mut().zip(ft.bucket_vector(b).unwrap()) {
                    *e += g;
                }
            }
            for (e, got) in expected.iter().zip(ft.model().embeddings.row(id)) {
                assert!((e - got).abs() <= 1e-6, "{word}: {e} vs {got}");
            }
        }
    }

    #[test]
    fn deterministic_with_one_worker() {
        let corpus = TopicCorpus::default().build(2);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        let a = train_fasttext(&corpus, &vocab, Flavor::Cbow, &hp(), 1).unwrap();
        let b = train_fasttext(&corpus, &vocab, Flavor::Cbow, &hp(), 1).unwrap();
        assert_eq!(a.model().embeddings, b.model().embeddings);
    }

    #[test]
    fn glove_flavor_rejected() {
        let corpus = TopicCorpus::default().build(2);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        assert!(train_fasttext(&corpus, &vocab, Flavor::None, &hp(), 1).is_err());
    }
}
