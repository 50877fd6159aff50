//! The five static embedding trainers and the text vector format.
//!
//! Every trainer goes through [`train`] with one [`Hyperparams`] value, so a
//! comparison between models never differs in window, learning rate, or any
//! other shared setting.

mod cooc;
mod fasttext;
mod glove;
mod hogwild;
mod io;
mod ngrams;
mod noise;
pub mod objective;
mod predictive;
mod word2vec;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusSlice, Vocabulary};
use crate::error::{Error, Result};

pub use cooc::{build_cooccurrence, CooccurrenceTable};
pub use fasttext::{train_fasttext, FastTextModel};
pub use glove::{train_glove, GloveModel};
pub use io::{read_embeddings, write_embeddings};
pub use ngrams::{char_ngram_strings, char_ngrams, fasttext_hash};
pub use noise::NoiseDistribution;
pub use word2vec::train_word2vec;

/// Exponent applied to unigram counts for negative sampling.
pub const NOISE_POWER: f64 = 0.75;

/// Training settings shared by all five models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub window: usize,
    pub learning_rate: f64,
    pub dimension: usize,
    pub epochs: usize,
    pub negative: usize,
    pub min_count: usize,
    pub subsample_threshold: Option<f64>,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub buckets: usize,
    pub glove_xmax: f64,
    pub glove_alpha: f64,
    /// Extra GloVe epochs on top of `epochs`, for sensitivity runs.
    pub glove_extra_epochs: usize,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            window: 5,
            learning_rate: 0.025,
            dimension: 100,
            epochs: 5,
            negative: 5,
            min_count: 5,
            subsample_threshold: None,
            ngram_min: 3,
            ngram_max: 6,
            buckets: 2_000_000,
            glove_xmax: 100.0,
            glove_alpha: 0.75,
            glove_extra_epochs: 0,
            seed: 1,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.window >= 1, "window must be >= 1"),
            (
                self.learning_rate > 0.0 && self.learning_rate.is_finite(),
                "learning_rate must be > 0",
            ),
            (self.dimension >= 2, "dimension must be >= 2"),
            (self.epochs >= 1, "epochs must be >= 1"),
            (self.negative >= 1, "negative must be >= 1"),
            (self.min_count >= 1, "min_count must be >= 1"),
            (self.ngram_min >= 1, "ngram_min must be >= 1"),
            (self.ngram_min <= self.ngram_max, "ngram_min must not exceed ngram_max"),
            (self.buckets >= 1, "buckets must be >= 1"),
            (self.glove_xmax > 0.0, "glove_xmax must be > 0"),
            (self.glove_alpha >= 0.0, "glove_alpha must be >= 0"),
            (
                self.subsample_threshold.is_none_or(|t| t > 0.0),
                "subsample_threshold must be > 0",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Config((*msg).to_owned())),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Word2vec,
    Glove,
    Fasttext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Cbow,
    Skipgram,
    None,
}

/// One of the five trainers, named as on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrainerKind {
    #[serde(rename = "w2v-cbow")]
    W2vCbow,
    #[serde(rename = "w2v-sg")]
    W2vSg,
    #[serde(rename = "glove")]
    Glove,
    #[serde(rename = "ft-cbow")]
    FtCbow,
    #[serde(rename = "ft-sg")]
    FtSg,
}

impl TrainerKind {
    pub const ALL: [TrainerKind; 5] = [
        TrainerKind::W2vCbow,
        TrainerKind::W2vSg,
        TrainerKind::Glove,
        TrainerKind::FtCbow,
        TrainerKind::FtSg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TrainerKind::W2vCbow => "w2v-cbow",
            TrainerKind::W2vSg => "w2v-sg",
            TrainerKind::Glove => "glove",
            TrainerKind::FtCbow => "ft-cbow",
            TrainerKind::FtSg => "ft-sg",
        }
    }

    pub fn kind(self) -> ModelKind {
        match self {
            TrainerKind::W2vCbow | TrainerKind::W2vSg => ModelKind::Word2vec,
            TrainerKind::Glove => ModelKind::Glove,
            TrainerKind::FtCbow | TrainerKind::FtSg => ModelKind::Fasttext,
        }
    }

    pub fn flavor(self) -> Flavor {
        match self {
            TrainerKind::W2vCbow | TrainerKind::FtCbow => Flavor::Cbow,
            TrainerKind::W2vSg | TrainerKind::FtSg => Flavor::Skipgram,
            TrainerKind::Glove => Flavor::None,
        }
    }

    /// Human-readable name used in printed tables.
    pub fn label(self) -> &'static str {
        match self {
            TrainerKind::W2vCbow => "word2vec (CBOW)",
            TrainerKind::W2vSg => "word2vec (skip-gram)",
            TrainerKind::Glove => "GloVe",
            TrainerKind::FtCbow => "fastText (CBOW)",
            TrainerKind::FtSg => "fastText (skip-gram)",
        }
    }
}

impl fmt::Display for TrainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrainerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TrainerKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s:?}; expected one of w2v-cbow, w2v-sg, glove, ft-cbow, ft-sg")))
    }
}

/// A word list with one dense `f32` row per word.
#[derive(Clone, Debug, PartialEq)]
pub struct Embeddings {
    words: Vec<String>,
    dim: usize,
    data: Vec<f32>,
}

impl Embeddings {
    pub fn new(words: Vec<String>, dim: usize, data: Vec<f32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        if data.len() != words.len() * dim {
            return Err(Error::DimensionMismatch {
                line: 0,
                expected: words.len() * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("embedding matrix".into()));
        }
        Ok(Embeddings { words, dim, data })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    /// Row for `word`, by linear search.
    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.words.iter().position(|w| w == word).map(|i| self.row(i))
    }
}

/// A trained model: the emitted vectors plus how they were produced.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    pub trainer: TrainerKind,
    pub hyperparams: Hyperparams,
    pub embeddings: Embeddings,
    /// Weighted loss per epoch, recorded by trainers that track it (GloVe).
    pub loss_history: Vec<f64>,
}

impl EmbeddingModel {
    pub fn kind(&self) -> ModelKind {
        self.trainer.kind()
    }

    pub fn flavor(&self) -> Flavor {
        self.trainer.flavor()
    }
}

/// Train `trainer` on `slice`.
///
/// `threads` > 1 enables lock-free parallel updates, which trades bitwise
/// reproducibility for speed; with one thread the result depends only on the
/// inputs and `hp.seed`.
pub fn train(
    trainer: TrainerKind,
    slice: &CorpusSlice,
    vocab: &Vocabulary,
    hp: &Hyperparams,
    threads: usize,
) -> Result<EmbeddingModel> {
    match trainer {
        TrainerKind::W2vCbow => train_word2vec(slice, vocab, Flavor::Cbow, hp, threads),
        TrainerKind::W2vSg => train_word2vec(slice, vocab, Flavor::Skipgram, hp, threads),
        TrainerKind::FtCbow => train_fasttext(slice, vocab, Flavor::Cbow, hp, threads).map(FastTextModel::into_model),
        TrainerKind::FtSg => train_fasttext(slice, vocab, Flavor::Skipgram, hp, threads).map(FastTextModel::into_model),
        TrainerKind::Glove => {
            hp.validate()?;
            let sentences = checked_id_sentences(slice, vocab)?;
            let cooc = CooccurrenceTable::from_id_sentences(&sentences, vocab.len(), hp.window, threads);
            train_glove(&cooc, vocab, hp, threads).map(GloveModel::into_model)
        }
    }
}

/// Map `slice` to id sentences, checking that `vocab` was built from it.
pub(crate) fn checked_id_sentences(slice: &CorpusSlice, vocab: &Vocabulary) -> Result<Vec<Vec<u32>>> {
    let sentences = slice.id_sentences(vocab);
    if sentences.is_empty() {
        return Err(Error::CorpusEmpty);
    }
    let mut seen = vec![0u64; vocab.len()];
    for &id in sentences.iter().flatten() {
        seen[id as usize] += 1;
    }
    if let Some(id) = (0..vocab.len()).find(|&id| seen[id] != vocab.count(id)) {
        return Err(Error::VocabMismatch(format!(
            "{:?} occurs {} times in the slice but {} times in the vocabulary",
            vocab.word(id),
            seen[id],
            vocab.count(id)
        )));
    }
    Ok(sentences)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let hp = Hyperparams::default();
        hp.validate().unwrap();
        assert_eq!(hp.window, 5);
        assert_eq!(hp.learning_rate, 0.025);
    }

    #[test]
    fn invalid_hyperparams_rejected() {
        let bad = [
            Hyperparams { window: 0, ..Default::default() },
            Hyperparams { learning_rate: 0.0, ..Default::default() },
            Hyperparams { dimension: 1, ..Default::default() },
            Hyperparams { ngram_min: 7, ..Default::default() },
            Hyperparams { negative: 0, ..Default::default() },
        ];
        for hp in bad {
            assert!(matches!(hp.validate(), Err(Error::Config(_))), "{hp:?}");
        }
    }

    #[test]
    fn trainer_names_round_trip() {
        for k in TrainerKind::ALL {
            assert_eq!(k.as_str().parse::<TrainerKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert!("w2v".parse::<TrainerKind>().is_err());
        assert_eq!(TrainerKind::Glove.flavor(), Flavor::None);
    }

    #[test]
    fn hyperparams_json_uses_flat_keys() {
        let hp: Hyperparams = serde_json::from_str(r#"{"dimension": 20, "epochs": 3}"#).unwrap();
        assert_eq!(hp.dimension, 20);
        assert_eq!(hp.window, 5);
        assert!(serde_json::from_str::<Hyperparams>(r#"{"dim": 20}"#).is_err());
    }
}
