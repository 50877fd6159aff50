use super::predictive::{self, InputRows, Job};
use super::{checked_id_sentences, Embeddings, EmbeddingModel, Flavor, Hyperparams, TrainerKind};
use crate::corpus::{CorpusSlice, Vocabulary};
use crate::error::{Error, Result};

/// Train word2vec with negative sampling and return the input-side vectors.
pub fn train_word2vec(
    slice: &CorpusSlice,
    vocab: &Vocabulary,
    flavor: Flavor,
    hp: &Hyperparams,
    threads: usize,
) -> Result<EmbeddingModel> {
    hp.validate()?;
    let trainer = match flavor {
        Flavor::Cbow => TrainerKind::W2vCbow,
        Flavor::Skipgram => TrainerKind::W2vSg,
        Flavor::None => return Err(Error::Config("word2vec needs cbow or skipgram".into())),
    };
    let sentences = checked_id_sentences(slice, vocab)?;
    let inputs = InputRows::identity(vocab.len());
    let input = predictive::train(&Job {
        sentences: &sentences,
        counts: vocab.counts(),
        inputs: &inputs,
        input_rows: vocab.len(),
        flavor,
        hp,
        threads,
    })?;
    Ok(EmbeddingModel {
        trainer,
        hyperparams: hp.clone(),
        embeddings: Embeddings::new(vocab.words().to_vec(), hp.dimension, input)?,
        loss_history: Vec::new(),
    })
}
