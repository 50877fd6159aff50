//! Static word-embedding training and attributive word-association analysis.
//!
//! The crate trains five embedding models (word2vec CBOW and skip-gram, GloVe,
//! fastText CBOW and skip-gram) on time-sliced, POS-tagged corpora, clusters
//! each slice's proper nouns and adjectives with Ward linkage, and compares
//! the resulting partitions across models and slices with Dunn's index,
//! cluster-size distributions and Jaccard similarity.
//!
//! The modules mirror the processing stages:
//!
//! - [`corpus`]: CoNLL-U ingestion, vocabularies, neutral/attribute roles
//! - [`embed`]: the five trainers and the text vector format
//! - [`cluster`]: cosine distances, Ward dendrograms, flat cuts
//! - [`metrics`]: Dunn's index, distribution statistics, Jaccard similarity
//! - [`pipeline`]: the two evaluation regimes and report files
//!
//! A longer walk-through lives in the `book/` directory of the repository.

pub mod cluster;
pub mod corpus;
pub mod embed;
mod error;
pub mod metrics;
pub mod pipeline;
pub mod synthetic;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/training.md")]
    mod training {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
