//! Corpus ingestion: tagged tokens, per-slice vocabularies, and the
//! neutral/attribute word roles used for clustering.

mod conllu;
mod roles;
mod token;
mod vocab;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

pub use conllu::{parse_conllu, read_conllu, write_conllu};
pub use roles::{
    read_role_words, read_vocabulary, select_role_words, write_role_words, write_vocabulary, Role, WordRoleSet,
};
pub use token::{normalize_token, TaggedToken, UnknownUpos, Upos};
pub use vocab::{build_vocabulary, Vocabulary};

use crate::error::{Error, Result};

/// One time slice of a corpus, e.g. a decade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSlice {
    pub slice_id: String,
    pub sentences: Vec<Vec<TaggedToken>>,
    token_count: usize,
}

impl CorpusSlice {
    pub fn new(slice_id: impl Into<String>, sentences: Vec<Vec<TaggedToken>>) -> Self {
        let token_count = sentences
            .iter()
            .flatten()
            .filter(|t| t.normalized.is_some())
            .count();
        CorpusSlice {
            slice_id: slice_id.into(),
            sentences,
            token_count,
        }
    }

    /// Load `<slice_id>.conllu`; the slice id is the file stem.
    pub fn from_conllu_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let slice_id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Config(format!("bad slice file name {}", path.display())))?
            .to_owned();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let sentences = read_conllu(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })?;
        Ok(CorpusSlice::new(slice_id, sentences))
    }

    /// Number of tokens with a normalized form.
    pub fn token_count(&self) -> usize {
        self.token_count
    }

    /// Normalized forms in corpus order, sentence boundaries dropped.
    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.sentences
            .iter()
            .flatten()
            .filter_map(|t| t.normalized.as_deref())
    }

    /// Each sentence as vocabulary ids; out-of-vocabulary tokens are removed.
    pub fn id_sentences(&self, vocab: &Vocabulary) -> Vec<Vec<u32>> {
        self.sentences
            .iter()
            .map(|s| {
                s.iter()
                    .filter_map(|t| t.normalized.as_deref().and_then(|w| vocab.id(w)))
                    .map(|id| id as u32)
                    .collect::<Vec<_>>()
            })
            .filter(|s| !s.is_empty())
            .collect()
    }
}
