//! Cosine distances, Ward dendrograms and flat clusterings of role words.

mod cut;
mod distance;
mod ward;

use std::collections::{BTreeSet, HashMap};
use std::io::{self, BufRead, Write};

pub use cut::{cut_dendrogram, Partition};
pub use distance::{cosine_distance, normalize_rows, pairwise_cosine, pairwise_sq_euclidean, DistanceMatrix};
pub use ward::{ward_dendrogram, ward_linkage, Dendrogram, Merge};

use crate::corpus::Role;
use crate::embed::Embeddings;
use crate::error::{Error, Result};

/// A partition of named, role-tagged words.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    words: Vec<String>,
    roles: Vec<Role>,
    partition: Partition,
}

impl Clustering {
    pub fn new(words: Vec<(String, Role)>, partition: Partition) -> Result<Self> {
        if words.len() != partition.len() {
            return Err(Error::DimensionMismatch {
                line: 0,
                expected: partition.len(),
                found: words.len(),
            });
        }
        let (words, roles) = words.into_iter().unzip();
        Ok(Clustering { words, roles, partition })
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Words of each cluster.
    pub fn word_sets(&self) -> Vec<BTreeSet<&str>> {
        self.partition
            .members()
            .into_iter()
            .map(|m| m.into_iter().map(|i| self.words[i].as_str()).collect())
            .collect()
    }
}

/// Everything derived from clustering one embedding model's role words.
#[derive(Clone, Debug)]
pub struct WordClusters {
    pub clustering: Clustering,
    pub dendrogram: Dendrogram,
    /// Cosine distances between the clustered words, in clustering order.
    pub distances: DistanceMatrix,
}

/// Cluster `words` by their vectors in `embeddings` into `k` groups.
pub fn cluster_words(embeddings: &Embeddings, words: &[(String, Role)], k: usize) -> Result<WordClusters> {
    if k < 1 || k > words.len() {
        return Err(Error::InvalidK { k, n: words.len() });
    }
    let index: HashMap<&str, usize> = embeddings
        .words()
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let rows = words
        .iter()
        .map(|(w, _)| {
            index
                .get(w.as_str())
                .map(|&i| embeddings.row(i).iter().map(|&x| x as f64).collect::<Vec<f64>>())
                .ok_or_else(|| Error::VocabMismatch(format!("no vector for {w:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let dendrogram = ward_dendrogram(&rows)?;
    let partition = cut_dendrogram(&dendrogram, k)?;
    let distances = pairwise_cosine(&rows)?;
    Ok(WordClusters {
        clustering: Clustering::new(words.to_vec(), partition)?,
        dendrogram,
        distances,
    })
}

pub const CLUSTERING_HEADER: &str = "word,cluster_id,role";

/// Write `word,cluster_id,role` rows.
pub fn write_clustering<W: Write>(clustering: &Clustering, mut out: W) -> io::Result<()> {
    writeln!(out, "{CLUSTERING_HEADER}")?;
    for (i, word) in clustering.words.iter().enumerate() {
        writeln!(out, "{},{},{}", word, clustering.partition.label(i), clustering.roles[i].code())?;
    }
    Ok(())
}

pub fn read_clustering<R: BufRead>(reader: R) -> Result<Clustering> {
    let mut words = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<clustering stream>", e))?;
        let lineno = idx + 1;
        if idx == 0 {
            if line.trim() != CLUSTERING_HEADER {
                return Err(Error::MalformedHeader(line));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::MalformedRecord {
            line: lineno,
            reason: reason.to_owned(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        let [word, label, role] = fields[..] else {
            return Err(bad("expected 3 fields"));
        };
        let label: usize = label.parse().map_err(|_| bad("cluster id is not an integer"))?;
        let role = match role {
            "N" => Role::Neutral,
            "A" => Role::Attribute,
            _ => return Err(bad("role must be N or A")),
        };
        words.push((word.to_owned(), role));
        labels.push(label);
    }
    Clustering::new(words, Partition::from_labels(&labels))
}
