use super::ward::Dendrogram;
use crate::error::{Error, Result};

/// Flat assignment of points `0..n` to clusters `0..k`.
///
/// Labels are numbered in order of each cluster's smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    k: usize,
    labels: Vec<usize>,
}

impl Partition {
    /// Renumbers arbitrary labels into the canonical order.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(raw: &[L]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition { k: seen.len(), labels }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, point: usize) -> usize {
        self.labels[point]
    }

    /// Point indices of each cluster, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &l in &self.labels {
            out[l] += 1;
        }
        out
    }
}

/// Stop the agglomeration when `k` clusters remain.
pub fn cut_dendrogram(dendrogram: &Dendrogram, k: usize) -> Result<Partition> {
    let n = dendrogram.points();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut representative: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in &dendrogram.merges()[..n - k] {
        let (a, b) = (representative[m.left], representative[m.right]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
        representative.push(a);
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Ok(Partition::from_labels(&roots))
}
