//! Dunn's index, cluster-size distribution and Jaccard similarity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cluster::{Clustering, DistanceMatrix, Partition};
use crate::error::{Error, Result};

/// Dunn's index together with its numerator and denominator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DunnResult {
    pub value: f64,
    /// Smallest distance between two points in different clusters.
    pub min_intercluster: f64,
    /// Largest distance between two points in the same cluster.
    pub max_diameter: f64,
}

/// Minimum single-linkage separation over maximum complete diameter.
pub fn dunn_index(partition: &Partition, distances: &DistanceMatrix) -> Result<DunnResult> {
    let n = partition.len();
    if partition.k() < 2 {
        return Err(Error::InvalidK { k: partition.k(), n });
    }
    if distances.len() != n {
        return Err(Error::DimensionMismatch {
            line: 0,
            expected: n,
            found: distances.len(),
        });
    }
    let labels = partition.labels();
    let condensed = distances.condensed();
    let mut min_intercluster = f64::INFINITY;
    let mut max_diameter = 0.0f64;
    let mut at = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = condensed[at];
            at += 1;
            if labels[i] == labels[j] {
                max_diameter = max_diameter.max(d);
            } else {
                min_intercluster = min_intercluster.min(d);
            }
        }
    }
    if max_diameter == 0.0 {
        return Err(Error::DegenerateDiameter);
    }
    Ok(DunnResult {
        value: min_intercluster / max_diameter,
        min_intercluster,
        max_diameter,
    })
}

/// Share of words per cluster and its extremes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionStats {
    pub fractions: Vec<f64>,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Panics on an empty partition.
pub fn distribution_stats(partition: &Partition) -> DistributionStats {
    assert!(!partition.is_empty(), "distribution of an empty partition");
    let n = partition.len() as f64;
    let fractions: Vec<f64> = partition.sizes().into_iter().map(|s| s as f64 / n).collect();
    let min = fractions.iter().copied().fold(f64::INFINITY, f64::min);
    let max = fractions.iter().copied().fold(0.0, f64::max);
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    DistributionStats { fractions, min, mean, max }
}

/// `|A ∩ B| / |A ∪ B|`, with two empty sets counting as identical.
pub fn jaccard_sets<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Mean Jaccard similarity over every (cluster of `a`, cluster of `b`) pair.
pub fn jaccard_clusterings(a: &Clustering, b: &Clustering) -> Result<f64> {
    let words_a: BTreeSet<&str> = a.words().iter().map(String::as_str).collect();
    let words_b: BTreeSet<&str> = b.words().iter().map(String::as_str).collect();
    if words_a != words_b || a.len() != b.len() {
        return Err(Error::WordSetMismatch);
    }
    let (sets_a, sets_b) = (a.word_sets(), b.word_sets());
    let mut terms: Vec<f64> = sets_a
        .iter()
        .flat_map(|x| sets_b.iter().map(move |y| jaccard_sets(x, y)))
        .collect();
    // A fixed summation order makes the result independent of label order.
    terms.sort_by(f64::total_cmp);
    Ok(terms.iter().sum::<f64>() / terms.len() as f64)
}

/// Arithmetic mean of a per-slice series.
pub fn average_jaccard(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean and population standard deviation.
pub fn mean_and_sd(values: &[f64]) -> Result<(f64, f64)> {
    let mean = average_jaccard(values)?;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    Ok((mean, var.sqrt()))
}

/// Symmetric model-by-model table of averaged partition similarities.
///
/// The diagonal is fixed at 1: a model compared with itself is reported as
/// identical rather than through the all-pairs average.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JaccardMatrix {
    models: Vec<String>,
    values: Vec<f64>,
}

impl JaccardMatrix {
    pub fn new(models: Vec<String>) -> Self {
        let n = models.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        JaccardMatrix { models, values }
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.len() + b]
    }

    /// Set an off-diagonal entry and its mirror.
    pub fn set(&mut self, a: usize, b: usize, value: f64) {
        assert_ne!(a, b, "the diagonal is fixed");
        let n = self.len();
        self.values[a * n + b] = value;
        self.values[b * n + a] = value;
    }

    /// `(a, b, value)` for every `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| ((a + 1)..n).map(move |b| (a, b, self.get(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::pairwise_cosine;
    use crate::corpus::Role;

    fn unit(deg: f64) -> Vec<f64> {
        let r = deg.to_radians();
        vec![r.cos(), r.sin()]
    }

    fn clustering(words: &[&str], labels: &[usize]) -> Clustering {
        let words = words.iter().map(|w| (w.to_string(), Role::Neutral)).collect();
        Clustering::new(words, Partition::from_labels(labels)).unwrap()
    }

    #[test]
    fn dunn_two_arcs() {
        let rows = [unit(0.0), unit(10.0), unit(80.0), unit(90.0)];
        let d = pairwise_cosine(&rows).unwrap();
        let r = dunn_index(&Partition::from_labels(&[0, 0, 1, 1]), &d).unwrap();
        let want = (1.0 - 70f64.to_radians().cos()) / (1.0 - 10f64.to_radians().cos());
        assert!((r.value - want).abs() < 1e-9 * want);
        assert!((r.value - 43.31).abs() < 0.01);
    }

    #[test]
    fn dunn_errors() {
        let d = pairwise_cosine(&[unit(0.0), unit(30.0)]).unwrap();
        assert!(matches!(dunn_index(&Partition::from_labels(&[0, 1]), &d), Err(Error::DegenerateDiameter)));
        assert!(matches!(
            dunn_index(&Partition::from_labels(&[0, 0]), &d),
            Err(Error::InvalidK { k: 1, .. })
        ));
    }

    #[test]
    fn distribution_examples() {
        let uniform: Vec<usize> = (0..80).map(|i| i / 10).collect();
        let s = distribution_stats(&Partition::from_labels(&uniform));
        assert_eq!((s.min, s.mean, s.max), (0.125, 0.125, 0.125));

        let sizes = [50, 10, 10, 10, 10, 4, 4, 2];
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let s = distribution_stats(&Partition::from_labels(&labels));
        assert!((s.min - 0.02).abs() < 1e-15);
        assert!((s.mean - 0.125).abs() < 1e-15);
        assert!((s.max - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jaccard_set_examples() {
        let abc = BTreeSet::from(["a", "b", "c"]);
        let bcd = BTreeSet::from(["b", "c", "d"]);
        assert_eq!(jaccard_sets(&abc, &bcd), 0.5);
        assert_eq!(jaccard_sets(&abc, &abc), 1.0);
        assert_eq!(jaccard_sets(&abc, &BTreeSet::from(["x"])), 0.0);
        assert_eq!(jaccard_sets::<&str>(&BTreeSet::new(), &BTreeSet::new()), 1.0);
    }

    #[test]
    fn jaccard_clustering_examples() {
        let words: Vec<String> = (0..16).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let labels: Vec<usize> = (0..16).map(|i| i / 2).collect();
        let a = clustering(&refs, &labels);
        assert_eq!(jaccard_clusterings(&a, &a).unwrap(), 0.125);

        let other = clustering(&["x", "y"], &[0, 1]);
        assert!(matches!(jaccard_clusterings(&a, &other), Err(Error::WordSetMismatch)));
    }

    #[test]
    fn averages() {
        assert_eq!(average_jaccard(&[0.2, 0.6]).unwrap(), 0.4);
        assert!((average_jaccard(&[0.4; 20]).unwrap() - 0.4).abs() < 1e-15);
        assert!(matches!(average_jaccard(&[]), Err(Error::EmptySeries)));
        let (m, sd) = mean_and_sd(&[0.05, 0.07]).unwrap();
        assert!((m - 0.06).abs() < 1e-15 && (sd - 0.01).abs() < 1e-15);
        assert_eq!(mean_and_sd(&[0.3, 0.3, 0.3]).unwrap().1, 0.0);
    }

    #[test]
    fn matrix_is_symmetric_with_unit_diagonal() {
        let mut m = JaccardMatrix::new(vec!["a".into(), "b".into(), "c".into()]);
        m.set(2, 0, 0.25);
        assert_eq!(m.get(0, 2), 0.25);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(m.pairs().count(), 3);
    }
}
