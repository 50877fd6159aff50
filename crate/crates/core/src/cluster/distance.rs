use rayon::prelude::*;

use crate::error::{Error, Result};

/// Symmetric distances between `n` points, stored as the condensed upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Build from a condensed vector of length `n(n-1)/2`, row-major over `i < j`.
    pub fn from_condensed(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch {
                line: 0,
                expected: n * n.saturating_sub(1) / 2,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::NonFinite(format!("distance entry {bad}")));
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Build by evaluating `f(i, j)` for every `i < j`, in parallel by row.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let data: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| ((i + 1)..n).map(move |j| (i, j)).map(|(i, j)| f(i, j)).collect::<Vec<_>>())
            .collect();
        Self::from_condensed(n, data)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn condensed(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub(crate) fn index(n: usize, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Distance between `i` and `j`; zero on the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.data[Self::index(self.n, i, j)]
        }
    }

    pub(crate) fn into_condensed(self) -> Vec<f64> {
        self.data
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `1 - cos(u, v)`, in `[0, 2]`.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    assert_eq!(u.len(), v.len(), "vectors differ in dimension");
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 {
        return Err(Error::ZeroVector { row: 0 });
    }
    if nv == 0.0 {
        return Err(Error::ZeroVector { row: 1 });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((1.0 - dot / (nu * nv)).max(0.0))
}

/// Rows scaled to unit length.
pub fn normalize_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Vec<Vec<f64>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let r = r.as_ref();
            let n = norm(r);
            if n == 0.0 || !n.is_finite() {
                Err(Error::ZeroVector { row: i })
            } else {
                Ok(r.iter().map(|x| x / n).collect())
            }
        })
        .collect()
}

/// Cosine distances between all pairs of rows.
pub fn pairwise_cosine<R: AsRef<[f64]> + Sync>(rows: &[R]) -> Result<DistanceMatrix> {
    if rows.len() < 2 {
        return Err(Error::InvalidK { k: 2, n: rows.len() });
    }
    let unit = normalize_rows(rows)?;
    DistanceMatrix::from_fn(unit.len(), |i, j| {
        let dot: f64 = unit[i].iter().zip(&unit[j]).map(|(a, b)| a * b).sum();
        (1.0 - dot).max(0.0)
    })
}

/// Squared Euclidean distances between all pairs of rows.
pub fn pairwise_sq_euclidean<R: AsRef<[f64]> + Sync>(rows: &[R]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_fn(rows.len(), |i, j| {
        rows[i]
            .as_ref()
            .iter()
            .zip(rows[j].as_ref())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosine_examples() {
        assert!(cosine_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap().abs() < 1e-15);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 1.0);
        assert!((cosine_distance(&[1.0, 1.0], &[-2.0, -2.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(cosine_distance(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroVector { .. })));
    }

    #[test]
    fn pairwise_examples() {
        let d = pairwise_cosine(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(d.condensed().len(), 1);
        assert!(d.get(0, 1).abs() < 1e-15);

        let basis = [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let d = pairwise_cosine(&basis).unwrap();
        assert_eq!(d.condensed(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_row_is_reported() {
        let rows = [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]];
        assert!(matches!(pairwise_cosine(&rows), Err(Error::ZeroVector { row: 2 })));
    }

    #[test]
    fn condensed_indexing() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(DistanceMatrix::index(n, i, j), k);
                assert_eq!(DistanceMatrix::index(n, j, i), k);
                k += 1;
            }
        }
    }

    fn rows(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), n)
            .prop_filter("nonzero rows", |rs| rs.iter().all(|r| norm(r) > 1e-3))
    }

    proptest! {
        #[test]
        fn pairwise_matches_scalar(rs in rows(7, 4)) {
            let d = pairwise_cosine(&rs).unwrap();
            for i in 0..rs.len() {
                for j in 0..rs.len() {
                    if i != j {
                        let want = cosine_distance(&rs[i], &rs[j]).unwrap();
                        prop_assert!((d.get(i, j) - want).abs() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn unit_sq_euclidean_is_twice_cosine(rs in rows(6, 5)) {
            let unit = normalize_rows(&rs).unwrap();
            let sq = pairwise_sq_euclidean(&unit).unwrap();
            let cos = pairwise_cosine(&rs).unwrap();
            for (a, b) in sq.condensed().iter().zip(cos.condensed()) {
                prop_assert!((a - 2.0 * b).abs() < 1e-9);
            }
        }
    }
}
