//! Ward agglomeration by the nearest-neighbor chain algorithm.
//!
//! Rows are scaled to unit length first, so the squared Euclidean distance
//! that Ward's criterion works on is exactly twice the cosine distance.

use super::distance::{normalize_rows, pairwise_sq_euclidean, DistanceMatrix};
use crate::error::{Error, Result};

/// One agglomeration step. Points are clusters `0..n`; the cluster created by
/// the `s`-th merge has id `n + s`. `left < right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Ward linkage value: `2 |A||B| / (|A|+|B|) * ||c_A - c_B||²`.
    pub cost: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    points: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn new(points: usize, merges: Vec<Merge>) -> Self {
        debug_assert_eq!(merges.len(), points.saturating_sub(1));
        Dendrogram { points, merges }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }
}

/// Ward dendrogram of the rows after L2 normalization.
pub fn ward_dendrogram<R: AsRef<[f64]> + Sync>(rows: &[R]) -> Result<Dendrogram> {
    if rows.len() < 2 {
        return Err(Error::InvalidK { k: 2, n: rows.len() });
    }
    let unit = normalize_rows(rows)?;
    Ok(ward_linkage(pairwise_sq_euclidean(&unit)?))
}

/// Ward linkage over precomputed squared Euclidean distances.
pub fn ward_linkage(dist: DistanceMatrix) -> Dendrogram {
    let n = dist.len();
    let mut d = dist.into_condensed();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    // (slot a, slot b, cost) in discovery order
    let mut raw: Vec<(usize, usize, f64)> = Vec::with_capacity(n.saturating_sub(1));
    let at = |i: usize, j: usize| DistanceMatrix::index(n, i, j);

    for _ in 1..n {
        if chain.is_empty() {
            chain.push(active.iter().position(|&a| a).expect("an active cluster remains"));
        }
        let (a, b, cost) = loop {
            let x = *chain.last().unwrap();
            let prev = chain.len().checked_sub(2).map(|i| chain[i]);
            let (mut best, mut best_d) = match prev {
                Some(p) => (p, d[at(x, p)]),
                None => (usize::MAX, f64::INFINITY),
            };
            for y in (0..n).filter(|&y| y != x && active[y]) {
                let dy = d[at(x, y)];
                if dy < best_d {
                    best = y;
                    best_d = dy;
                }
            }
            if Some(best) == prev {
                chain.pop();
                chain.pop();
                break (x.min(best), x.max(best), best_d);
            }
            chain.push(best);
        };

        // Merged cluster lives in slot b.
        let (sa, sb) = (size[a] as f64, size[b] as f64);
        for k in (0..n).filter(|&k| active[k] && k != a && k != b) {
            let sk = size[k] as f64;
            let updated = ((sa + sk) * d[at(k, a)] + (sb + sk) * d[at(k, b)] - sk * cost) / (sa + sb + sk);
            d[at(k, b)] = updated;
        }
        active[a] = false;
        size[b] += size[a];
        raw.push((a, b, cost));
    }

    relabel(n, raw)
}

/// Sort merges by cost (stable) and renumber them in scipy's convention.
fn relabel(n: usize, mut raw: Vec<(usize, usize, f64)>) -> Dendrogram {
    raw.sort_by(|x, y| x.2.total_cmp(&y.2));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut cluster_id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let merges = raw
        .into_iter()
        .enumerate()
        .map(|(step, (a, b, cost))| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            let (ia, ib) = (cluster_id[ra], cluster_id[rb]);
            let merged = size[ra] + size[rb];
            parent[ra] = rb;
            cluster_id[rb] = n + step;
            size[rb] = merged;
            Merge {
                left: ia.min(ib),
                right: ia.max(ib),
                cost,
                size: merged,
            }
        })
        .collect();
    Dendrogram::new(n, merges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(deg: f64) -> Vec<f64> {
        let r = deg.to_radians();
        vec![r.cos(), r.sin()]
    }

    #[test]
    fn two_points_single_merge() {
        let d = ward_dendrogram(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(d.merges().len(), 1);
        let m = d.merges()[0];
        assert_eq!((m.left, m.right, m.size), (0, 1, 2));
        // Two unit vectors at 90°: ||a-b||² = 2.
        assert!((m.cost - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_angles_merge_first() {
        let d = ward_dendrogram(&[unit(0.0), unit(5.0), unit(90.0)]).unwrap();
        let first = d.merges()[0];
        assert_eq!((first.left, first.right), (0, 1));
        assert_eq!(d.merges()[1], Merge { left: 2, right: 3, cost: d.merges()[1].cost, size: 3 });
    }

    #[test]
    fn single_point_rejected() {
        assert!(ward_dendrogram(&[vec![1.0]]).is_err());
        assert!(matches!(
            ward_dendrogram(&[vec![1.0, 0.0], vec![0.0, 0.0]]),
            Err(Error::ZeroVector { row: 1 })
        ));
    }
}
