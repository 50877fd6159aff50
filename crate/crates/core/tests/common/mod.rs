//! Reference implementations and fixtures shared by the integration tests.
//!
//! The oracles here follow the textbook definitions directly and share no
//! code with the library beyond its public types.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use wordassoc::embed::Embeddings;
use wordassoc::synthetic::TopicCorpus;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
}

pub fn random_rows<R: Rng>(rng: &mut R, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let row: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if row.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
                break row;
            }
        })
        .collect()
}

/// Random labels in `0..k` with every label used.
pub fn random_labels<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(n >= k);
    let mut labels: Vec<usize> = (0..k).chain((k..n).map(|_| rng.gen_range(0..k))).collect();
    labels.shuffle(rng);
    labels
}

pub fn cosine(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (nu * nv)
}

/// Dunn's index by literal enumeration: for every cluster pair the closest
/// cross pair, for every cluster the farthest internal pair.
pub fn brute_force_dunn(rows: &[Vec<f64>], labels: &[usize]) -> f64 {
    let k = labels.iter().max().unwrap() + 1;
    let clusters: Vec<Vec<&Vec<f64>>> = (0..k)
        .map(|c| rows.iter().zip(labels).filter(|(_, &l)| l == c).map(|(r, _)| r).collect())
        .collect();
    let dist = |a: &[f64], b: &[f64]| 1.0 - cosine(a, b);
    let mut min_between = f64::INFINITY;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for x in &clusters[i] {
                for y in &clusters[j] {
                    min_between = min_between.min(dist(x, y));
                }
            }
        }
    }
    let mut max_diam = 0.0f64;
    for c in &clusters {
        for x in c {
            for y in c {
                if !std::ptr::eq(*x, *y) {
                    max_diam = max_diam.max(dist(x, y));
                }
            }
        }
    }
    min_between / max_diam
}

/// One greedy Ward step: `(left, right, cost, size)`.
pub type OracleMerge = (usize, usize, f64, usize);

/// Greedy agglomeration on unit-normalized rows. Each step scans every pair
/// of live clusters and merges the one with the smallest Ward cost
/// `2 |A||B| / (|A|+|B|) * ||mean(A) - mean(B)||²`, ties to the smallest
/// `(left, right)` id pair.
pub fn greedy_ward(rows: &[Vec<f64>]) -> Vec<OracleMerge> {
    let n = rows.len();
    let unit: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            r.iter().map(|x| x / norm).collect()
        })
        .collect();
    let d = unit[0].len();
    // (id, members)
    let mut live: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let centroid = |members: &[usize]| -> Vec<f64> {
        let mut c = vec![0.0; d];
        for &m in members {
            for (ci, x) in c.iter_mut().zip(&unit[m]) {
                *ci += x;
            }
        }
        c.iter().map(|x| x / members.len() as f64).collect()
    };
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let cents: Vec<Vec<f64>> = live.iter().map(|(_, m)| centroid(m)).collect();
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..live.len() {
            for b in (a + 1)..live.len() {
                let (na, nb) = (live[a].1.len() as f64, live[b].1.len() as f64);
                let sq: f64 = cents[a].iter().zip(&cents[b]).map(|(x, y)| (x - y) * (x - y)).sum();
                let cost = 2.0 * na * nb / (na + nb) * sq;
                let (left, right) = (live[a].0.min(live[b].0), live[a].0.max(live[b].0));
                let better = match best {
                    None => true,
                    Some((c, l, r, _, _)) => cost < c || (cost == c && (left, right) < (l, r)),
                };
                if better {
                    best = Some((cost, left, right, a, b));
                }
            }
        }
        let (cost, left, right, a, b) = best.unwrap();
        let mut members = live[a].1.clone();
        members.extend(&live[b].1);
        let size = members.len();
        live.remove(b);
        live.remove(a);
        live.push((n + step, members));
        merges.push((left, right, cost, size));
    }
    merges
}

/// Mean cosine similarity between vocabulary words of the same topic minus
/// the mean between words of different topics.
pub fn topic_similarity_gap(corpus: &TopicCorpus, embeddings: &Embeddings) -> f64 {
    let labelled: Vec<(usize, Vec<f64>)> = embeddings
        .words()
        .iter()
        .enumerate()
        .filter_map(|(i, w)| {
            corpus
                .topic_of(w)
                .map(|t| (t, embeddings.row(i).iter().map(|&x| x as f64).collect()))
        })
        .collect();
    let (mut within, mut nw, mut across, mut na) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..labelled.len() {
        for j in (i + 1)..labelled.len() {
            let s = cosine(&labelled[i].1, &labelled[j].1);
            if labelled[i].0 == labelled[j].0 {
                within += s;
                nw += 1;
            } else {
                across += s;
                na += 1;
            }
        }
    }
    within / nw as f64 - across / na as f64
}

/// Largest relative deviation between an analytic gradient and central
/// differences of `loss` at `x`.
pub fn max_fd_error(x: &[f64], analytic: &[f64], loss: impl Fn(&[f64]) -> f64) -> f64 {
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = loss(&probe);
        probe[i] = x[i] - h;
        let down = loss(&probe);
        probe[i] = x[i];
        let numeric = (up - down) / (2.0 * h);
        let err = (numeric - analytic[i]).abs() / numeric.abs().max(analytic[i].abs()).max(1e-3);
        worst = worst.max(err);
    }
    worst
}

/// Worst relative error of the negative-sampling gradient on one random
/// instance: vocabulary of 10, dimension 5, one target and 5 negatives.
pub fn negative_sampling_fd_error<R: Rng>(rng: &mut R) -> f64 {
    use wordassoc::embed::objective::negative_sampling_grad;
    let (v, d, neg) = (10usize, 5usize, 5usize);
    let input: Vec<Vec<f64>> = (0..v).map(|_| (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect()).collect();
    let output: Vec<Vec<f64>> = (0..v).map(|_| (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect()).collect();
    let center = rng.gen_range(0..v);
    let target = rng.gen_range(0..v);
    let negatives: Vec<usize> = (0..neg)
        .map(|_| loop {
            let n = rng.gen_range(0..v);
            if n != target {
                break n;
            }
        })
        .collect();

    let mut x = input[center].clone();
    x.extend(&output[target]);
    for &n in &negatives {
        x.extend(&output[n]);
    }
    let loss = |p: &[f64]| {
        let negs: Vec<&[f64]> = (0..neg).map(|k| &p[(2 + k) * d..(3 + k) * d]).collect();
        negative_sampling_grad(&p[..d], &p[d..2 * d], &negs).loss
    };
    let negs: Vec<&[f64]> = (0..neg).map(|k| &x[(2 + k) * d..(3 + k) * d]).collect();
    let g = negative_sampling_grad(&x[..d], &x[d..2 * d], &negs);
    let mut analytic = g.hidden.clone();
    analytic.extend(&g.target);
    for n in &g.negatives {
        analytic.extend(n);
    }
    max_fd_error(&x, &analytic, loss)
}

/// Worst relative error of the GloVe cell gradient on one random instance
/// of dimension 5, with counts on both sides of the weighting cutoff.
pub fn glove_fd_error<R: Rng>(rng: &mut R) -> f64 {
    use wordassoc::embed::objective::glove_cell_grad;
    let d = 5usize;
    let (xmax, alpha) = (100.0, 0.75);
    let count: f64 = rng.gen_range(0.5..200.0);
    let mut x: Vec<f64> = (0..2 * d + 2).map(|_| rng.gen_range(-0.5..0.5)).collect();
    x[2 * d] *= 2.0;
    let loss = |p: &[f64]| glove_cell_grad(&p[..d], &p[d..2 * d], p[2 * d], p[2 * d + 1], count, xmax, alpha).loss;
    let g = glove_cell_grad(&x[..d], &x[d..2 * d], x[2 * d], x[2 * d + 1], count, xmax, alpha);
    let mut analytic = g.w.clone();
    analytic.extend(&g.wt);
    analytic.push(g.b);
    analytic.push(g.bt);
    max_fd_error(&x, &analytic, loss)
}
