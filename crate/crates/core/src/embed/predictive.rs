//! Negative-sampling CBOW and skip-gram over composed input vectors.
//!
//! A word's input vector is the sum of a list of input-matrix rows: just the
//! word's own row for word2vec, the word row plus its n-gram bucket rows for
//! fastText. Everything else is shared.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hogwild::SharedMatrix;
use super::noise::NoiseDistribution;
use super::objective::pair_coefficient;
use super::{Flavor, Hyperparams, NOISE_POWER};
use crate::error::{Error, Result};

/// Floor of the linearly decayed learning rate, relative to the initial rate.
const MIN_LR_FRACTION: f64 = 1e-4;
/// Words a worker processes between learning-rate refreshes.
const LR_REFRESH: u64 = 10_000;

/// Per-word lists of input rows, stored compressed.
#[derive(Clone, Debug)]
pub(crate) struct InputRows {
    offsets: Vec<usize>,
    rows: Vec<u32>,
}

impl InputRows {
    pub fn from_lists(lists: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut offsets = vec![0];
        let mut rows = Vec::new();
        for list in lists {
            rows.extend(list);
            offsets.push(rows.len());
        }
        InputRows { offsets, rows }
    }

    /// One row per word, row id = word id.
    pub fn identity(n: usize) -> Self {
        InputRows {
            offsets: (0..=n).collect(),
            rows: (0..n as u32).collect(),
        }
    }

    #[inline]
    pub fn of(&self, word: u32) -> &[u32] {
        let w = word as usize;
        &self.rows[self.offsets[w]..self.offsets[w + 1]]
    }

    pub fn words(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub(crate) struct Job<'a> {
    pub sentences: &'a [Vec<u32>],
    pub counts: &'a [u64],
    pub inputs: &'a InputRows,
    pub input_rows: usize,
    pub flavor: Flavor,
    pub hp: &'a Hyperparams,
    pub threads: usize,
}

/// Train and return the raw input matrix (`input_rows x dim`).
pub(crate) fn train(job: &Job<'_>) -> Result<Vec<f32>> {
    let hp = job.hp;
    assert!(job.flavor != Flavor::None, "predictive training needs a context flavor");
    let d = hp.dimension;
    let vocab_len = job.counts.len();
    debug_assert_eq!(job.inputs.words(), vocab_len);

    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let half = 0.5 / d as f32;
    let input: Vec<f32> = (0..job.input_rows * d).map(|_| rng.gen_range(-half..half)).collect();
    let input = SharedMatrix::from_vec(input, d);
    let output = SharedMatrix::from_vec(vec![0.0; vocab_len * d], d);
    let noise = NoiseDistribution::from_counts(job.counts, NOISE_POWER);

    let total_words: u64 = job.sentences.iter().map(|s| s.len() as u64).sum();
    let total_work = (total_words * hp.epochs as u64).max(1);
    let keep = hp
        .subsample_threshold
        .map(|t| keep_probabilities(job.counts, t));

    let progress = AtomicU64::new(0);
    let diverged = AtomicBool::new(false);
    let shards = shard(job.sentences, job.threads.max(1));

    std::thread::scope(|scope| {
        for (worker, sentences) in shards.into_iter().enumerate() {
            let ctx = Worker {
                input: &input,
                output: &output,
                noise: &noise,
                inputs: job.inputs,
                keep: keep.as_deref(),
                flavor: job.flavor,
                hp,
                progress: &progress,
                diverged: &diverged,
                total_work,
            };
            scope.spawn(move || ctx.run(sentences, worker as u64));
        }
    });

    if diverged.load(Ordering::Relaxed) {
        return Err(Error::NonFinite(format!("{:?} training", job.flavor)));
    }
    let input = input.into_vec();
    if input.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("input matrix".into()));
    }
    Ok(input)
}

/// Per-word keep probability under frequency subsampling.
fn keep_probabilities(counts: &[u64], threshold: f64) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let t = threshold * total as f64;
    counts
        .iter()
        .map(|&c| {
            let c = c as f64;
            ((c / t).sqrt() + 1.0) * t / c
        })
        .collect()
}

/// Split sentences into at most `n` contiguous shards of similar token count.
fn shard(sentences: &[Vec<u32>], n: usize) -> Vec<&[Vec<u32>]> {
    if n <= 1 || sentences.len() <= 1 {
        return vec![sentences];
    }
    let total: usize = sentences.iter().map(Vec::len).sum();
    let target = total.div_ceil(n);
    let mut shards = Vec::with_capacity(n);
    let mut start = 0;
    let mut acc = 0;
    for (i, s) in sentences.iter().enumerate() {
        acc += s.len();
        if acc >= target && shards.len() + 1 < n {
            shards.push(&sentences[start..=i]);
            start = i + 1;
            acc = 0;
        }
    }
    if start < sentences.len() {
        shards.push(&sentences[start..]);
    }
    shards
}

struct Worker<'a> {
    input: &'a SharedMatrix,
    output: &'a SharedMatrix,
    noise: &'a NoiseDistribution,
    inputs: &'a InputRows,
    keep: Option<&'a [f64]>,
    flavor: Flavor,
    hp: &'a Hyperparams,
    progress: &'a AtomicU64,
    diverged: &'a AtomicBool,
    total_work: u64,
}

struct Scratch {
    hidden: Vec<f32>,
    grad: Vec<f32>,
    sentence: Vec<u32>,
    context: Vec<u32>,
}

impl Worker<'_> {
    fn learning_rate(&self) -> f32 {
        let done = self.progress.load(Ordering::Relaxed) as f64 / self.total_work as f64;
        let lr0 = self.hp.learning_rate;
        (lr0 * (1.0 - done).max(MIN_LR_FRACTION)) as f32
    }

    fn run(&self, sentences: &[Vec<u32>], worker: u64) {
        let d = self.hp.dimension;
        let mut rng = ChaCha8Rng::seed_from_u64(self.hp.seed);
        rng.set_stream(worker + 1);
        let mut scratch = Scratch {
            hidden: vec![0.0; d],
            grad: vec![0.0; d],
            sentence: Vec::new(),
            context: Vec::new(),
        };
        let mut pending = 0u64;
        let mut lr = self.learning_rate();

        for _epoch in 0..self.hp.epochs {
            for sentence in sentences {
                if self.diverged.load(Ordering::Relaxed) {
                    return;
                }
                scratch.sentence.clear();
                match self.keep {
                    Some(keep) => scratch
                        .sentence
                        .extend(sentence.iter().copied().filter(|&w| rng.gen::<f64>() < keep[w as usize])),
                    None => scratch.sentence.extend_from_slice(sentence),
                }
                for pos in 0..scratch.sentence.len() {
                    match self.flavor {
                        Flavor::Skipgram => self.skipgram_at(pos, lr, &mut scratch, &mut rng),
                        _ => self.cbow_at(pos, lr, &mut scratch, &mut rng),
                    }
                }
                pending += sentence.len() as u64;
                if pending >= LR_REFRESH {
                    self.progress.fetch_add(pending, Ordering::Relaxed);
                    pending = 0;
                    lr = self.learning_rate();
                }
            }
        }
        self.progress.fetch_add(pending, Ordering::Relaxed);
    }

    fn compose_into(&self, word: u32, scale: f32, out: &mut [f32]) {
        for &row in self.inputs.of(word) {
            self.input.add_scaled_row_to(row as usize, scale, out);
        }
    }

    /// Positive update for `target` plus `negative` noise updates, all against
    /// `scratch.hidden`; accumulates the input-side gradient in `scratch.grad`.
    fn contrast(&self, target: u32, lr: f32, scratch: &mut Scratch, rng: &mut ChaCha8Rng) {
        scratch.grad.fill(0.0);
        self.update_output(target, true, lr, scratch);
        for _ in 0..self.hp.negative {
            let noise = self.noise.sample(rng);
            if noise == target {
                continue;
            }
            self.update_output(noise, false, lr, scratch);
        }
    }

    #[inline]
    fn update_output(&self, word: u32, positive: bool, lr: f32, scratch: &mut Scratch) {
        let row = word as usize;
        let score = self.output.dot_row(row, &scratch.hidden);
        if !score.is_finite() {
            self.diverged.store(true, Ordering::Relaxed);
            return;
        }
        let g = pair_coefficient(score, positive) * lr;
        self.output.add_scaled_row_to(row, g, &mut scratch.grad);
        self.output.axpy_row(row, g, &scratch.hidden);
    }

    fn window(&self, pos: usize, len: usize) -> std::ops::Range<usize> {
        pos.saturating_sub(self.hp.window)..(pos + self.hp.window + 1).min(len)
    }

    fn skipgram_at(&self, pos: usize, lr: f32, scratch: &mut Scratch, rng: &mut ChaCha8Rng) {
        let center = scratch.sentence[pos];
        for j in self.window(pos, scratch.sentence.len()) {
            if j == pos {
                continue;
            }
            let target = scratch.sentence[j];
            scratch.hidden.fill(0.0);
            let mut hidden = std::mem::take(&mut scratch.hidden);
            self.compose_into(center, 1.0, &mut hidden);
            scratch.hidden = hidden;
            self.contrast(target, lr, scratch, rng);
            for &row in self.inputs.of(center) {
                self.input.axpy_row(row as usize, 1.0, &scratch.grad);
            }
        }
    }

    fn cbow_at(&self, pos: usize, lr: f32, scratch: &mut Scratch, rng: &mut ChaCha8Rng) {
        let center = scratch.sentence[pos];
        scratch.context.clear();
        for j in self.window(pos, scratch.sentence.len()) {
            if j != pos {
                scratch.context.push(scratch.sentence[j]);
            }
        }
        if scratch.context.is_empty() {
            return;
        }
        let scale = 1.0 / scratch.context.len() as f32;
        let mut hidden = std::mem::take(&mut scratch.hidden);
        hidden.fill(0.0);
        for &c in &scratch.context {
            self.compose_into(c, scale, &mut hidden);
        }
        scratch.hidden = hidden;
        self.contrast(center, lr, scratch, rng);
        for &c in &scratch.context {
            for &row in self.inputs.of(c) {
                self.input.axpy_row(row as usize, 1.0, &scratch.grad);
            }
        }
    }
}

/// Sum each word's input rows into a `words x dim` matrix.
pub(crate) fn compose(input: &[f32], inputs: &InputRows, dim: usize) -> Vec<f32> {
    let mut out = vec![0.0f32; inputs.words() * dim];
    for (w, dst) in out.chunks_exact_mut(dim).enumerate() {
        for &row in inputs.of(w as u32) {
            let src = &input[row as usize * dim..(row as usize + 1) * dim];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += s;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_all_sentences_in_order() {
        let sentences: Vec<Vec<u32>> = (0..10).map(|i| vec![0; i + 1]).collect();
        for n in 1..6 {
            let shards = shard(&sentences, n);
            assert!(shards.len() <= n);
            let flat: Vec<&Vec<u32>> = shards.iter().flat_map(|s| s.iter()).collect();
            assert_eq!(flat.len(), sentences.len());
            for (a, b) in flat.iter().zip(&sentences) {
                assert!(std::ptr::eq(*a, b));
            }
        }
    }

    #[test]
    fn compose_sums_rows() {
        let inputs = InputRows::from_lists([vec![0, 2], vec![1]]);
        let input = [1.0, 2.0, 10.0, 20.0, 100.0, 200.0];
        assert_eq!(compose(&input, &inputs, 2), vec![101.0, 202.0, 10.0, 20.0]);
    }

    #[test]
    fn keep_probability_drops_frequent_words() {
        let keep = keep_probabilities(&[1_000_000, 10], 1e-3);
        assert!(keep[0] < 0.1);
        assert!(keep[1] > 1.0);
    }
}
