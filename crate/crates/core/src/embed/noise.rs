use rand::Rng;

use crate::corpus::Vocabulary;

/// Unigram^power distribution over vocabulary ids with O(1) alias sampling.
#[derive(Clone, Debug)]
pub struct NoiseDistribution {
    probabilities: Vec<f64>,
    accept: Vec<f64>,
    alias: Vec<u32>,
}

impl NoiseDistribution {
    pub fn new(vocab: &Vocabulary, power: f64) -> Self {
        Self::from_counts(vocab.counts(), power)
    }

    /// Panics on an empty or all-zero count list, or a negative power.
    pub fn from_counts(counts: &[u64], power: f64) -> Self {
        assert!(!counts.is_empty(), "noise distribution needs at least one word");
        assert!(power >= 0.0, "power must be non-negative");
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(power)).collect();
        let total: f64 = weights.iter().sum();
        assert!(total > 0.0, "noise distribution needs positive counts");
        let probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let (accept, alias) = vose_alias(&probabilities);
        NoiseDistribution {
            probabilities,
            accept,
            alias,
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let i = rng.gen_range(0..self.accept.len());
        if rng.gen::<f64>() < self.accept[i] {
            i as u32
        } else {
            self.alias[i]
        }
    }
}

fn vose_alias(probabilities: &[f64]) -> (Vec<f64>, Vec<u32>) {
    let n = probabilities.len();
    let mut scaled: Vec<f64> = probabilities.iter().map(|p| p * n as f64).collect();
    let mut accept = vec![1.0; n];
    let mut alias: Vec<u32> = (0..n as u32).collect();
    let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);

    while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
        accept[s] = scaled[s];
        alias[s] = l as u32;
        scaled[l] -= 1.0 - scaled[s];
        if scaled[l] < 1.0 {
            large.pop();
            small.push(l);
        }
    }
    // Leftovers are 1 up to rounding.
    (accept, alias)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn powered_unigram_example() {
        let d = NoiseDistribution::from_counts(&[4, 1], 0.75);
        let expected = 4f64.powf(0.75) / (4f64.powf(0.75) + 1.0);
        assert!((d.probabilities()[0] - expected).abs() < 1e-15);
        assert!((d.probabilities()[0] - 0.7388).abs() < 1e-4);
    }

    #[test]
    fn equal_counts_and_zero_power_are_uniform() {
        for d in [
            NoiseDistribution::from_counts(&[3, 3, 3, 3], 0.75),
            NoiseDistribution::from_counts(&[1, 10, 100, 1000], 0.0),
        ] {
            for &p in d.probabilities() {
                assert!((p - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let counts: Vec<u64> = (1..500).map(|i| (i * 7919) % 1000 + 1).collect();
        let d = NoiseDistribution::from_counts(&counts, 0.75);
        let sum: f64 = d.probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(d.probabilities().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn sampling_frequencies_within_three_sigma() {
        let counts = [50u64, 20, 10, 5, 5, 3, 2, 1, 1, 1];
        let d = NoiseDistribution::from_counts(&counts, 0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 1_000_000usize;
        let mut hist = vec![0usize; counts.len()];
        for _ in 0..draws {
            hist[d.sample(&mut rng) as usize] += 1;
        }
        for (i, &p) in d.probabilities().iter().enumerate() {
            let expected = p * draws as f64;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            let observed = hist[i] as f64;
            assert!(
                (observed - expected).abs() <= 3.0 * sigma,
                "word {i}: observed {observed}, expected {expected} ± {sigma}"
            );
        }
    }
}
