use serde::{Deserialize, Serialize};

use super::rng::{RngSeed, SimRng};
use crate::error::{invalid, Result};
use crate::exec::{fold_blocks, Execution};
use crate::tolerances::Z95;

const BLOCK: usize = 4096;

/// Streaming mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }
}

/// A Monte Carlo point estimate with its standard error and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    #[serde(rename = "se")]
    pub std_error: f64,
    pub ci95: (f64, f64),
    #[serde(rename = "n")]
    pub n_samples: u64,
    pub seed: RngSeed,
}

impl EstimateWithCI {
    pub fn new(mean: f64, std_error: f64, n_samples: u64, seed: RngSeed) -> Self {
        EstimateWithCI {
            mean,
            std_error,
            ci95: (mean - Z95 * std_error, mean + Z95 * std_error),
            n_samples,
            seed,
        }
    }

    pub fn from_moments(m: &Moments, seed: RngSeed) -> Self {
        Self::new(m.mean, (m.variance() / m.n as f64).sqrt(), m.n, seed)
    }

    /// Reduces `samples` in fixed blocks, matching [`mc_mean_ci`].
    pub fn from_samples(samples: &[f64], seed: RngSeed) -> Self {
        let mut total = Moments::default();
        for chunk in samples.chunks(BLOCK) {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            total.merge(&m);
        }
        Self::from_moments(&total, seed)
    }

    /// Number of standard errors separating the estimate from `truth`.
    pub fn z_score(&self, truth: f64) -> f64 {
        (self.mean - truth) / self.std_error
    }

    /// `|mean − truth| ≤ k·se`, with an exact match accepted when `se = 0`.
    pub fn agrees_with(&self, truth: f64, k: f64) -> bool {
        (self.mean - truth).abs() <= k * self.std_error
    }
}

/// Sample mean of `sampler` over `n` replications with a normal 95% interval.
///
/// Replication `i` receives the generator `seed.stream(i)`.
pub fn mc_mean_ci<F>(sampler: F, n: usize, seed: RngSeed, exec: Execution) -> Result<EstimateWithCI>
where
    F: Fn(&mut SimRng) -> f64 + Sync + Send,
{
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 samples, got {n}")));
    }
    let blocks = fold_blocks(exec, n, BLOCK, Moments::default, |acc, i| {
        let mut rng = seed.stream(i as u64);
        acc.push(sampler(&mut rng));
    });
    let mut total = Moments::default();
    for b in &blocks {
        total.merge(b);
    }
    Ok(EstimateWithCI::from_moments(&total, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn constant_sampler() {
        let e = mc_mean_ci(|_| 3.0, 1000, RngSeed(1), Execution::Parallel).unwrap();
        assert_eq!(e.mean, 3.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.ci95, (3.0, 3.0));
        assert!(mc_mean_ci(|_| 3.0, 1, RngSeed(1), Execution::Parallel).is_err());
    }

    #[test]
    fn bernoulli_within_three_se() {
        let e = mc_mean_ci(|r| (r.random::<f64>() < 0.3) as u8 as f64, 100_000, RngSeed(7), Execution::Parallel).unwrap();
        assert!(e.agrees_with(0.3, 3.0), "{e:?}");
        // binomial oracle for the standard error
        assert!((e.std_error - (0.21f64 / 1e5).sqrt()).abs() < 5e-5);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let f = |r: &mut SimRng| r.random::<f64>().ln();
        let a = mc_mean_ci(f, 10_001, RngSeed(9), Execution::Parallel).unwrap();
        let b = mc_mean_ci(f, 10_001, RngSeed(9), Execution::Sequential).unwrap();
        let c = mc_mean_ci(f, 10_001, RngSeed(9), Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn ci_covers_truth_in_most_runs() {
        let covered = (0..200)
            .filter(|&s| {
                let e = mc_mean_ci(|r| (r.random::<f64>() < 0.3) as u8 as f64, 2000, RngSeed(1000 + s), Execution::Sequential)
                    .unwrap();
                e.ci95.0 <= 0.3 && 0.3 <= e.ci95.1
            })
            .count();
        assert!(covered >= 180, "coverage {covered}/200");
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let split = EstimateWithCI::from_samples(&xs, RngSeed(0));
        assert!((split.mean - whole.mean).abs() < 1e-12);
        assert!((split.std_error - (whole.variance() / 1000.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let e = EstimateWithCI::new(0.5, 0.1, 10, RngSeed(3));
        let v: serde_json::Value = serde_json::to_value(e).unwrap();
        assert_eq!(v["se"], 0.1);
        assert_eq!(v["n"], 10);
        assert_eq!(v["seed"], 3);
        assert!(v["ci95"].is_array());
    }
}
