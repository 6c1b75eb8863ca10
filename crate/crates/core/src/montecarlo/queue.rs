use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::estimate::{mc_mean_ci, EstimateWithCI};
use super::rng::{RngSeed, SimRng};
use crate::applications::{queue_overflow_event, QueueModel};
use crate::error::{invalid, Result};
use crate::exec::Execution;

/// Poisson variate; exact inversion for `rate ≤ 30`.
pub fn sample_poisson(rate: f64, rng: &mut SimRng) -> f64 {
    if rate <= 0.0 {
        return 0.0;
    }
    if rate > 30.0 {
        return Poisson::new(rate).expect("positive rate").sample(rng);
    }
    let u: f64 = rng.random();
    let mut p = (-rate).exp();
    let mut cdf = p;
    let mut k = 0u32;
    while u > cdf && k < 1000 {
        k += 1;
        p *= rate / k as f64;
        cdf += p;
    }
    k as f64
}

/// Law of the arrival process, one draw per time slot.
pub trait ArrivalLaw: Sync {
    /// Arrivals in slot `step` (0-based).
    fn sample(&self, step: usize, rng: &mut SimRng) -> f64;
}

/// iid Poisson arrivals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonArrivals {
    pub rate: f64,
}

impl ArrivalLaw for PoissonArrivals {
    fn sample(&self, _step: usize, rng: &mut SimRng) -> f64 {
        sample_poisson(self.rate, rng)
    }
}

/// Independent Poisson arrivals with a rate per slot (a product measure
/// with possibly different marginals).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductArrivals {
    pub rates: Vec<f64>,
}

impl ArrivalLaw for ProductArrivals {
    fn sample(&self, step: usize, rng: &mut SimRng) -> f64 {
        sample_poisson(self.rates[step], rng)
    }
}

/// Fraction of `reps` replications in which the scaled queue exceeds the
/// model threshold within the horizon.
pub fn simulate_queue_overflow_prob<L: ArrivalLaw + ?Sized>(
    law: &L,
    model: &QueueModel,
    reps: usize,
    seed: RngSeed,
    exec: Execution,
) -> Result<EstimateWithCI> {
    if reps < 100 {
        return Err(invalid("reps", format!("need at least 100 replications, got {reps}")));
    }
    let n = model.horizon();
    mc_mean_ci(
        |rng| {
            let arrivals: Vec<f64> = (0..n).map(|k| law.sample(k, rng)).collect();
            queue_overflow_event(&arrivals, model) as u8 as f64
        },
        reps,
        seed,
        exec,
    )
}
