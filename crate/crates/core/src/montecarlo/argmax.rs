use rand::Rng;
use rand_distr::StandardNormal;

use super::brownian::PathGrid;
use super::estimate::EstimateWithCI;
use super::rng::{RngSeed, SimRng};
use crate::error::{invalid, Result};
use crate::exec::{map_indexed, Execution};

/// First time at which a sampled path attains its maximum; `path[0]` is
/// the value at time 0 and the samples are equally spaced over `horizon`.
pub fn argmax_time(path: &[f64], horizon: f64) -> f64 {
    if path.len() < 2 {
        return 0.0;
    }
    let mut best = 0;
    for (i, &x) in path.iter().enumerate() {
        if x > path[best] {
            best = i;
        }
    }
    horizon * best as f64 / (path.len() - 1) as f64
}

/// `H(t)` for one path of `X_s = B_s + μs` on the grid.
pub fn simulate_argmax_time(mu: f64, grid: &PathGrid, rng: &mut SimRng) -> f64 {
    let dt = grid.dt();
    let sd = dt.sqrt();
    let drift = mu * dt;
    let (mut x, mut best_x, mut best_k) = (0.0, 0.0, 0usize);
    for k in 1..=grid.n_steps() {
        x += drift + sd * rng.sample::<f64, _>(StandardNormal);
        if x > best_x {
            best_x = x;
            best_k = k;
        }
    }
    grid.horizon() * best_k as f64 / grid.n_steps() as f64
}

/// `paths` independent draws of `H(t)`, in replication order.
pub fn sample_argmax_times(mu: f64, grid: &PathGrid, paths: usize, seed: RngSeed, exec: Execution) -> Vec<f64> {
    map_indexed(exec, paths, |i| simulate_argmax_time(mu, grid, &mut seed.stream(i as u64)))
}

/// Estimates `E[e^{−γ H(t)}]` for each `γ` in `rates`, all from the same paths.
pub fn estimate_laplace_h(
    mu: f64,
    rates: &[f64],
    grid: &PathGrid,
    paths: usize,
    seed: RngSeed,
    exec: Execution,
) -> Result<Vec<EstimateWithCI>> {
    if paths < 2 {
        return Err(invalid("paths", format!("need at least 2, got {paths}")));
    }
    let h = sample_argmax_times(mu, grid, paths, seed, exec);
    Ok(rates
        .iter()
        .map(|&g| {
            let v: Vec<f64> = h.iter().map(|t| (-g * t).exp()).collect();
            EstimateWithCI::from_samples(&v, seed)
        })
        .collect())
}
