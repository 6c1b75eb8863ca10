use rand::Rng;
use rand_distr::StandardNormal;

use super::brownian::PathGrid;
use super::estimate::EstimateWithCI;
use super::rng::{RngSeed, SimRng};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, Execution};

/// A Wiener path together with the Girsanov exponent of a drifted law.
#[derive(Debug, Clone, PartialEq)]
pub struct SdePath {
    /// `X` on the grid, starting at `X₀ = 0`.
    pub values: Vec<f64>,
    /// `Σ m(Xₖ)ΔBₖ − ½ Σ m(Xₖ)² Δt`, the log of `dQ̃/dP` along the path.
    pub log_lr: f64,
    /// `max_k |m(Xₖ)|` along the path.
    pub max_abs_drift: f64,
}

fn girsanov_walk<F, R>(drift: &F, grid: &PathGrid, rng: &mut SimRng, mut record: R) -> (f64, f64)
where
    F: Fn(f64) -> f64,
    R: FnMut(f64),
{
    let dt = grid.dt();
    let sd = dt.sqrt();
    let mut x = 0.0;
    let mut log_lr = 0.0;
    let mut max_abs = 0.0f64;
    record(x);
    for _ in 0..grid.n_steps() {
        let db = sd * rng.sample::<f64, _>(StandardNormal);
        let m = drift(x);
        max_abs = max_abs.max(m.abs());
        log_lr += m * db - 0.5 * m * m * dt;
        x += db;
        record(x);
    }
    (log_lr, max_abs)
}

/// Path under the nominal Wiener measure `P` with the accumulated log
/// likelihood ratio of `dX = m(X)dt + dB` against `P`.
pub fn simulate_sde_path<F: Fn(f64) -> f64>(drift: F, grid: &PathGrid, rng: &mut SimRng) -> SdePath {
    let mut values = Vec::with_capacity(grid.n_steps() + 1);
    let (log_lr, max_abs_drift) = girsanov_walk(&drift, grid, rng, |x| values.push(x));
    SdePath {
        values,
        log_lr,
        max_abs_drift,
    }
}

/// Euler–Maruyama path of `dX = m(X)dt + dB`, `X₀ = 0`.
pub fn euler_maruyama<F: Fn(f64) -> f64>(drift: F, grid: &PathGrid, rng: &mut SimRng) -> Vec<f64> {
    let dt = grid.dt();
    let sd = dt.sqrt();
    let mut x = 0.0;
    let mut out = Vec::with_capacity(grid.n_steps() + 1);
    out.push(x);
    for _ in 0..grid.n_steps() {
        x += drift(x) * dt + sd * rng.sample::<f64, _>(StandardNormal);
        out.push(x);
    }
    out
}

/// Estimates `R_α(Q̃‖P) = 1/(α(α−1)) log E_P[(dQ̃/dP)^α]` from `n_paths`
/// Wiener paths.
///
/// The average of `(dQ̃/dP)^α` is formed in log domain; the standard error
/// comes from the delta method on the log of that average. Fails if the
/// drift leaves the declared envelope `|m| ≤ mu_bound` on any path.
pub fn girsanov_renyi_estimate<F>(
    drift: F,
    mu_bound: f64,
    alpha: f64,
    n_paths: usize,
    grid: &PathGrid,
    seed: RngSeed,
    exec: Execution,
) -> Result<EstimateWithCI>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidOrder(alpha));
    }
    if !(mu_bound >= 0.0) {
        return Err(invalid("mu_bound", format!("must be >= 0, got {mu_bound}")));
    }
    if n_paths < 2 {
        return Err(invalid("n_paths", format!("need at least 2, got {n_paths}")));
    }
    let per_path = map_indexed(exec, n_paths, |i| {
        let mut rng = seed.stream(i as u64);
        girsanov_walk(&drift, grid, &mut rng, |_| {})
    });
    let tol = mu_bound * (1.0 + 1e-12);
    if let Some(&(_, worst)) = per_path.iter().find(|(_, m)| *m > tol) {
        return Err(Error::DriftEnvelope {
            x: f64::NAN,
            value: worst,
            bound: mu_bound,
        });
    }
    let w: Vec<f64> = per_path.iter().map(|(l, _)| alpha * l).collect();
    let shift = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = w.iter().map(|x| (x - shift).exp()).collect();
    let m = EstimateWithCI::from_samples(&scaled, seed);
    if !(m.mean > 0.0) || !m.std_error.is_finite() {
        return Err(Error::Degenerate("likelihood-ratio moments vanished".into()));
    }
    let norm = alpha * (alpha - 1.0);
    let log_mean = shift + m.mean.ln();
    let se_log = m.std_error / m.mean;
    Ok(EstimateWithCI::new(log_mean / norm, se_log / norm, n_paths as u64, seed))
}
