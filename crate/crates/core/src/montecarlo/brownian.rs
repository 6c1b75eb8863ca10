use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::estimate::{mc_mean_ci, EstimateWithCI};
use super::rng::{RngSeed, SimRng};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::tolerances::DEFAULT_BM_STEPS;

/// Uniform time grid on `[0, horizon]` with `n_steps` increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    n_steps: usize,
    horizon: f64,
}

impl PathGrid {
    pub fn new(n_steps: usize, horizon: f64) -> Result<Self> {
        if n_steps < 2 {
            return Err(invalid("n_steps", format!("need at least 2, got {n_steps}")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid("horizon", format!("must be positive, got {horizon}")));
        }
        Ok(PathGrid { n_steps, horizon })
    }

    /// `2¹²` steps on `[0, 1]`.
    pub fn unit() -> Self {
        PathGrid {
            n_steps: DEFAULT_BM_STEPS,
            horizon: 1.0,
        }
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }
}

/// One path of `X_t = B_t + μt`; reports whether `sup X > level`.
///
/// With `bridge`, a crossing between grid values `a, b < K` is declared with
/// the Brownian-bridge probability `exp(−2(K−a)(K−b)/Δt)`. The per-interval
/// decisions are conditionally independent given the grid values, so they
/// are drawn jointly with one uniform at the end of the path.
pub fn simulate_bm_max_exceeds(level: f64, mu: f64, grid: &PathGrid, bridge: bool, rng: &mut SimRng) -> bool {
    let dt = grid.dt();
    let sd = dt.sqrt();
    let drift = mu * dt;
    let mut x = 0.0;
    let mut log_survive = 0.0;
    for _ in 0..grid.n_steps {
        let z: f64 = rng.sample(StandardNormal);
        let y = x + drift + sd * z;
        if y > level {
            return true;
        }
        if bridge {
            let p = (-2.0 * (level - x) * (level - y) / dt).exp();
            log_survive += (-p).ln_1p();
        }
        x = y;
    }
    if bridge && log_survive < 0.0 {
        let u: f64 = rng.random();
        return u < -log_survive.exp_m1();
    }
    false
}

/// Monte Carlo estimate of `P(sup_{t≤T} (B_t + μt) > level)`.
pub fn estimate_bm_exceedance(
    level: f64,
    mu: f64,
    grid: &PathGrid,
    bridge: bool,
    paths: usize,
    seed: RngSeed,
    exec: Execution,
) -> Result<EstimateWithCI> {
    if !(level > 0.0) {
        return Err(invalid("level", format!("must be positive, got {level}")));
    }
    mc_mean_ci(
        |rng| simulate_bm_max_exceeds(level, mu, grid, bridge, rng) as u8 as f64,
        paths,
        seed,
        exec,
    )
}
