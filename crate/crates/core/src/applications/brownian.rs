use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::bounds::{event_bounds, BoundResult, Scale};
use crate::error::{invalid, Result};
use crate::exec::{map_indexed, Execution};
use crate::renyi::{renyi_bm_drift, DivergenceBudget};
use crate::specfun::{erfc, log_erfc};

/// `X_t = B_t + μt` on `[0, 1]` and the exceedance level `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrownianModel {
    pub drift: f64,
    pub level: f64,
    /// Envelope `|m(x)| ≤ drift_bound` for state-dependent drifts.
    pub drift_bound: f64,
}

impl BrownianModel {
    pub fn new(drift: f64, level: f64, drift_bound: f64) -> Result<Self> {
        if !(level > 0.0 && level.is_finite()) {
            return Err(invalid("level", format!("must be positive, got {level}")));
        }
        if !(drift_bound >= 0.0) || !drift.is_finite() {
            return Err(invalid("drift", "need a finite drift and drift_bound >= 0"));
        }
        Ok(BrownianModel {
            drift,
            level,
            drift_bound,
        })
    }
}

/// `P(sup_{t≤1} B_t > K) = erfc(K/√2)` by the reflection principle.
pub fn bm_exceedance_nominal(level: f64) -> f64 {
    erfc(level * FRAC_1_SQRT_2)
}

/// `P(sup_{t≤1} (B_t + μt) > K) = ½erfc((K−μ)/√2) + ½e^{2μK}erfc((K+μ)/√2)`.
pub fn bm_exceedance_drift(level: f64, mu: f64) -> f64 {
    let a = 0.5 * erfc((level - mu) * FRAC_1_SQRT_2);
    let b = 0.5 * (2.0 * mu * level + log_erfc((level + mu) * FRAC_1_SQRT_2)).exp();
    a + b
}

/// One row of the exceedance bound table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub bound: BoundResult,
    /// The drifted-model value on the same scale as the bounds.
    pub exact: f64,
}

impl CurveRow {
    pub fn csv_row(&self) -> String {
        self.bound.csv_row(Some(self.exact))
    }
}

/// `points` equally spaced orders from `min` to `max` inclusive.
pub fn alpha_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 1.0 && min < max && max.is_finite()) {
        return Err(invalid("alpha range", format!("need 1 < min < max, got [{min}, {max}]")));
    }
    if points < 2 {
        return Err(invalid("points", format!("need at least 2, got {points}")));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { max } else { min + i as f64 * step }).collect())
}

/// Robust sandwich on `Q(sup X > K)` for every `α` in `alphas`, with nominal
/// Wiener measure and budget `μ²/2` on both sides; `exact` is the closed-form
/// drifted value at `μ = mu_budget`. Rows with `α ≤ 2` carry the upper side
/// only. Rows are returned in the order of `alphas`.
pub fn bm_bound_curves(level: f64, mu_budget: f64, alphas: &[f64], scale: Scale, exec: Execution) -> Result<Vec<CurveRow>> {
    if !(level > 0.0) {
        return Err(invalid("level", format!("must be positive, got {level}")));
    }
    if alphas.is_empty() || alphas.iter().any(|a| !(*a > 1.0 && a.is_finite())) {
        return Err(invalid("alpha grid", "orders must be finite and > 1"));
    }
    let p = bm_exceedance_nominal(level);
    let q = bm_exceedance_drift(level, mu_budget);
    let budget = DivergenceBudget::symmetric(renyi_bm_drift(mu_budget))?;
    map_indexed(exec, alphas.len(), |i| {
        let alpha = alphas[i];
        let bound = event_bounds(p, budget, alpha, scale)?;
        let exact = match scale {
            Scale::Probability => q,
            Scale::Log => q.ln() / (alpha - 1.0),
        };
        Ok(CurveRow { bound, exact })
    })
    .into_iter()
    .collect()
}
