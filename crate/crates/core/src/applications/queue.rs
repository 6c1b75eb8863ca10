use serde::{Deserialize, Serialize};

use crate::bounds::{event_bounds, BoundResult, Scale};
use crate::error::{invalid, Result};
use crate::extreal::ExtReal;
use crate::renyi::DivergenceBudget;
use crate::specfun::{minimize_scalar_expanding, Bracket};
use crate::tolerances::{DEFAULT_BRACKET, GOLDEN_TOL};

/// Cramér rate of a unit-mean Poisson law: `ℓ(x) = x log x − x + 1`,
/// with `ℓ(0) = 1` and `ℓ = ∞` for negative `x`.
pub fn poisson_rate_ell(x: f64) -> ExtReal {
    if x < 0.0 {
        ExtReal::INFINITY
    } else if x == 0.0 {
        ExtReal::from_f64(1.0)
    } else {
        ExtReal::from_f64(x * x.ln() - x + 1.0)
    }
}

/// Slotted queue with service capacity `C` per slot, scaled overflow level
/// `b` and horizon `n` slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueModel {
    capacity: f64,
    threshold: f64,
    horizon: usize,
}

impl QueueModel {
    pub fn new(capacity: f64, threshold: f64, horizon: usize) -> Result<Self> {
        if !(capacity > 1.0 && capacity.is_finite()) {
            return Err(invalid("capacity", format!("stability needs C > 1, got {capacity}")));
        }
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(invalid("threshold", format!("must be positive, got {threshold}")));
        }
        if horizon == 0 {
            return Err(invalid("horizon", "must be at least 1"));
        }
        Ok(QueueModel {
            capacity,
            threshold,
            horizon,
        })
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateBranch {
    #[serde(rename = "t_star_ge_1")]
    TStarGeOne,
    #[serde(rename = "t_star_lt_1")]
    TStarLtOne,
}

/// Decay rate of the overflow probability, `P(A_n) ≈ e^{−nc}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub t_star: f64,
    pub m_star: f64,
    pub c: f64,
    pub branch: RateBranch,
}

/// Minimises `t ℓ(C + b/t)` over `t > 0`; `c = ℓ(C + b)` when the minimiser
/// is at least 1 (the overflow cannot be spread over more than the whole
/// horizon), otherwise `c = m*`.
pub fn overflow_decay_rate(model: &QueueModel) -> Result<RateResult> {
    let (cap, b) = (model.capacity, model.threshold);
    let f = |t: f64| t * poisson_rate_ell(cap + b / t).value();
    let hi = DEFAULT_BRACKET.1.max(10.0 * b / (cap - 1.0));
    let m = minimize_scalar_expanding(f, Bracket::new(DEFAULT_BRACKET.0, hi)?, GOLDEN_TOL)?;
    let (c, branch) = if m.argmin >= 1.0 {
        (poisson_rate_ell(cap + b).value(), RateBranch::TStarGeOne)
    } else {
        (m.value, RateBranch::TStarLtOne)
    };
    Ok(RateResult {
        t_star: m.argmin,
        m_star: m.value,
        c,
        branch,
    })
}

/// `(q + x − C)⁺`.
pub fn lindley_step(q_prev: f64, x: f64, capacity: f64) -> f64 {
    (q_prev + x - capacity).max(0.0)
}

/// `Qₙ = max_{0≤k≤n} (Sₙ − S_{n−k} − Ck)`, the closed form of the recursion
/// started empty.
pub fn lindley_max_formula(arrivals: &[f64], capacity: f64) -> f64 {
    // Sₙ − S_{n−k} is the sum of the last k arrivals.
    let mut best = 0.0f64;
    let mut tail = 0.0;
    for (k, x) in arrivals.iter().rev().enumerate() {
        tail += x;
        best = best.max(tail - capacity * (k + 1) as f64);
    }
    best
}

/// Whether `max_{k≤n} Q_k / n > b` for the queue started empty and fed the
/// first `n` arrivals.
pub fn queue_overflow_event(arrivals: &[f64], model: &QueueModel) -> bool {
    let n = model.horizon;
    debug_assert!(arrivals.len() >= n);
    let level = model.threshold * n as f64;
    let mut q = 0.0;
    for &x in arrivals.iter().take(n) {
        q = lindley_step(q, x, model.capacity);
        if q > level {
            return true;
        }
    }
    false
}

/// Sandwich on `P_θ(A_n)` for product arrivals, with per-slot budgets
/// multiplied by the horizon. `p_lower`/`p_upper` are the nominal
/// probabilities fed to the lower and upper sides (equal for an exact
/// nominal value, CI endpoints for a simulated one).
pub fn overflow_sandwich(
    p_lower: f64,
    p_upper: f64,
    per_slot: DivergenceBudget,
    model: &QueueModel,
    alpha: f64,
    scale: Scale,
) -> Result<BoundResult> {
    let budget = per_slot.scaled(model.horizon as f64)?;
    let lo = event_bounds(p_lower.clamp(0.0, 1.0), budget, alpha, scale)?;
    let mut hi = event_bounds(p_upper.clamp(0.0, 1.0), budget, alpha, scale)?;
    hi.lower = lo.lower;
    Ok(hi)
}
