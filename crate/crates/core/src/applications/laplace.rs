use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::bounds::{BoundResult, Scale};
use crate::error::{invalid, Error, Result};
use crate::extreal::ExtReal;
use crate::renyi::{renyi_bm_drift, DivergenceBudget};
use crate::specfun::{convolve_to_tolerance, erfc, log_bessel_i0, Convolution};
use crate::tolerances::CONVOLUTION_REL_TOL;

/// Laplace rate `γ`, horizon `t` and bound order `α > 2` for the argmax
/// time `H(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceQuery {
    pub rate: f64,
    pub horizon: f64,
    pub alpha: f64,
}

impl LaplaceQuery {
    pub fn new(rate: f64, horizon: f64, alpha: f64) -> Result<Self> {
        check_rate_horizon(rate, horizon)?;
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(Error::InvalidOrder(alpha));
        }
        Ok(LaplaceQuery { rate, horizon, alpha })
    }
}

fn check_rate_horizon(rate: f64, horizon: f64) -> Result<()> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(invalid("gamma", format!("must be >= 0, got {rate}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {horizon}")));
    }
    Ok(())
}

fn log_laplace_wiener(rate: f64, horizon: f64) -> Result<f64> {
    let x = 0.5 * rate * horizon;
    Ok(-x + log_bessel_i0(x)?)
}

/// `E e^{−γH(t)} = e^{−γt/2} I₀(γt/2)` under Wiener measure.
pub fn laplace_h_wiener(rate: f64, horizon: f64) -> Result<f64> {
    check_rate_horizon(rate, horizon)?;
    Ok(log_laplace_wiener(rate, horizon)?.exp())
}

/// `E e^{−γH(t)}` for `B_s + μs`, as the convolution `(f ∗ g)(t)` of
///
/// ```text
/// f(s) = e^{−γs−μ²s/2}/√(πs) + (μ/√2) e^{−γs} erfc(−μ√s/√2)
/// g(s) = e^{−μ²s/2}/√(πs) − (μ/√2) erfc(μ√s/√2)
/// ```
pub fn laplace_h_drift(rate: f64, horizon: f64, mu: f64) -> Result<Convolution> {
    check_rate_horizon(rate, horizon)?;
    if !mu.is_finite() {
        return Err(invalid("mu", "must be finite"));
    }
    let half_mu2 = 0.5 * mu * mu;
    let k = mu * FRAC_1_SQRT_2;
    let f = move |s: f64| {
        (-rate * s - half_mu2 * s).exp() / (PI * s).sqrt() + k * (-rate * s).exp() * erfc(-k * s.sqrt())
    };
    let g = move |s: f64| (-half_mu2 * s).exp() / (PI * s).sqrt() - k * erfc(k * s.sqrt());
    convolve_to_tolerance(f, g, horizon, CONVOLUTION_REL_TOL)
}

/// Sandwich on `(1/(α−1)) log E_Q e^{−(α−1)γH(t)}` for drift `|μ| ≤ mu_budget`,
/// built from Wiener-measure transforms at rates `(α−2)γ` and `αγ` and the
/// path-measure budget `μ²t/2`. Log scale.
pub fn laplace_h_bounds(query: LaplaceQuery, mu_budget: f64) -> Result<BoundResult> {
    if !mu_budget.is_finite() {
        return Err(invalid("mu_budget", "must be finite"));
    }
    let LaplaceQuery { rate, horizon, alpha } = query;
    let d = renyi_bm_drift(mu_budget) * horizon;
    let lower = log_laplace_wiener((alpha - 2.0) * rate, horizon)? / (alpha - 2.0) - d;
    let upper = log_laplace_wiener(alpha * rate, horizon)? / alpha + d;
    Ok(BoundResult {
        lower: ExtReal::from_f64(lower),
        upper: ExtReal::from_f64(upper),
        alpha,
        budget: DivergenceBudget::symmetric(d)?,
        scale: Scale::Log,
        vacuous: false,
    })
}

/// The bounded quantity `(1/(α−1)) log E_Q e^{−(α−1)γH(t)}` for constant drift `μ`.
pub fn laplace_middle(query: LaplaceQuery, mu: f64) -> Result<f64> {
    let a1 = query.alpha - 1.0;
    let v = laplace_h_drift(a1 * query.rate, query.horizon, mu)?;
    Ok(v.value.ln() / a1)
}
