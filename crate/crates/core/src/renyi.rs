//! Rényi divergence `R_α` (normalised by `1/(α(α−1))`) and relative entropy.
//!
//! For `α > 0, α ≠ 1`:
//!
//! ```text
//! R_α(ν‖θ) = 1/(α(α−1)) · log Σ_{νᵢθᵢ>0} νᵢ^α θᵢ^{1−α}
//! ```
//!
//! with `R_α = ∞` when `α > 1` and `ν` is not absolutely continuous with
//! respect to `θ`. Negative orders are defined through the skew identity
//! `R_α(ν‖θ) = R_{1−α}(θ‖ν)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::extreal::ExtReal;
use crate::measure::{lse_by, FiniteMeasure};
use crate::tolerances::ORDER_EXCLUSION;

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha.abs() < ORDER_EXCLUSION || (alpha - 1.0).abs() < ORDER_EXCLUSION {
        return Err(Error::InvalidOrder(alpha));
    }
    Ok(())
}

// Works on log-weights of two measures on a shared support. Order must be admissible.
pub(crate) fn renyi_raw(log_nu: &[f64], log_theta: &[f64], alpha: f64) -> f64 {
    if alpha < 0.0 {
        return renyi_raw(log_theta, log_nu, 1.0 - alpha);
    }
    if log_nu == log_theta {
        return 0.0;
    }
    let n = log_nu.len();
    if alpha > 1.0 && (0..n).any(|i| log_nu[i] > f64::NEG_INFINITY && log_theta[i] == f64::NEG_INFINITY) {
        return f64::INFINITY;
    }
    let s = lse_by(n, |i| {
        if log_nu[i] > f64::NEG_INFINITY && log_theta[i] > f64::NEG_INFINITY {
            alpha * log_nu[i] + (1.0 - alpha) * log_theta[i]
        } else {
            f64::NEG_INFINITY
        }
    });
    if s == f64::NEG_INFINITY {
        // mutually singular
        return f64::INFINITY;
    }
    (s / (alpha * (alpha - 1.0))).max(0.0)
}

/// `R_α(ν‖θ)` for finite measures on the same labels.
pub fn renyi_discrete(nu: &FiniteMeasure, theta: &FiniteMeasure, alpha: f64) -> Result<ExtReal> {
    check_order(alpha)?;
    nu.check_same_support(theta)?;
    Ok(ExtReal::from_f64(renyi_raw(nu.log_weights(), theta.log_weights(), alpha)))
}

pub(crate) fn kl_raw(log_nu: &[f64], log_theta: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&a, &b) in log_nu.iter().zip(log_theta) {
        if a == f64::NEG_INFINITY {
            continue;
        }
        if b == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        s += a.exp() * (a - b);
    }
    s.max(0.0)
}

/// Relative entropy `R(ν‖θ) = Σ νᵢ log(νᵢ/θᵢ)`.
pub fn kl_discrete(nu: &FiniteMeasure, theta: &FiniteMeasure) -> Result<ExtReal> {
    nu.check_same_support(theta)?;
    Ok(ExtReal::from_f64(kl_raw(nu.log_weights(), theta.log_weights())))
}

/// Parameters of a normal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    mean: f64,
    variance: f64,
}

impl GaussianParams {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() || !(variance > 0.0 && variance.is_finite()) {
            return Err(invalid("gaussian", format!("need finite mean and variance > 0, got ({mean}, {variance})")));
        }
        Ok(GaussianParams { mean, variance })
    }

    pub fn standard() -> Self {
        GaussianParams {
            mean: 0.0,
            variance: 1.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let z = x - self.mean;
        -0.5 * (2.0 * std::f64::consts::PI * self.variance).ln() - z * z / (2.0 * self.variance)
    }
}

/// Closed-form `R_α(θ₁‖ν₁)` between normals.
///
/// With `σ_α² = α σ_ν² + (1 − α) σ_θ²`, the divergence is infinite when
/// `σ_α² ≤ 0`.
pub fn renyi_gaussian(theta1: GaussianParams, nu1: GaussianParams, alpha: f64) -> Result<ExtReal> {
    check_order(alpha)?;
    let (s1, s2) = (theta1.variance, nu1.variance);
    let s_alpha = alpha * s2 + (1.0 - alpha) * s1;
    if s_alpha <= 0.0 {
        return Ok(ExtReal::INFINITY);
    }
    let dm = theta1.mean - nu1.mean;
    let v = 0.5 * (s2 / s1).ln() / alpha
        + (s2 / s_alpha).ln() / (2.0 * alpha * (alpha - 1.0))
        + dm * dm / (2.0 * s_alpha);
    Ok(ExtReal::from_f64(v.max(0.0)))
}

/// A Poisson law with positive rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    rate: f64,
}

impl PoissonParams {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(invalid("rate", format!("must be positive, got {rate}")));
        }
        Ok(PoissonParams { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// `R_α(θ‖ν)` between Poisson laws by direct summation of
/// `θ(k)^α ν(k)^{1−α}` over the support, in log domain.
pub fn renyi_poisson(theta: PoissonParams, nu: PoissonParams, alpha: f64) -> Result<ExtReal> {
    check_order(alpha)?;
    if alpha < 0.0 {
        return renyi_poisson(nu, theta, 1.0 - alpha);
    }
    let (la, lb) = (theta.rate.ln(), nu.rate.ln());
    // log of the summand: k(α la + (1−α) lb) − α a − (1−α) b − log k!
    let slope = alpha * la + (1.0 - alpha) * lb;
    let offset = -alpha * theta.rate - (1.0 - alpha) * nu.rate;
    let peak = slope.exp();
    let mut log_fact = 0.0;
    let mut m = f64::NEG_INFINITY;
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        if k > 0 {
            log_fact += (k as f64).ln();
        }
        let t = k as f64 * slope + offset - log_fact;
        m = m.max(t);
        terms.push(t);
        if (k as f64) > peak + 1.0 && t < m - 45.0 {
            break;
        }
        k += 1;
        if k > 50_000_000 {
            return Err(Error::Degenerate("Poisson series did not terminate".into()));
        }
    }
    let s = lse_by(terms.len(), |i| terms[i]);
    Ok(ExtReal::from_f64((s / (alpha * (alpha - 1.0))).max(0.0)))
}

/// Upper and lower divergence budgets `d1 ≥ R_α(θ‖ν)` and `d2 ≥ R_{α−1}(ν‖θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceBudget {
    d1: ExtReal,
    d2: ExtReal,
}

impl DivergenceBudget {
    pub fn new(d1: impl Into<ExtReal>, d2: impl Into<ExtReal>) -> Result<Self> {
        let (d1, d2) = (d1.into(), d2.into());
        if d1 < ExtReal::ZERO || d2 < ExtReal::ZERO {
            return Err(invalid("budget", format!("divergence budgets must be >= 0, got ({d1}, {d2})")));
        }
        Ok(DivergenceBudget { d1, d2 })
    }

    /// The same budget on both sides.
    pub fn symmetric(d: impl Into<ExtReal>) -> Result<Self> {
        let d = d.into();
        Self::new(d, d)
    }

    pub fn d1(&self) -> ExtReal {
        self.d1
    }

    pub fn d2(&self) -> ExtReal {
        self.d2
    }

    /// Multiplies both budgets by `n`, turning per-coordinate budgets of a
    /// product measure into a budget for the whole product.
    pub fn scaled(&self, n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(invalid("n", format!("scale must be positive, got {n}")));
        }
        Ok(DivergenceBudget {
            d1: self.d1 * n,
            d2: self.d2 * n,
        })
    }
}

/// `(1/n) Σᵢ R_α(θᵢ‖ν₁)` for the marginal divergences of a product measure.
pub fn renyi_product_average(terms: &[ExtReal]) -> Result<ExtReal> {
    if terms.is_empty() {
        return Err(Error::Empty("divergence terms"));
    }
    if terms.iter().any(|t| *t < ExtReal::ZERO) {
        return Err(invalid("terms", "divergences must be nonnegative"));
    }
    if terms.iter().any(|t| t.is_pos_infinite()) {
        return Ok(ExtReal::INFINITY);
    }
    let s: f64 = terms.iter().map(|t| t.value()).sum();
    Ok(ExtReal::from_f64(s / terms.len() as f64))
}

/// Rényi divergence between Wiener measure and Brownian motion with
/// constant drift `μ` on `[0, 1]`: `μ²/2` in either direction and for every
/// order.
pub fn renyi_bm_drift(mu: f64) -> f64 {
    0.5 * mu * mu
}

/// Certified upper bound on `R_α` (either direction) between Wiener measure
/// and the law of `dX = m(X)dt + dB` whenever `|m| ≤ drift_bound`, on a
/// horizon `t`.
pub fn sde_drift_budget(drift_bound: f64, horizon: f64) -> Result<f64> {
    if !(drift_bound >= 0.0 && drift_bound.is_finite()) {
        return Err(invalid("drift_bound", format!("must be >= 0, got {drift_bound}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("horizon", format!("must be positive, got {horizon}")));
    }
    Ok(renyi_bm_drift(drift_bound) * horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[f64]) -> FiniteMeasure {
        FiniteMeasure::from_probs_unlabeled(p).unwrap()
    }

    // Direct linear-domain summation, independent of the log-domain path.
    fn renyi_oracle(nu: &[f64], theta: &[f64], alpha: f64) -> f64 {
        let s: f64 = nu
            .iter()
            .zip(theta)
            .filter(|(a, b)| **a > 0.0 && **b > 0.0)
            .map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha))
            .sum();
        s.ln() / (alpha * (alpha - 1.0))
    }

    #[test]
    fn discrete_examples() {
        let a = m(&[0.5, 0.5]);
        assert_eq!(renyi_discrete(&a, &a, 2.0).unwrap(), ExtReal::ZERO);
        let b = m(&[0.25, 0.75]);
        let v = renyi_discrete(&a, &b, 2.0).unwrap().value();
        assert!((v - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((v - renyi_oracle(&[0.5, 0.5], &[0.25, 0.75], 2.0)).abs() < 1e-15);
        assert!((v - 0.143_841).abs() < 1e-6);
        let singular = renyi_discrete(&m(&[1.0, 0.0]), &m(&[0.0, 1.0]), 0.5).unwrap();
        assert!(singular.is_pos_infinite());
    }

    #[test]
    fn discrete_order_checks() {
        let a = m(&[0.5, 0.5]);
        assert!(matches!(renyi_discrete(&a, &a, 1.0), Err(Error::InvalidOrder(_))));
        assert!(renyi_discrete(&a, &a, 1.0 + 1e-9).is_err());
        assert!(renyi_discrete(&a, &a, 1e-9).is_err());
        assert!(renyi_discrete(&a, &a, 1.0 + 1e-4).is_ok());
    }

    #[test]
    fn absolute_continuity_matters_only_above_one() {
        let nu = m(&[0.5, 0.5]);
        let theta = m(&[1.0, 0.0]);
        assert!(renyi_discrete(&nu, &theta, 2.0).unwrap().is_pos_infinite());
        let half = renyi_discrete(&nu, &theta, 0.5).unwrap().value();
        assert!((half - renyi_oracle(&[0.5, 0.5], &[1.0, 0.0], 0.5)).abs() < 1e-15);
    }

    #[test]
    fn negative_orders_use_skew_identity() {
        let nu = m(&[0.2, 0.3, 0.5]);
        let theta = m(&[0.6, 0.1, 0.3]);
        let a = renyi_discrete(&nu, &theta, -1.5).unwrap();
        let b = renyi_discrete(&theta, &nu, 2.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kl_examples() {
        let a = m(&[0.5, 0.5]);
        assert_eq!(kl_discrete(&a, &a).unwrap(), ExtReal::ZERO);
        let v = kl_discrete(&a, &m(&[0.25, 0.75])).unwrap().value();
        assert!((v - (0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln())).abs() < 1e-15);
        assert!(kl_discrete(&a, &m(&[1.0, 0.0])).unwrap().is_pos_infinite());
    }

    #[test]
    fn gaussian_examples() {
        let s = GaussianParams::standard();
        for alpha in [-2.0, 0.3, 1.5, 2.0, 7.0] {
            assert_eq!(renyi_gaussian(s, s, alpha).unwrap().value(), 0.0);
        }
        let t = GaussianParams::new(1.0, 1.0).unwrap();
        assert!((renyi_gaussian(t, s, 2.0).unwrap().value() - 0.5).abs() < 1e-15);
        let wide = GaussianParams::new(0.0, 4.0).unwrap();
        assert!(renyi_gaussian(wide, s, 2.0).unwrap().is_pos_infinite());
        assert!(GaussianParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn poisson_series_matches_closed_form() {
        // Σ_k θ(k)^α ν(k)^{1−α} = exp(a^α b^{1−α} − αa − (1−α)b)
        let closed = |a: f64, b: f64, alpha: f64| {
            (a.powf(alpha) * b.powf(1.0 - alpha) - alpha * a - (1.0 - alpha) * b) / (alpha * (alpha - 1.0))
        };
        for &(a, b) in &[(1.1, 1.0), (1.0, 1.1), (3.0, 0.5), (25.0, 20.0)] {
            for alpha in [0.4, 1.5, 2.0, 3.0, 10.0] {
                let got = renyi_poisson(PoissonParams::new(a).unwrap(), PoissonParams::new(b).unwrap(), alpha).unwrap();
                let want = closed(a, b, alpha);
                assert!((got.value() - want).abs() < 1e-12 * want.max(1.0), "a={a} b={b} α={alpha}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn product_average() {
        let r = ExtReal::from(0.3);
        assert_eq!(renyi_product_average(&[r, r, r]).unwrap(), r);
        assert_eq!(renyi_product_average(&[r]).unwrap(), r);
        assert!(renyi_product_average(&[r, ExtReal::INFINITY]).unwrap().is_pos_infinite());
        assert!(renyi_product_average(&[]).is_err());
    }

    #[test]
    fn product_average_matches_explicit_product_space() {
        let nu1 = m(&[0.3, 0.7]);
        let th_a = m(&[0.6, 0.4]);
        let th_b = m(&[0.1, 0.9]);
        let alpha = 2.5;
        let prod = |x: &FiniteMeasure, y: &FiniteMeasure| {
            let (px, py) = (x.probs(), y.probs());
            m(&[px[0] * py[0], px[0] * py[1], px[1] * py[0], px[1] * py[1]])
        };
        let joint = renyi_discrete(&prod(&th_a, &th_b), &prod(&nu1, &nu1), alpha).unwrap().value();
        let avg = renyi_product_average(&[
            renyi_discrete(&th_a, &nu1, alpha).unwrap(),
            renyi_discrete(&th_b, &nu1, alpha).unwrap(),
        ])
        .unwrap()
        .value();
        assert!((avg - joint / 2.0).abs() < 1e-12);
    }

    #[test]
    fn drift_constants() {
        assert_eq!(renyi_bm_drift(0.0), 0.0);
        assert!((renyi_bm_drift(0.1) - 0.005).abs() < 1e-18);
        assert_eq!(renyi_bm_drift(-0.3), renyi_bm_drift(0.3));
        assert!((renyi_bm_drift(0.3) - 0.045).abs() < 1e-16);
        assert!((sde_drift_budget(0.1, 2.0).unwrap() - 0.01).abs() < 1e-17);
    }

    #[test]
    fn budget_validation() {
        assert!(DivergenceBudget::new(-0.1, 0.0).is_err());
        let b = DivergenceBudget::new(0.01, ExtReal::INFINITY).unwrap().scaled(50.0).unwrap();
        assert!((b.d1().value() - 0.5).abs() < 1e-15);
        assert!(b.d2().is_pos_infinite());
    }
}
