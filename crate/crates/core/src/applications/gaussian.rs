use crate::error::{invalid, Error, Result};
use crate::extreal::ExtReal;
use crate::renyi::{renyi_gaussian, GaussianParams};

/// Both sides of the robust bound for the linear statistic `c·(X₁+…+Xₙ)/n`
/// with nominal marginal `N(0, 1)` and true marginal `θ₁`:
///
/// ```text
/// lhs = (1/(n(α−1))) log E_θ e^{(α−1)c Sₙ} = c μ₁ + (α−1) c² σ₁² / 2
/// rhs = R_α(θ₁‖N(0,1)) + α c² / 2
/// ```
///
/// Both are per-coordinate, so `n` cancels.
pub fn gaussian_rs_sides(c: f64, alpha: f64, theta1: GaussianParams) -> Result<(f64, ExtReal)> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidOrder(alpha));
    }
    if !c.is_finite() {
        return Err(invalid("c", "must be finite"));
    }
    let lhs = c * theta1.mean() + 0.5 * (alpha - 1.0) * c * c * theta1.variance();
    let div = renyi_gaussian(theta1, GaussianParams::standard(), alpha)?;
    Ok((lhs, div.add_upper(ExtReal::from_f64(0.5 * alpha * c * c))))
}

/// A true marginal at divergence exactly `d` from `N(0, 1)` for which the
/// bound above holds with equality: `θ₁ = N(c, 1)` with `c = √(2d)`.
///
/// For unit-variance normals `R_α(N(c,1)‖N(0,1)) = c²/2` at every order, and
/// `rhs − lhs = (μ₁ − c)²/2` vanishes exactly when `μ₁ = c`.
pub fn tightness_witness(alpha: f64, d: f64) -> Result<(f64, GaussianParams)> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidOrder(alpha));
    }
    if !(d >= 0.0 && d.is_finite()) {
        return Err(invalid("d", format!("must be >= 0, got {d}")));
    }
    let c = (2.0 * d).sqrt();
    Ok((c, GaussianParams::new(c, 1.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_at_shifted_mean() {
        let (l, r) = gaussian_rs_sides(1.0, 2.0, GaussianParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!((l - 1.5).abs() < 1e-15 && (r.value() - 1.5).abs() < 1e-15);
        let (l, r) = gaussian_rs_sides(0.0, 2.0, GaussianParams::standard()).unwrap();
        assert_eq!((l, r.value()), (0.0, 0.0));
        let (l, r) = gaussian_rs_sides(1.0, 2.0, GaussianParams::standard()).unwrap();
        assert!((l - 0.5).abs() < 1e-15 && (r.value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn infinite_divergence_is_vacuous() {
        let (_, r) = gaussian_rs_sides(1.0, 2.0, GaussianParams::new(0.0, 4.0).unwrap()).unwrap();
        assert!(r.is_pos_infinite());
    }

    #[test]
    fn witness_meets_budget_with_equality() {
        for &alpha in &[1.5, 2.0, 3.0, 5.0] {
            for &d in &[0.0, 0.5, 1.0, 2.0] {
                let (c, th) = tightness_witness(alpha, d).unwrap();
                let div = renyi_gaussian(th, GaussianParams::standard(), alpha).unwrap().value();
                assert!((div - d).abs() < 1e-12);
                let (l, r) = gaussian_rs_sides(c, alpha, th).unwrap();
                assert!((l - r.value()).abs() < 1e-12);
            }
        }
    }
}
