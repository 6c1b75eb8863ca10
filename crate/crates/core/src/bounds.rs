//! Robust two-sided bounds under a Rényi divergence budget.
//!
//! For `α > 1`, any `θ` with `R_α(θ‖ν) ≤ d1` and, when `α > 2`,
//! `R_{α−1}(ν‖θ) ≤ d2`:
//!
//! ```text
//! (1/(α−2)) log ∫e^{(α−2)g}dν − d2 ≤ (1/(α−1)) log ∫e^{(α−1)g}dθ ≤ (1/α) log ∫e^{αg}dν + d1
//! ```
//!
//! Taking `g = ∞·1_{Aᶜ}` gives the event form
//! `(1/(α−2)) log ν(A) − d2 ≤ (1/(α−1)) log θ(A) ≤ (1/α) log ν(A) + d1`.
//! The nominal terms are always supplied by the caller.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::extreal::ExtReal;
use crate::renyi::DivergenceBudget;
use crate::specfun::{minimize_scalar, Bracket};
use crate::tolerances::{GOLDEN_TOL, TIGHTEST_GRID_POINTS, TIGHTEST_GRID_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Bounds on `(1/(α−1)) log θ(A)`.
    Log,
    /// Bounds on `θ(A)` itself.
    #[default]
    Probability,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Log => "log",
            Scale::Probability => "probability",
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Scale::Log),
            "probability" | "prob" => Ok(Scale::Probability),
            _ => Err(invalid("scale", format!("expected 'log' or 'probability', got {s:?}"))),
        }
    }
}

/// A lower/upper pair together with the order and budget that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub lower: ExtReal,
    pub upper: ExtReal,
    pub alpha: f64,
    pub budget: DivergenceBudget,
    pub scale: Scale,
    /// The probability-scale upper bound reached 1 and was clamped.
    pub vacuous: bool,
}

/// Column header matching [`BoundResult::csv_row`].
pub const CSV_HEADER: &str = "alpha,lower,upper,exact,scale";

impl BoundResult {
    /// `alpha,lower,upper,exact,scale`; `exact` is left empty when unknown.
    pub fn csv_row(&self, exact: Option<f64>) -> String {
        let mut s = String::new();
        write!(s, "{},{},{},", self.alpha, self.lower, self.upper).unwrap();
        if let Some(e) = exact {
            write!(s, "{}", ExtReal::from_f64(e)).unwrap();
        }
        write!(s, ",{}", self.scale.as_str()).unwrap();
        s
    }

    /// `lower ≤ x ≤ upper`, with `tol` slack on each side.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower.value() <= x + tol && x <= self.upper.value() + tol
    }
}

fn check_alpha(alpha: f64, min: f64) -> Result<()> {
    if !(alpha > min && alpha.is_finite()) {
        return Err(Error::InvalidOrder(alpha));
    }
    Ok(())
}

/// Upper bound `nominal + d1` on `(1/(α−1)) log ∫e^{(α−1)g}dθ`, where
/// `nominal = (1/α) log ∫e^{αg}dν`.
pub fn rs_upper(nominal: impl Into<ExtReal>, d1: ExtReal, alpha: f64) -> Result<ExtReal> {
    check_alpha(alpha, 1.0)?;
    if d1 < ExtReal::ZERO {
        return Err(invalid("d1", "budget must be >= 0"));
    }
    Ok(nominal.into().add_upper(d1))
}

/// Lower bound `nominal − d2` (with `∞ − ∞ = −∞`), where
/// `nominal = (1/(α−2)) log ∫e^{(α−2)g}dν`.
pub fn rs_lower(nominal: impl Into<ExtReal>, d2: ExtReal, alpha: f64) -> Result<ExtReal> {
    check_alpha(alpha, 2.0)?;
    if d2 < ExtReal::ZERO {
        return Err(invalid("d2", "budget must be >= 0"));
    }
    Ok(nominal.into().sub_lower(d2))
}

/// Sandwich on `θ(A)` from the nominal probability `p = ν(A)`.
///
/// For `α ≤ 2` only the upper side is informative; the lower side is then
/// the trivial `−∞` (log scale) or `0` (probability scale).
pub fn event_bounds(p_nominal: f64, budget: DivergenceBudget, alpha: f64, scale: Scale) -> Result<BoundResult> {
    if !(0.0..=1.0).contains(&p_nominal) {
        return Err(invalid("p_nominal", format!("must lie in [0, 1], got {p_nominal}")));
    }
    check_alpha(alpha, 1.0)?;
    let lp = ExtReal::from_f64(p_nominal.ln());
    let upper_log = (lp * (1.0 / alpha)).add_upper(budget.d1());
    let lower_log = if alpha > 2.0 {
        (lp * (1.0 / (alpha - 2.0))).sub_lower(budget.d2())
    } else {
        ExtReal::NEG_INFINITY
    };
    let mut r = BoundResult {
        lower: lower_log,
        upper: upper_log,
        alpha,
        budget,
        scale,
        vacuous: false,
    };
    if scale == Scale::Probability {
        let up = ((alpha - 1.0) * upper_log.value()).exp();
        r.vacuous = up >= 1.0;
        r.upper = ExtReal::from_f64(up.min(1.0));
        r.lower = ExtReal::from_f64(((alpha - 1.0) * lower_log.value()).exp().min(1.0));
    }
    Ok(r)
}

/// Minimises the probability-scale upper bound
/// `exp((α−1)/α · log p + (α−1)·d1(α))` over `α` in `range`.
///
/// Golden-section search is cross-checked against a uniform grid scan; if
/// the grid finds a better value the search is repeated around the best grid
/// cell. Returns `(α*, bound)`.
pub fn tightest_event_upper<D>(p_nominal: f64, d1_of_alpha: D, range: Bracket) -> Result<(f64, f64)>
where
    D: Fn(f64) -> ExtReal,
{
    if !(p_nominal > 0.0 && p_nominal < 1.0) {
        return Err(invalid("p_nominal", format!("must lie in (0, 1), got {p_nominal}")));
    }
    if !(range.lo() > 1.0) {
        return Err(Error::InvalidOrder(range.lo()));
    }
    let lp = p_nominal.ln();
    let h = |a: f64| {
        let d = d1_of_alpha(a);
        if d < ExtReal::ZERO {
            return f64::NAN;
        }
        (a - 1.0) / a * lp + (a - 1.0) * d.value()
    };
    let golden = minimize_scalar(h, range, GOLDEN_TOL)?;

    let n = TIGHTEST_GRID_POINTS;
    let step = range.width() / (n - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..n {
        let v = h(range.lo() + i as f64 * step);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut m = golden;
    if best_v < golden.value - TIGHTEST_GRID_SLACK {
        let lo = range.lo() + best_i.saturating_sub(1) as f64 * step;
        let hi = (range.lo() + (best_i + 1) as f64 * step).min(range.hi());
        m = minimize_scalar(h, Bracket::new(lo, hi)?, GOLDEN_TOL)?;
        if m.value > best_v {
            m.argmin = range.lo() + best_i as f64 * step;
            m.value = best_v;
        }
    }
    Ok((m.argmin, m.value.exp().min(1.0)))
}
