//! Special functions and scalar numerics shared by the rest of the crate.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use crate::error::{invalid, Error, Result};
use crate::tolerances::{
    CONVOLUTION_MAX_PANELS, CONVOLUTION_START_PANELS, ERFC_SERIES_CUTOFF, GOLDEN_MAX_ITER,
    LOG_I0_SERIES_CUTOFF, MAX_BRACKET_EXPANSIONS,
};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Complementary error function `2/√π ∫ₓ^∞ e^{-v²} dv`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERFC_SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else {
        (-x * x).exp() * erfcx_cf(x)
    }
}

/// `log erfc(x)`, accurate far into the tail where `erfc` itself underflows.
pub fn log_erfc(x: f64) -> f64 {
    if x < ERFC_SERIES_CUTOFF {
        erfc(x).ln()
    } else {
        -x * x + erfcx_cf(x).ln()
    }
}

// erf(x) = 2/√π e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

// Scaled erfc e^{x²} erfc(x) for x ≥ 2 via the continued fraction
// x + (1/2)/(x + 1/(x + (3/2)/(x + …))), evaluated with modified Lentz.
fn erfcx_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..10_000 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (SQRT_PI * f)
}

/// Natural log of the modified Bessel function `I0(x)` for `x ≥ 0`.
pub fn log_bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("log I0 needs x >= 0, got {x}")));
    }
    if x <= LOG_I0_SERIES_CUTOFF {
        Ok(log_i0_series(x))
    } else {
        Ok(log_i0_asymptotic(x))
    }
}

fn log_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum.ln()
}

// I0(x) ~ e^x / √(2πx) Σ ((2k-1)!!)² / (k! (8x)^k), truncated at the smallest term.
fn log_i0_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (kf * 8.0 * x);
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    x - 0.5 * (2.0 * PI * x).ln() + sum.ln()
}

/// A finite search interval `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("bracket", format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Bracket { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Result of a scalar minimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for a local minimiser of `f` on `bracket`.
///
/// `f` may return `+∞` (treated as "worse than anything finite"); NaN is
/// treated the same way. For a unimodal `f` the returned point is within
/// `tol` of the bracket minimiser, including a minimum sitting on an
/// endpoint.
pub fn minimize_scalar<F>(f: F, bracket: Bracket, tol: f64) -> Result<Minimum>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    let mut iterations = 0;
    while b - a > tol {
        if iterations >= GOLDEN_MAX_ITER {
            return Err(Error::NonConvergence {
                iterations,
                width: b - a,
            });
        }
        iterations += 1;
        let width = b - a;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(d);
        }
        // Below floating-point resolution the interval stops shrinking.
        if b - a >= width {
            return Err(Error::NonConvergence {
                iterations,
                width: b - a,
            });
        }
    }
    let argmin = 0.5 * (a + b);
    let value = eval(argmin);
    if !value.is_finite() {
        return Err(invalid("f", "no finite value found inside the bracket"));
    }
    Ok(Minimum {
        argmin,
        value,
        iterations,
    })
}

/// Like [`minimize_scalar`], but doubles the bracket width while the
/// minimiser sits on the right edge.
pub fn minimize_scalar_expanding<F>(f: F, bracket: Bracket, tol: f64) -> Result<Minimum>
where
    F: Fn(f64) -> f64,
{
    let mut bracket = bracket;
    for _ in 0..=MAX_BRACKET_EXPANSIONS {
        let m = minimize_scalar(&f, bracket, tol)?;
        if m.argmin < bracket.hi - 4.0 * tol {
            return Ok(m);
        }
        bracket = Bracket::new(bracket.lo, bracket.lo + 2.0 * bracket.width())?;
    }
    Err(Error::NonConvergence {
        iterations: MAX_BRACKET_EXPANSIONS,
        width: bracket.width(),
    })
}

/// Tabulated function on strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    abscissae: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(invalid("grid", "abscissae and values differ in length"));
        }
        if abscissae.len() < 2 {
            return Err(invalid("grid", "need at least two points"));
        }
        if abscissae.windows(2).any(|w| !(w[0] < w[1])) || abscissae.iter().any(|x| !x.is_finite()) {
            return Err(invalid("grid", "abscissae must be finite and strictly increasing"));
        }
        Ok(GridFunction { abscissae, values })
    }

    pub fn tabulate<F: Fn(f64) -> f64>(f: F, abscissae: Vec<f64>) -> Result<Self> {
        let values = abscissae.iter().map(|&x| f(x)).collect();
        Self::new(abscissae, values)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation; `None` outside the tabulated range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let xs = &self.abscissae;
        if !(x >= xs[0] && x <= xs[xs.len() - 1]) {
            return None;
        }
        let i = xs.partition_point(|&a| a <= x).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

/// A convolution value with the change observed under the last panel doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convolution {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

// ∫₀ᵗ f(s) g(t-s) ds, split at t/2; s = u² on the left half and s = t - v² on
// the right half, so 1/√s and 1/√(t-s) endpoint singularities become bounded.
// Composite Simpson with `panels` (even) intervals on each half.
fn convolve_simpson<F, G>(f: &F, g: &G, t: f64, panels: usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let w = (0.5 * t).sqrt();
    let h = w / panels as f64;
    // The u = 0 node is nudged inward so 2u·f(u²) evaluates to its finite limit.
    let nudge = h * 1e-9;
    let node = |j: usize| {
        let u = if j == 0 { nudge } else { j as f64 * h };
        let s = u * u;
        2.0 * u * (f(s) * g(t - s) + f(t - s) * g(s))
    };
    let mut sum = node(0) + node(panels);
    for j in 1..panels {
        sum += if j % 2 == 1 { 4.0 } else { 2.0 } * node(j);
    }
    sum * h / 3.0
}

/// `(f ∗ g)(t) = ∫₀ᵗ f(s) g(t − s) ds` for integrands with at worst
/// inverse-square-root singularities at the endpoints.
///
/// Evaluates at `panels`, `2·panels` and `4·panels`; the returned value is
/// the finest one and `error_estimate` the last change. Fails if the second
/// change is not smaller than the first (unless both are at rounding level).
pub fn convolve_at<F, G>(f: F, g: G, t: f64, panels: usize) -> Result<Convolution>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    if panels < 8 {
        return Err(invalid("panels", format!("need at least 8, got {panels}")));
    }
    let panels = panels + panels % 2;
    let i1 = convolve_simpson(&f, &g, t, panels);
    let i2 = convolve_simpson(&f, &g, t, 2 * panels);
    let i4 = convolve_simpson(&f, &g, t, 4 * panels);
    let (c1, c2) = ((i2 - i1).abs(), (i4 - i2).abs());
    let floor = 1e-14 * i4.abs().max(1e-300);
    if !i4.is_finite() || (c2 > c1 && c2 > floor) {
        return Err(Error::RefinementFailed {
            panels: 4 * panels,
            change: c2,
        });
    }
    Ok(Convolution {
        value: i4,
        error_estimate: c2,
        panels: 4 * panels,
    })
}

/// Doubles the panel count until successive estimates differ by less than
/// `rel_tol` relative to the current value.
pub fn convolve_to_tolerance<F, G>(f: F, g: G, t: f64, rel_tol: f64) -> Result<Convolution>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let mut panels = CONVOLUTION_START_PANELS;
    let mut prev = convolve_simpson(&f, &g, t, panels);
    while panels < CONVOLUTION_MAX_PANELS {
        panels *= 2;
        let cur = convolve_simpson(&f, &g, t, panels);
        let change = (cur - prev).abs();
        if !cur.is_finite() {
            break;
        }
        if change <= rel_tol * cur.abs() || change < 1e-300 {
            return Ok(Convolution {
                value: cur,
                error_estimate: change,
                panels,
            });
        }
        prev = cur;
    }
    Err(Error::RefinementFailed {
        panels,
        change: f64::NAN,
    })
}
