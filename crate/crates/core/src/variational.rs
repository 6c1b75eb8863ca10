//! The exponential-integral variational identities on finite spaces.
//!
//! For `β < γ`, both nonzero, and `a = γ/(γ−β)`:
//!
//! ```text
//! (1/β) log ∫e^{βg}dν = inf_θ [ (1/γ) log ∫e^{γg}dθ + R_a(ν‖θ)/(γ−β) ]   θ* ∝ e^{−(γ−β)g} ν
//! (1/γ) log ∫e^{γg}dν = sup_θ [ (1/β) log ∫e^{βg}dθ − R_a(θ‖ν)/(γ−β) ]   θ* ∝ e^{+(γ−β)g} ν
//! ```
//!
//! Each check evaluates both sides at the tilted optimizer and then scans a
//! brute-force oracle over the simplex: a regular grid for supports of size
//! at most three, plus Dirichlet(1, …, 1) draws.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::{fold_blocks, Execution};
use crate::extreal::ExtReal;
use crate::measure::{
    exp_tilt_raw, expectation, max_atom_distance_raw, risk_sensitive_raw, BoundedFunction, FiniteMeasure, OrderParams,
};
use crate::montecarlo::RngSeed;
use crate::renyi::{kl_raw, renyi_raw};
use crate::tolerances::{
    IDENTITY_EQUALITY_TOL, ORACLE_DOMINANCE_SLACK, ORACLE_GRID_MAX_DIM, ORACLE_GRID_STEP, ORACLE_SAMPLES,
    UNIQUENESS_NEIGHBORHOOD, UNIQUENESS_VALUE_SLACK,
};

const ORACLE_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Infimum,
    Supremum,
}

/// Brute-force oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Dirichlet draws in addition to the regular grid.
    pub samples: usize,
    pub grid_step: f64,
    pub seed: RngSeed,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: ORACLE_SAMPLES,
            grid_step: ORACLE_GRID_STEP,
            seed: RngSeed(0),
            execution: Execution::Parallel,
        }
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub direction: Direction,
    pub beta: f64,
    pub gamma: f64,
    pub lhs: f64,
    pub rhs_at_optimizer: ExtReal,
    pub optimizer: FiniteMeasure,
    /// Smallest (infimum) or largest (supremum) right-hand side over the oracle.
    pub oracle_min_or_max: ExtReal,
    /// Grid step when the regular grid was enumerated, otherwise the typical
    /// spacing `S^{-1/(n−1)}` of `S` random draws.
    pub oracle_resolution: f64,
    pub oracle_points: usize,
    /// The oracle candidate achieving `oracle_min_or_max`.
    pub oracle_extremizer: Option<FiniteMeasure>,
    /// Largest max-atom distance from the optimizer among candidates within
    /// the near-optimality slack; `0` when there are none.
    pub near_optimal_max_distance: f64,
    pub near_optimal_count: usize,
}

/// Which certificates an [`IdentityReport`] passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub equality: bool,
    pub dominance: bool,
    pub uniqueness: bool,
}

impl Certificate {
    /// Equality and dominance; uniqueness is only a sampled surrogate and is
    /// reported separately.
    pub fn passed(&self) -> bool {
        self.equality && self.dominance
    }
}

impl IdentityReport {
    /// `|lhs − rhs_at_optimizer|`, infinite if the right side is.
    pub fn equality_gap(&self) -> f64 {
        (self.lhs - self.rhs_at_optimizer.value()).abs()
    }

    /// How far the oracle beats the claimed extremum (positive = violation).
    pub fn dominance_violation(&self) -> f64 {
        let v = self.oracle_min_or_max.value();
        let d = match self.direction {
            Direction::Infimum => self.lhs - v,
            Direction::Supremum => v - self.lhs,
        };
        if d.is_nan() {
            f64::NEG_INFINITY
        } else {
            d
        }
    }

    pub fn certify(&self) -> Certificate {
        Certificate {
            equality: self.equality_gap() <= IDENTITY_EQUALITY_TOL,
            dominance: self.dominance_violation() <= ORACLE_DOMINANCE_SLACK,
            uniqueness: self.near_optimal_max_distance <= UNIQUENESS_NEIGHBORHOOD,
        }
    }
}

// Right-hand side of the chosen identity at θ (given as log-weights).
#[inline]
fn rhs_raw(direction: Direction, log_nu: &[f64], g: &[f64], p: OrderParams, log_theta: &[f64]) -> f64 {
    let a = p.divergence_order();
    match direction {
        Direction::Infimum => {
            let r = renyi_raw(log_nu, log_theta, a);
            if r == f64::INFINITY {
                return f64::INFINITY;
            }
            risk_sensitive_raw(log_theta, g, p.gamma()) + r / p.spread()
        }
        Direction::Supremum => {
            let r = renyi_raw(log_theta, log_nu, a);
            if r == f64::INFINITY {
                return f64::NEG_INFINITY;
            }
            risk_sensitive_raw(log_theta, g, p.beta()) - r / p.spread()
        }
    }
}

/// Right-hand side of the identity evaluated at an arbitrary `θ`.
pub fn check_candidate(
    nu: &FiniteMeasure,
    g: &BoundedFunction,
    params: OrderParams,
    direction: Direction,
    theta: &FiniteMeasure,
) -> Result<ExtReal> {
    g.check_aligned(nu)?;
    nu.check_same_support(theta)?;
    Ok(ExtReal::from_f64(rhs_raw(direction, nu.log_weights(), g.values(), params, theta.log_weights())))
}

/// Checks the infimum identity and its optimizer `θ* ∝ e^{−(γ−β)g}ν`.
pub fn inf_identity(nu: &FiniteMeasure, g: &BoundedFunction, params: OrderParams, oracle: &OracleConfig) -> Result<IdentityReport> {
    identity(nu, g, params, Direction::Infimum, oracle)
}

/// Checks the supremum identity and its optimizer `θ* ∝ e^{(γ−β)g}ν`.
pub fn sup_identity(nu: &FiniteMeasure, g: &BoundedFunction, params: OrderParams, oracle: &OracleConfig) -> Result<IdentityReport> {
    identity(nu, g, params, Direction::Supremum, oracle)
}

fn identity(
    nu: &FiniteMeasure,
    g: &BoundedFunction,
    params: OrderParams,
    direction: Direction,
    oracle: &OracleConfig,
) -> Result<IdentityReport> {
    g.check_aligned(nu)?;
    let (lw, gv) = (nu.log_weights(), g.values());
    let (lhs, tilt) = match direction {
        Direction::Infimum => (risk_sensitive_raw(lw, gv, params.beta()), -params.spread()),
        Direction::Supremum => (risk_sensitive_raw(lw, gv, params.gamma()), params.spread()),
    };
    let mut report = IdentityReport {
        direction,
        beta: params.beta(),
        gamma: params.gamma(),
        lhs,
        rhs_at_optimizer: ExtReal::from_f64(lhs),
        optimizer: nu.clone(),
        oracle_min_or_max: ExtReal::from_f64(lhs),
        oracle_resolution: 0.0,
        oracle_points: 0,
        oracle_extremizer: None,
        near_optimal_max_distance: 0.0,
        near_optimal_count: 0,
    };
    if g.is_constant() {
        // θ* = ν and both sides equal the constant
        report.lhs = g.values()[0];
        report.rhs_at_optimizer = ExtReal::from_f64(report.lhs);
        report.oracle_min_or_max = report.rhs_at_optimizer;
        return Ok(report);
    }
    let opt = exp_tilt_raw(lw, gv, tilt);
    report.rhs_at_optimizer = ExtReal::from_f64(rhs_raw(direction, lw, gv, params, &opt));
    report.optimizer = nu.with_log_weights_unchecked(opt.clone());

    let scan = scan_oracle(lw, oracle, |theta| rhs_raw(direction, lw, gv, params, theta), direction, lhs, &opt);
    report.oracle_min_or_max = ExtReal::from_f64(scan.best_value);
    report.oracle_extremizer = scan.best_point.map(|w| nu.with_log_weights_unchecked(w));
    report.oracle_points = scan.points;
    report.oracle_resolution = scan.resolution;
    report.near_optimal_max_distance = scan.near_distance;
    report.near_optimal_count = scan.near_count;
    Ok(report)
}

struct OracleScan {
    best_value: f64,
    best_point: Option<Vec<f64>>,
    points: usize,
    resolution: f64,
    near_distance: f64,
    near_count: usize,
}

#[derive(Clone)]
struct BlockAcc {
    best_value: f64,
    best_index: usize,
    best_point: Option<Vec<f64>>,
    near_distance: f64,
    near_count: usize,
}

/// Log-weights of the regular simplex grid with spacing `1/k` in dimension `n ≤ 3`.
fn simplex_grid(n: usize, k: usize) -> Vec<Vec<f64>> {
    let kf = k as f64;
    match n {
        1 => vec![vec![0.0]],
        2 => (0..=k).map(|i| vec![(i as f64 / kf).ln(), ((k - i) as f64 / kf).ln()]).collect(),
        3 => {
            let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
            for i in 0..=k {
                for j in 0..=(k - i) {
                    let l = k - i - j;
                    out.push(vec![(i as f64 / kf).ln(), (j as f64 / kf).ln(), (l as f64 / kf).ln()]);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn dirichlet_into(rng: &mut impl Rng, out: &mut [f64]) {
    let mut total = 0.0;
    for x in out.iter_mut() {
        let e: f64 = rng.sample(Exp1);
        *x = e;
        total += e;
    }
    let lt = total.ln();
    for x in out.iter_mut() {
        *x = x.ln() - lt;
    }
}

// Scans grid points then random draws. Block b of the draws uses stream b,
// and blocks are reduced in order with ties going to the lower index, so the
// outcome does not depend on the thread count.
fn scan_oracle<F>(log_nu: &[f64], cfg: &OracleConfig, objective: F, direction: Direction, lhs: f64, opt: &[f64]) -> OracleScan
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let n = log_nu.len();
    let k = (1.0 / cfg.grid_step).round().max(1.0) as usize;
    let grid = if n <= ORACLE_GRID_MAX_DIM { simplex_grid(n, k) } else { Vec::new() };
    let samples = if n == 1 { 0 } else { cfg.samples };
    let total = grid.len() + samples;
    let sign = match direction {
        Direction::Infimum => 1.0,
        Direction::Supremum => -1.0,
    };
    let better = |a: f64, b: f64| sign * a < sign * b;
    let worst = sign * f64::INFINITY;

    let blocks = fold_blocks(
        cfg.execution,
        total.div_ceil(ORACLE_BLOCK),
        1,
        || BlockAcc {
            best_value: worst,
            best_index: usize::MAX,
            best_point: None,
            near_distance: 0.0,
            near_count: 0,
        },
        |acc, b| {
            let mut rng = cfg.seed.stream(b as u64);
            let mut buf = vec![0.0; n];
            for i in b * ORACLE_BLOCK..((b + 1) * ORACLE_BLOCK).min(total) {
                let theta: &[f64] = if i < grid.len() {
                    &grid[i]
                } else {
                    dirichlet_into(&mut rng, &mut buf);
                    &buf
                };
                let v = objective(theta);
                if v.is_nan() {
                    continue;
                }
                if acc.best_point.is_none() || better(v, acc.best_value) {
                    acc.best_value = v;
                    acc.best_index = i;
                    acc.best_point = Some(theta.to_vec());
                }
                if v.is_finite() && sign * (v - lhs) <= UNIQUENESS_VALUE_SLACK {
                    acc.near_count += 1;
                    acc.near_distance = acc.near_distance.max(max_atom_distance_raw(theta, opt));
                }
            }
        },
    );

    let mut scan = OracleScan {
        best_value: worst,
        best_point: None,
        points: total,
        resolution: if !grid.is_empty() {
            1.0 / k as f64
        } else if samples > 0 {
            (samples as f64).powf(-1.0 / (n as f64 - 1.0))
        } else {
            0.0
        },
        near_distance: 0.0,
        near_count: 0,
    };
    let mut best_index = usize::MAX;
    for acc in blocks {
        if let Some(p) = acc.best_point {
            if scan.best_point.is_none() || better(acc.best_value, scan.best_value) {
                scan.best_value = acc.best_value;
                scan.best_point = Some(p);
                best_index = acc.best_index;
            }
        }
        scan.near_count += acc.near_count;
        scan.near_distance = scan.near_distance.max(acc.near_distance);
    }
    debug_assert!(scan.best_point.is_none() || best_index < total);
    scan
}

/// Gaps of the two relative-entropy limit identities at their tilted optimizers:
///
/// ```text
/// ∫g dν       = inf_θ [ log ∫e^g dθ + R(ν‖θ) ]   at θ ∝ e^{−g}ν
/// log ∫e^g dν = sup_θ [ ∫g dθ − R(θ‖ν) ]         at θ ∝ e^{g}ν
/// ```
pub fn kl_limit_identities(nu: &FiniteMeasure, g: &BoundedFunction) -> Result<(f64, f64)> {
    let mean = expectation(nu, g)?;
    let (lw, gv) = (nu.log_weights(), g.values());
    let lo = exp_tilt_raw(lw, gv, -1.0);
    let inf_side = risk_sensitive_raw(&lo, gv, 1.0) + kl_raw(lw, &lo);
    let hi = exp_tilt_raw(lw, gv, 1.0);
    let hi_mean: f64 = hi.iter().zip(gv).map(|(w, x)| w.exp() * x).sum();
    let sup_side = hi_mean - kl_raw(&hi, lw);
    let target = risk_sensitive_raw(lw, gv, 1.0);
    Ok(((inf_side - mean).abs(), (sup_side - target).abs()))
}

/// Value of the inf-side relative-entropy objective at an arbitrary `θ`.
pub fn kl_inf_objective(nu: &FiniteMeasure, g: &BoundedFunction, theta: &FiniteMeasure) -> Result<ExtReal> {
    g.check_aligned(nu)?;
    nu.check_same_support(theta)?;
    let r = kl_raw(nu.log_weights(), theta.log_weights());
    Ok(ExtReal::from_f64(risk_sensitive_raw(theta.log_weights(), g.values(), 1.0) + r))
}

/// `α R_α(ν‖θ)` at small `α` and its limit `−log θ(ν > 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaZeroCheck {
    pub alpha: f64,
    pub value: ExtReal,
    pub target: ExtReal,
}

impl AlphaZeroCheck {
    pub fn difference(&self) -> f64 {
        if self.value == self.target {
            0.0
        } else {
            (self.value.value() - self.target.value()).abs()
        }
    }
}

pub fn alpha_zero_limit_check(nu: &FiniteMeasure, theta: &FiniteMeasure) -> Result<AlphaZeroCheck> {
    nu.check_same_support(theta)?;
    let alpha = 1e-4;
    let value = alpha * renyi_raw(nu.log_weights(), theta.log_weights(), alpha);
    let support: Vec<bool> = nu.log_weights().iter().map(|w| *w > f64::NEG_INFINITY).collect();
    let mass = theta.mass_of(&support)?;
    Ok(AlphaZeroCheck {
        alpha,
        value: ExtReal::from_f64(value),
        target: ExtReal::from_f64(-mass.ln()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[f64]) -> FiniteMeasure {
        FiniteMeasure::from_probs_unlabeled(p).unwrap()
    }

    fn f(v: &[f64]) -> BoundedFunction {
        BoundedFunction::new(v.to_vec()).unwrap()
    }

    fn small_oracle() -> OracleConfig {
        OracleConfig {
            samples: 20_000,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn two_point_inf_example() {
        let cfg = OracleConfig {
            grid_step: 1e-3,
            ..small_oracle()
        };
        let r = inf_identity(&m(&[0.5, 0.5]), &f(&[0.0, 1.0]), OrderParams::new(1.0, 2.0).unwrap(), &cfg).unwrap();
        let expected = ((1.0 + 1f64.exp()) / 2.0).ln();
        assert!((r.lhs - expected).abs() < 1e-12);
        assert!(r.equality_gap() < 1e-12);
        let best = r.oracle_min_or_max.value();
        assert!(best >= r.lhs - 1e-9 && best - r.lhs < 2e-3);
        assert!(r.certify().passed() && r.certify().uniqueness);
    }

    #[test]
    fn two_point_sup_example() {
        let r = sup_identity(&m(&[0.5, 0.5]), &f(&[0.0, 1.0]), OrderParams::new(1.0, 2.0).unwrap(), &small_oracle()).unwrap();
        assert!((r.lhs - 0.5 * ((1.0 + 2f64.exp()) / 2.0).ln()).abs() < 1e-12);
        assert!(r.equality_gap() < 1e-12);
        assert!(r.certify().passed());
    }

    #[test]
    fn sign_crossing_order_on_four_points() {
        let nu = m(&[0.1, 0.2, 0.3, 0.4]);
        let g = f(&[-1.5, 0.3, 2.0, -0.7]);
        let r = inf_identity(&nu, &g, OrderParams::new(-1.0, 1.0).unwrap(), &small_oracle()).unwrap();
        assert!(r.certify().passed(), "{r:?}");
        let s = sup_identity(&nu, &g, OrderParams::new(-1.0, 1.0).unwrap(), &small_oracle()).unwrap();
        assert!(s.certify().passed(), "{s:?}");
    }

    #[test]
    fn constant_function_is_trivial() {
        let nu = m(&[0.3, 0.7]);
        let r = inf_identity(&nu, &f(&[2.5, 2.5]), OrderParams::new(1.0, 2.0).unwrap(), &small_oracle()).unwrap();
        assert_eq!(r.lhs, 2.5);
        assert_eq!(r.optimizer, nu);
        assert!(r.certify().passed());
    }

    #[test]
    fn corrupted_optimizer_breaks_equality() {
        let nu = m(&[0.5, 0.5]);
        let g = f(&[0.0, 1.0]);
        let p = OrderParams::new(1.0, 2.0).unwrap();
        let mut r = inf_identity(&nu, &g, p, &small_oracle()).unwrap();
        let bad = m(&[0.9, 0.1]);
        r.rhs_at_optimizer = check_candidate(&nu, &g, p, Direction::Infimum, &bad).unwrap();
        r.optimizer = bad;
        assert!(!r.certify().equality);
    }

    #[test]
    fn oracle_is_deterministic_across_execution() {
        let nu = m(&[0.1, 0.2, 0.3, 0.25, 0.15]);
        let g = f(&[1.0, -2.0, 0.5, 1.5, -0.1]);
        let p = OrderParams::new(2.0, 3.0).unwrap();
        let a = sup_identity(&nu, &g, p, &small_oracle()).unwrap();
        let b = sup_identity(
            &nu,
            &g,
            p,
            &OracleConfig {
                execution: Execution::Sequential,
                ..small_oracle()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kl_limits() {
        let (i, s) = kl_limit_identities(&m(&[0.5, 0.5]), &f(&[0.0, 1.0])).unwrap();
        assert!(i < 1e-12 && s < 1e-12);
        let (i, s) = kl_limit_identities(&m(&[0.4, 0.6]), &f(&[3.0, 3.0])).unwrap();
        assert!(i < 1e-12 && s < 1e-12);
    }

    #[test]
    fn alpha_zero_examples() {
        let c = alpha_zero_limit_check(&m(&[1.0, 0.0]), &m(&[0.5, 0.5])).unwrap();
        assert!((c.target.value() - 2f64.ln()).abs() < 1e-15);
        assert!(c.difference() < 1e-3);
        let c = alpha_zero_limit_check(&m(&[0.3, 0.7]), &m(&[0.6, 0.4])).unwrap();
        assert_eq!(c.target.value(), 0.0);
        assert!(c.value.value() <= 1e-3);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(2, 100).len(), 101);
        assert_eq!(simplex_grid(3, 100).len(), 5151);
    }
}
