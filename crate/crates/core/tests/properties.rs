use proptest::prelude::*;

use renyi_robust::applications::{
    alpha_grid, bm_bound_curves, gaussian_rs_sides, laplace_h_wiener, lindley_max_formula, lindley_step,
    overflow_decay_rate, poisson_rate_ell, QueueModel, RateBranch,
};
use renyi_robust::bounds::{event_bounds, rs_lower, rs_upper, Scale};
use renyi_robust::measure::{exp_tilt, expectation, risk_sensitive};
use renyi_robust::renyi::{kl_discrete, renyi_discrete, renyi_gaussian, DivergenceBudget, GaussianParams};
use renyi_robust::specfun::{convolve_at, erfc, log_bessel_i0, minimize_scalar, Bracket};
use renyi_robust::variational::{inf_identity, sup_identity, OracleConfig};
use renyi_robust::{BoundedFunction, Execution, ExtReal, FiniteMeasure, OrderParams};

fn measure(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = FiniteMeasure> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        FiniteMeasure::from_probs_unlabeled(&w.iter().map(|x| x / s).collect::<Vec<_>>()).unwrap()
    })
}

fn pair(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (FiniteMeasure, FiniteMeasure)> {
    n.prop_flat_map(|k| (measure(k..=k), measure(k..=k)))
}

fn with_function(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (FiniteMeasure, BoundedFunction)> {
    n.prop_flat_map(|k| {
        (
            measure(k..=k),
            prop::collection::vec(-3.0f64..3.0, k).prop_map(|v| BoundedFunction::new(v).unwrap()),
        )
    })
}

fn product(m: &FiniteMeasure, n: usize) -> FiniteMeasure {
    let mut w = vec![0.0];
    for _ in 0..n {
        w = w.iter().flat_map(|a| m.log_weights().iter().map(move |b| a + b)).collect();
    }
    FiniteMeasure::from_log_weights(w).unwrap()
}

// ---------------------------------------------------------------- specfun

proptest! {
    #[test]
    fn erfc_reflection(x in -10.0f64..10.0) {
        prop_assert!((erfc(-x) - (2.0 - erfc(x))).abs() <= 1e-12);
    }

    #[test]
    fn erfc_decreasing(x in -5.0f64..10.0, dx in 1e-3f64..1.0) {
        prop_assert!(erfc(x + dx) < erfc(x));
        prop_assert!(erfc(x) > 0.0 && erfc(x) < 2.0);
    }

    #[test]
    fn log_i0_monotone_convex(x in 0.0f64..400.0) {
        let h = 1e-2;
        let (a, b, c) = (log_bessel_i0(x).unwrap(), log_bessel_i0(x + h).unwrap(), log_bessel_i0(x + 2.0 * h).unwrap());
        prop_assert!(b >= a);
        prop_assert!(c - 2.0 * b + a >= -1e-8);
    }

    #[test]
    fn minimizer_ignores_constant_shift(center in 0.5f64..4.5, shift in -50.0f64..50.0) {
        let br = Bracket::new(0.0, 5.0).unwrap();
        let tol = 1e-6;
        let a = minimize_scalar(|x| (x - center).powi(2), br, tol).unwrap();
        let b = minimize_scalar(|x| (x - center).powi(2) + shift, br, tol).unwrap();
        prop_assert!((a.argmin - b.argmin).abs() <= tol);
        prop_assert!((b.value - a.value - shift).abs() <= 1e-11);
    }

    #[test]
    fn convolution_commutes(r1 in 0.1f64..3.0, r2 in 0.1f64..3.0, t in 0.2f64..3.0) {
        let f = move |s: f64| (-r1 * s).exp() / s.sqrt();
        let g = move |s: f64| (-r2 * s).exp();
        let fg = convolve_at(f, g, t, 64).unwrap();
        let gf = convolve_at(g, f, t, 64).unwrap();
        prop_assert!((fg.value - gf.value).abs() <= fg.error_estimate.max(gf.error_estimate) + 1e-13);
    }
}

// ---------------------------------------------------------------- measures

proptest! {
    #[test]
    fn risk_sensitive_translation((nu, g) in with_function(1..=6), beta in -5.0f64..5.0, c in -10.0f64..10.0) {
        prop_assume!(beta.abs() > 1e-3);
        let a = risk_sensitive(&nu, &g, beta).unwrap();
        let b = risk_sensitive(&nu, &g.shifted(c), beta).unwrap();
        prop_assert!((b - a - c).abs() <= 1e-12);
    }

    #[test]
    fn risk_sensitive_between_extremes((nu, g) in with_function(1..=6), beta in -20.0f64..20.0) {
        prop_assume!(beta.abs() > 1e-3);
        let v = risk_sensitive(&nu, &g, beta).unwrap();
        prop_assert!(v >= g.min() - 1e-12 && v <= g.max() + 1e-12);
    }

    #[test]
    fn risk_sensitive_nondecreasing_in_beta((nu, g) in with_function(2..=6)) {
        let betas = [-4.0, -2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0, 4.0];
        let vals: Vec<f64> = betas.iter().map(|b| risk_sensitive(&nu, &g, *b).unwrap()).collect();
        for w in vals.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn risk_sensitive_small_beta_limit((nu, g) in with_function(2..=6)) {
        let e = expectation(&nu, &g).unwrap();
        for beta in [1e-6, -1e-6] {
            prop_assert!((risk_sensitive(&nu, &g, beta).unwrap() - e).abs() <= 1e-4);
        }
    }

    #[test]
    fn tilt_round_trip((nu, g) in with_function(1..=6), s in -5.0f64..5.0) {
        let back = exp_tilt(&exp_tilt(&nu, &g, s).unwrap(), &g, -s).unwrap();
        prop_assert!(back.max_atom_distance(&nu).unwrap() <= 1e-12);
    }
}

// ---------------------------------------------------------------- divergences

proptest! {
    #[test]
    fn skew_symmetry((nu, theta) in pair(2..=6), alpha in 0.01f64..0.99) {
        let a = renyi_discrete(&nu, &theta, alpha).unwrap().value();
        let b = renyi_discrete(&theta, &nu, 1.0 - alpha).unwrap().value();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn scaled_divergence_nondecreasing((nu, theta) in pair(2..=6)) {
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=50 {
            let a = 0.1 * k as f64;
            if (a - 1.0).abs() < 1e-9 {
                continue;
            }
            let v = a * renyi_discrete(&nu, &theta, a).unwrap().value();
            prop_assert!(v >= prev - 1e-12, "alpha {a}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn kl_limit((nu, theta) in pair(2..=6)) {
        let kl = kl_discrete(&nu, &theta).unwrap().value();
        for a in [1.0 - 1e-4, 1.0 + 1e-4] {
            prop_assert!((renyi_discrete(&nu, &theta, a).unwrap().value() - kl).abs() <= 1e-3);
        }
    }

    #[test]
    fn nonnegative_and_zero_only_on_diagonal((nu, theta) in pair(2..=6)) {
        for a in [0.5, 2.0, 3.0] {
            let d = renyi_discrete(&nu, &theta, a).unwrap().value();
            prop_assert!(d >= 0.0);
            prop_assert_eq!(renyi_discrete(&nu, &nu, a).unwrap().value(), 0.0);
            if nu.max_atom_distance(&theta).unwrap() > 1e-10 {
                prop_assert!(d > 0.0);
            }
        }
    }

    #[test]
    fn additive_on_products((nu, theta) in pair(2..=4), n in 1usize..=3, a in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let one = renyi_discrete(&nu, &theta, a).unwrap().value();
        let many = renyi_discrete(&product(&nu, n), &product(&theta, n), a).unwrap().value();
        prop_assert!((many - n as f64 * one).abs() <= 1e-10);
    }

    #[test]
    fn gaussian_matches_quadrature(
        m1 in -2.0f64..2.0, v1 in 0.3f64..3.0, m2 in -2.0f64..2.0, v2 in 0.3f64..3.0,
        alpha in prop::sample::select(vec![1.5, 2.0, 3.0]),
    ) {
        let s_alpha = alpha * v2 + (1.0 - alpha) * v1;
        prop_assume!(s_alpha >= 0.1);
        let th = GaussianParams::new(m1, v1).unwrap();
        let nu = GaussianParams::new(m2, v2).unwrap();
        // trapezoid; the integrand is a Gaussian bump that can sit far out when σ_α² is small
        let h = 5e-3;
        let mut sum = 0.0;
        let mut x = -400.0;
        while x <= 400.0 {
            sum += (alpha * th.log_density(x) + (1.0 - alpha) * nu.log_density(x)).exp();
            x += h;
        }
        let quad = (sum * h).ln() / (alpha * (alpha - 1.0));
        let closed = renyi_gaussian(th, nu, alpha).unwrap().value();
        prop_assert!((closed - quad).abs() <= 1e-6, "{closed} vs {quad}");
    }
}

// ---------------------------------------------------------------- identities

fn orders() -> impl Strategy<Value = OrderParams> {
    prop::sample::select(vec![(-2.0, -1.0), (-1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (0.5, 1.5)])
        .prop_map(|(b, g)| OrderParams::new(b, g).unwrap())
}

fn small_oracle() -> OracleConfig {
    OracleConfig {
        samples: 2_000,
        ..OracleConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identities_hold_at_tilt((nu, g) in with_function(2..=6), p in orders()) {
        let i = inf_identity(&nu, &g, p, &small_oracle()).unwrap();
        let s = sup_identity(&nu, &g, p, &small_oracle()).unwrap();
        prop_assert!(i.equality_gap() <= 1e-9 && s.equality_gap() <= 1e-9);
        prop_assert!(i.certify().dominance && s.certify().dominance);
    }

    #[test]
    fn forms_are_consistent((nu, g) in with_function(2..=6), alpha in prop::sample::select(vec![1.5, 2.0, 3.0, 5.0])) {
        // single-order form equals the two-exponent form with (α−1, α)
        let single = inf_identity(&nu, &g, OrderParams::from_alpha(alpha).unwrap(), &small_oracle()).unwrap();
        prop_assert!((single.lhs - risk_sensitive(&nu, &g, alpha - 1.0).unwrap()).abs() <= 1e-12);
        // (β, γ) on g equals the single-order form on (γ−β)g with α = γ/(γ−β), rescaled
        let p = OrderParams::new(1.0, 3.0).unwrap();
        let two = inf_identity(&nu, &g, p, &small_oracle()).unwrap();
        let a = p.divergence_order();
        let scaled = inf_identity(&nu, &g.scaled(p.spread()), OrderParams::from_alpha(a).unwrap(), &small_oracle()).unwrap();
        prop_assert!((two.lhs - scaled.lhs / p.spread()).abs() <= 1e-12);
        prop_assert!((two.rhs_at_optimizer.value() - scaled.rhs_at_optimizer.value() / p.spread()).abs() <= 1e-12);
    }
}

// ---------------------------------------------------------------- bounds

proptest! {
    #[test]
    fn event_sandwich((nu, theta) in pair(2..=6), mask in prop::collection::vec(any::<bool>(), 6),
                      alpha in prop::sample::select(vec![2.5, 3.0, 5.0, 10.0])) {
        let event: Vec<bool> = mask[..nu.len()].to_vec();
        prop_assume!(event.iter().any(|b| *b));
        let d1 = renyi_discrete(&theta, &nu, alpha).unwrap();
        let d2 = renyi_discrete(&nu, &theta, alpha - 1.0).unwrap();
        let b = event_bounds(nu.mass_of(&event).unwrap(), DivergenceBudget::new(d1, d2).unwrap(), alpha, Scale::Probability).unwrap();
        prop_assert!(b.contains(theta.mass_of(&event).unwrap(), 1e-12));
    }

    #[test]
    fn functional_sandwich((nu, g) in with_function(2..=6), alpha in prop::sample::select(vec![2.5, 3.0, 5.0, 10.0]), seed in any::<u64>()) {
        let k = nu.len();
        let w: Vec<f64> = (0..k).map(|i| 0.05 + ((seed >> (i * 8)) & 0xff) as f64 / 255.0).collect();
        let s: f64 = w.iter().sum();
        let theta = FiniteMeasure::from_probs_unlabeled(&w.iter().map(|x| x / s).collect::<Vec<_>>()).unwrap();
        let d1 = renyi_discrete(&theta, &nu, alpha).unwrap();
        let d2 = renyi_discrete(&nu, &theta, alpha - 1.0).unwrap();
        let mid = risk_sensitive(&theta, &g, alpha - 1.0).unwrap();
        let up = rs_upper(risk_sensitive(&nu, &g, alpha).unwrap(), d1, alpha).unwrap();
        let lo = rs_lower(risk_sensitive(&nu, &g, alpha - 2.0).unwrap(), d2, alpha).unwrap();
        prop_assert!(lo.value() <= mid + 1e-12 && mid <= up.value() + 1e-12);
    }

    #[test]
    fn bounds_widen_with_budget(p in 1e-9f64..1.0, d1 in 0.0f64..2.0, d2 in 0.0f64..2.0, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0,
                                alpha in 2.1f64..50.0) {
        for scale in [Scale::Log, Scale::Probability] {
            let a = event_bounds(p, DivergenceBudget::new(d1, d2).unwrap(), alpha, scale).unwrap();
            let b = event_bounds(p, DivergenceBudget::new(d1 + e1, d2 + e2).unwrap(), alpha, scale).unwrap();
            prop_assert!(b.lower <= a.lower && b.upper >= a.upper);
        }
    }

    #[test]
    fn scale_consistency(p in 1e-12f64..1.0, d1 in 0.0f64..0.5, d2 in 0.0f64..2.0, alpha in 2.1f64..50.0) {
        let budget = DivergenceBudget::new(d1, d2).unwrap();
        let l = event_bounds(p, budget, alpha, Scale::Log).unwrap();
        let q = event_bounds(p, budget, alpha, Scale::Probability).unwrap();
        prop_assert!(((alpha - 1.0) * l.lower.value()).exp() - q.lower.value() <= 1e-12);
        if !q.vacuous {
            prop_assert!((((alpha - 1.0) * l.upper.value()).exp() - q.upper.value()).abs() <= 1e-12);
        }
    }
}

// ---------------------------------------------------------------- applications

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn decay_rate_matches_grid(cap in 1.05f64..5.0, b in 0.1f64..10.0) {
        let r = overflow_decay_rate(&QueueModel::new(cap, b, 1).unwrap()).unwrap();
        let f = |t: f64| t * poisson_rate_ell(cap + b / t).value();
        // coarse grid locates the basin, fine grid resolves it
        let hi = 60.0f64.max(20.0 * b / (cap - 1.0));
        let mut best = (1e-4, f(1e-4));
        let mut t = 1e-4;
        while t <= hi {
            if f(t) < best.1 { best = (t, f(t)); }
            t += 1e-2;
        }
        let mut t = (best.0 - 1e-2).max(1e-6);
        while t <= best.0 + 1e-2 {
            if f(t) < best.1 { best = (t, f(t)); }
            t += 1e-5;
        }
        let c = if best.0 >= 1.0 { f(1.0) } else { best.1 };
        prop_assert!((r.c - c).abs() <= 1e-4, "{r:?} vs grid {best:?}");
        prop_assert_eq!(r.branch == RateBranch::TStarGeOne, r.t_star >= 1.0);
    }
}

proptest! {
    #[test]
    fn lindley_closed_form(arrivals in prop::collection::vec(0.0f64..6.0, 0..200), cap in 0.5f64..4.0) {
        let arrivals: Vec<f64> = arrivals.iter().map(|x| x.round()).collect();
        let q = arrivals.iter().fold(0.0, |q, x| lindley_step(q, *x, cap));
        prop_assert!((q - lindley_max_formula(&arrivals, cap)).abs() <= 1e-9);
    }

    #[test]
    fn integer_lindley_exact(arrivals in prop::collection::vec(0u32..8, 0..200), cap in 1u32..5) {
        let xs: Vec<f64> = arrivals.iter().map(|x| *x as f64).collect();
        let q = xs.iter().fold(0.0, |q, x| lindley_step(q, *x, cap as f64));
        prop_assert_eq!(q, lindley_max_formula(&xs, cap as f64));
    }

    #[test]
    fn gaussian_sandwich(c in -3.0f64..3.0, alpha in 1.1f64..6.0, m in -2.0f64..2.0, v in 0.2f64..3.0) {
        let (lhs, rhs) = gaussian_rs_sides(c, alpha, GaussianParams::new(m, v).unwrap()).unwrap();
        prop_assert!(lhs <= rhs.value() + 1e-10);
    }

    #[test]
    fn laplace_transform_in_unit_interval_and_decreasing(g in 0.0f64..200.0, dg in 1e-3f64..5.0, t in 0.1f64..5.0) {
        let a = laplace_h_wiener(g, t).unwrap();
        let b = laplace_h_wiener(g + dg, t).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0 && b < a);
    }
}

#[test]
fn curve_sandwich_over_settings() {
    let alphas = alpha_grid(2.05, 100.0, 200).unwrap();
    for k in [2.0, 3.0, 4.0] {
        for mu in [-0.1, -0.05, 0.0, 0.05, 0.1] {
            for scale in [Scale::Probability, Scale::Log] {
                for row in bm_bound_curves(k, mu, &alphas, scale, Execution::Parallel).unwrap() {
                    assert!(row.bound.lower.value() <= row.exact && row.exact <= row.bound.upper.value(), "{k} {mu} {row:?}");
                }
            }
        }
    }
}

#[test]
fn extended_real_convention() {
    assert!(rs_lower(ExtReal::INFINITY, ExtReal::INFINITY, 3.0).unwrap().is_neg_infinite());
}
