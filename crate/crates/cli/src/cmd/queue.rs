use serde_json::json;

use renyi_robust::applications::{overflow_decay_rate, overflow_sandwich, QueueModel};
use renyi_robust::bounds::Scale;
use renyi_robust::montecarlo::{simulate_queue_overflow_prob, PoissonArrivals};
use renyi_robust::renyi::{renyi_poisson, DivergenceBudget, PoissonParams};
use renyi_robust::ExtReal;

use super::ctx;
use crate::output::{jnum, num, pretty_pairs, Format, Outcome, Report};
use crate::Context;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Service capacity per slot (> 1).
    #[arg(long = "C")]
    capacity: f64,
    /// Scaled overflow level.
    #[arg(long)]
    b: f64,
    /// Horizon in slots.
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Per-slot budget on R_α(θ‖ν); defaults to the Poisson value when --true-rate is given, else 0.
    #[arg(long)]
    d1: Option<f64>,
    /// Per-slot budget on R_{α−1}(ν‖θ); defaults like --d1.
    #[arg(long)]
    d2: Option<f64>,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    /// Poisson rate of the nominal arrivals.
    #[arg(long, default_value_t = 1.0)]
    nominal_rate: f64,
    /// Poisson rate of the true arrivals; its overflow estimate is checked against the sandwich.
    #[arg(long)]
    true_rate: Option<f64>,
    /// Only compute the decay rate.
    #[arg(long)]
    rate_only: bool,
}

pub fn run(a: &Args, cx: &Context) -> Result<Outcome, String> {
    let model = QueueModel::new(a.capacity, a.b, a.n).map_err(ctx("--C/--b/--n"))?;
    let rate = overflow_decay_rate(&model).map_err(ctx("decay rate"))?;
    let rate_json = serde_json::to_value(rate).expect("serialisable rate");
    if a.rate_only {
        return Ok(Outcome {
            report: Report {
                csv: format!("t_star,m_star,c,branch\n{},{},{},{}", num(rate.t_star), num(rate.m_star), num(rate.c), rate_json["branch"].as_str().unwrap_or("")),
                pretty: pretty_pairs(&[
                    ("t*", num(rate.t_star)),
                    ("m*", num(rate.m_star)),
                    ("c", num(rate.c)),
                    ("branch", rate_json["branch"].as_str().unwrap_or("").to_string()),
                ]),
                json: rate_json,
                default_format: Format::Json,
            },
            pass: true,
        });
    }

    let nu = PoissonParams::new(a.nominal_rate).map_err(ctx("--nominal-rate"))?;
    let theta = a.true_rate.map(PoissonParams::new).transpose().map_err(ctx("--true-rate"))?;
    let d1 = match (a.d1, theta) {
        (Some(d), _) => ExtReal::from_f64(d),
        (None, Some(th)) => renyi_poisson(th, nu, a.alpha).map_err(ctx("--alpha"))?,
        (None, None) => ExtReal::ZERO,
    };
    let d2 = match (a.d2, theta) {
        (Some(d), _) => ExtReal::from_f64(d),
        (None, Some(th)) if a.alpha > 2.0 => renyi_poisson(nu, th, a.alpha - 1.0).map_err(ctx("--alpha"))?,
        _ => ExtReal::ZERO,
    };
    let per_slot = DivergenceBudget::new(d1, d2).map_err(ctx("--d1/--d2"))?;

    // common random numbers: the true model reuses the nominal streams
    let nominal = simulate_queue_overflow_prob(&PoissonArrivals { rate: nu.rate() }, &model, a.reps, cx.seed, cx.exec)
        .map_err(ctx("--reps"))?;
    let bounds = overflow_sandwich(nominal.ci95.0, nominal.ci95.1, per_slot, &model, a.alpha, Scale::Probability)
        .map_err(ctx("--alpha"))?;
    let truth = match theta {
        Some(th) => Some(
            simulate_queue_overflow_prob(&PoissonArrivals { rate: th.rate() }, &model, a.reps, cx.seed, cx.exec)
                .map_err(ctx("--reps"))?,
        ),
        None => None,
    };
    let (lo, hi) = (bounds.lower.value(), bounds.upper.value());
    let inside = truth.map(|t| bounds.contains(t.mean, 0.0));
    let inside_with_ci = truth.map(|t| t.ci95.1 >= lo && t.ci95.0 <= hi);
    let pass = inside_with_ci.unwrap_or(true);
    if !pass {
        eprintln!("true-model estimate {:?} lies outside [{lo:e}, {hi:e}]", truth.map(|t| t.mean));
    }

    let json = json!({
        "model": { "C": a.capacity, "b": a.b, "n": a.n },
        "rate": rate_json,
        "large_deviation_estimate": jnum((-(a.n as f64) * rate.c).exp()),
        "alpha": a.alpha,
        "per_slot_budget": per_slot,
        "nominal": nominal,
        "bounds": bounds,
        "truth": truth,
        "inside": inside,
        "inside_with_ci": inside_with_ci,
    });
    let csv = format!(
        "alpha,lower,nominal,upper,truth,inside\n{},{},{},{},{},{}",
        num(a.alpha),
        bounds.lower,
        num(nominal.mean),
        bounds.upper,
        truth.map(|t| num(t.mean)).unwrap_or_default(),
        inside.map(|b| b.to_string()).unwrap_or_default()
    );
    let mut pairs = vec![
        ("c", num(rate.c)),
        ("t*", num(rate.t_star)),
        ("nominal P(A_n)", format!("{} ± {}", num(nominal.mean), num(1.96 * nominal.std_error))),
        ("lower bound", bounds.lower.to_string()),
        ("upper bound", bounds.upper.to_string()),
    ];
    if let Some(t) = truth {
        pairs.push(("true P(A_n)", format!("{} ± {}", num(t.mean), num(1.96 * t.std_error))));
        pairs.push(("inside", inside.unwrap_or(false).to_string()));
    }
    Ok(Outcome {
        report: Report {
            json,
            csv,
            pretty: pretty_pairs(&pairs),
            default_format: Format::Json,
        },
        pass,
    })
}
