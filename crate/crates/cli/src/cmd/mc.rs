use clap::Subcommand;
use serde_json::json;

use renyi_robust::applications::{bm_exceedance_drift, laplace_h_drift, laplace_h_wiener, QueueModel};
use renyi_robust::montecarlo::{
    estimate_bm_exceedance, estimate_laplace_h, girsanov_renyi_estimate, simulate_queue_overflow_prob, PathGrid,
    PoissonArrivals,
};
use renyi_robust::renyi::{renyi_bm_drift, sde_drift_budget};
use renyi_robust::EstimateWithCI;

use super::ctx;
use crate::input;
use crate::output::{jnum, num, pretty_pairs, Format, Outcome, Report};
use crate::Context;

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// P(sup_{t≤T} B_t + μt > K) by path simulation.
    BmMax(BmMaxArgs),
    /// R_α of an SDE law against Wiener measure via the Girsanov density.
    Girsanov(GirsanovArgs),
    /// Overflow probability of the slotted queue with Poisson arrivals.
    Queue(QueueArgs),
    /// Laplace transform of the argmax time of B_s + μs on [0, t].
    Argmax(ArgmaxArgs),
}

#[derive(Debug, clap::Args)]
pub struct BmMaxArgs {
    #[arg(long = "K")]
    level: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 4096)]
    steps: usize,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Skip the Brownian-bridge crossing correction between grid points.
    #[arg(long)]
    no_bridge: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DriftKind {
    /// m(x) = μ
    Constant,
    /// m(x) = μ tanh(x)
    Tanh,
}

#[derive(Debug, clap::Args)]
pub struct GirsanovArgs {
    #[arg(long, value_enum, default_value_t = DriftKind::Constant)]
    drift: DriftKind,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 256)]
    steps: usize,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
}

#[derive(Debug, clap::Args)]
pub struct QueueArgs {
    #[arg(long = "C")]
    capacity: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
}

#[derive(Debug, clap::Args)]
pub struct ArgmaxArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    mu: f64,
    /// Comma-separated transform rates γ.
    #[arg(long, default_value = "1,2,10")]
    gamma: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 4096)]
    steps: usize,
}

fn estimate_json(e: &EstimateWithCI) -> serde_json::Value {
    serde_json::to_value(e).expect("serialisable estimate")
}

fn with_reference(label: &str, e: &EstimateWithCI, reference: f64, pass: bool) -> Outcome {
    let z = e.z_score(reference);
    Outcome {
        report: Report {
            json: json!({ "estimate": estimate_json(e), label: jnum(reference), "z": jnum(z) }),
            csv: format!(
                "mean,se,ci_lo,ci_hi,n,{label},z\n{},{},{},{},{},{},{}",
                num(e.mean),
                num(e.std_error),
                num(e.ci95.0),
                num(e.ci95.1),
                e.n_samples,
                num(reference),
                num(z)
            ),
            pretty: pretty_pairs(&[
                ("estimate", format!("{} ± {}", num(e.mean), num(1.96 * e.std_error))),
                (label, num(reference)),
                ("z", format!("{z:.3}")),
            ]),
            default_format: Format::Json,
        },
        pass,
    }
}

pub fn run(c: &McCommand, cx: &Context) -> Result<Outcome, String> {
    match c {
        McCommand::BmMax(a) => {
            let grid = PathGrid::new(a.steps, a.horizon).map_err(ctx("--steps/--horizon"))?;
            let e = estimate_bm_exceedance(a.level, a.mu, &grid, !a.no_bridge, a.paths, cx.seed, cx.exec)
                .map_err(ctx("bm-max"))?;
            // Brownian scaling maps the horizon back to 1.
            let s = a.horizon.sqrt();
            let exact = bm_exceedance_drift(a.level / s, a.mu * s);
            Ok(with_reference("exact", &e, exact, true))
        }
        McCommand::Girsanov(a) => {
            let grid = PathGrid::new(a.steps, a.horizon).map_err(ctx("--steps/--horizon"))?;
            let mu = a.mu;
            let bound = mu.abs();
            let e = match a.drift {
                DriftKind::Constant => girsanov_renyi_estimate(move |_| mu, bound, a.alpha, a.paths, &grid, cx.seed, cx.exec),
                DriftKind::Tanh => {
                    girsanov_renyi_estimate(move |x: f64| mu * x.tanh(), bound, a.alpha, a.paths, &grid, cx.seed, cx.exec)
                }
            }
            .map_err(ctx("girsanov"))?;
            let budget = sde_drift_budget(bound, a.horizon).map_err(ctx("--mu"))?;
            debug_assert!((budget - renyi_bm_drift(bound) * a.horizon).abs() <= 1e-15 * budget.max(1.0));
            let pass = e.mean <= budget + 3.0 * e.std_error;
            if !pass {
                eprintln!("estimate {} exceeds the drift budget {budget} by more than 3 SE", e.mean);
            }
            Ok(with_reference("budget", &e, budget, pass))
        }
        McCommand::Queue(a) => {
            let model = QueueModel::new(a.capacity, a.b, a.n).map_err(ctx("--C/--b/--n"))?;
            if !(a.rate >= 0.0 && a.rate.is_finite()) {
                return Err("--rate: must be a finite non-negative number".into());
            }
            let e = simulate_queue_overflow_prob(&PoissonArrivals { rate: a.rate }, &model, a.reps, cx.seed, cx.exec)
                .map_err(ctx("--reps"))?;
            Ok(Outcome {
                report: Report {
                    json: json!({ "estimate": estimate_json(&e) }),
                    csv: format!(
                        "mean,se,ci_lo,ci_hi,n\n{},{},{},{},{}",
                        num(e.mean),
                        num(e.std_error),
                        num(e.ci95.0),
                        num(e.ci95.1),
                        e.n_samples
                    ),
                    pretty: format!("{} ± {}", num(e.mean), num(1.96 * e.std_error)),
                    default_format: Format::Json,
                },
                pass: true,
            })
        }
        McCommand::Argmax(a) => {
            let rates = input::reals("--gamma", &a.gamma)?;
            let grid = PathGrid::new(a.steps, a.t).map_err(ctx("--steps/--t"))?;
            let est = estimate_laplace_h(a.mu, &rates, &grid, a.paths, cx.seed, cx.exec).map_err(ctx("argmax"))?;
            let mut rows = Vec::new();
            let mut csv = String::from("gamma,mean,se,closed_form,z\n");
            let mut pretty = String::new();
            for (&g, e) in rates.iter().zip(&est) {
                let exact = if a.mu == 0.0 {
                    laplace_h_wiener(g, a.t).map_err(ctx("--gamma"))?
                } else {
                    laplace_h_drift(g, a.t, a.mu).map_err(ctx("--gamma"))?.value
                };
                let z = e.z_score(exact);
                rows.push(json!({ "gamma": g, "estimate": estimate_json(e), "closed_form": exact, "z": jnum(z) }));
                csv.push_str(&format!("{},{},{},{},{}\n", num(g), num(e.mean), num(e.std_error), num(exact), num(z)));
                pretty.push_str(&format!(
                    "γ = {:<8} {} ± {}   closed form {}\n",
                    num(g),
                    num(e.mean),
                    num(1.96 * e.std_error),
                    num(exact)
                ));
            }
            Ok(Outcome {
                report: Report {
                    json: json!({ "mu": a.mu, "t": a.t, "rows": rows }),
                    csv,
                    pretty,
                    default_format: Format::Json,
                },
                pass: true,
            })
        }
    }
}
