use serde_json::json;

use renyi_robust::applications::{laplace_h_bounds, laplace_h_drift, laplace_h_wiener, laplace_middle, LaplaceQuery};

use super::ctx;
use crate::output::{jnum, num, pretty_pairs, Format, Outcome, Report};
use crate::Context;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Transform rate γ ≥ 0.
    #[arg(long)]
    gamma: f64,
    /// Horizon.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Drift of B_s + μs.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    mu: f64,
    /// Also report the robust sandwich at this order (> 2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Drift bound used for the sandwich; defaults to |μ|.
    #[arg(long)]
    mu_budget: Option<f64>,
}

pub fn run(a: &Args, _cx: &Context) -> Result<Outcome, String> {
    let value = if a.mu == 0.0 {
        laplace_h_wiener(a.gamma, a.t).map_err(ctx("--gamma/--t"))?
    } else {
        laplace_h_drift(a.gamma, a.t, a.mu).map_err(ctx("--gamma/--t/--mu"))?.value
    };
    let Some(alpha) = a.alpha else {
        return Ok(Outcome {
            report: Report {
                json: json!({ "gamma": a.gamma, "t": a.t, "mu": a.mu, "value": jnum(value) }),
                csv: format!("gamma,t,mu,value\n{},{},{},{}", num(a.gamma), num(a.t), num(a.mu), num(value)),
                pretty: num(value),
                default_format: Format::Pretty,
            },
            pass: true,
        });
    };
    let query = LaplaceQuery::new(a.gamma, a.t, alpha).map_err(ctx("--alpha"))?;
    let budget = a.mu_budget.unwrap_or(a.mu.abs());
    if budget < a.mu.abs() {
        return Err(format!("--mu-budget: {budget} does not cover |μ| = {}", a.mu.abs()));
    }
    let bounds = laplace_h_bounds(query, budget).map_err(ctx("--mu-budget"))?;
    let middle = laplace_middle(query, a.mu).map_err(ctx("--mu"))?;
    let pass = bounds.contains(middle, 1e-9);
    if !pass {
        eprintln!("sandwich violated: {} not in [{}, {}]", middle, bounds.lower, bounds.upper);
    }
    Ok(Outcome {
        report: Report {
            json: json!({
                "gamma": a.gamma, "t": a.t, "mu": a.mu, "value": jnum(value),
                "alpha": alpha, "mu_budget": budget, "bounds": bounds, "middle": jnum(middle), "inside": pass,
            }),
            csv: format!("{}\n{}", renyi_robust::bounds::CSV_HEADER, bounds.csv_row(Some(middle))),
            pretty: pretty_pairs(&[
                ("E e^{-γH}", num(value)),
                ("lower", bounds.lower.to_string()),
                ("middle", num(middle)),
                ("upper", bounds.upper.to_string()),
            ]),
            default_format: Format::Json,
        },
        pass,
    })
}
