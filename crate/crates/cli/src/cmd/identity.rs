use serde_json::json;

use renyi_robust::tolerances::{ORACLE_GRID_STEP, ORACLE_SAMPLES};
use renyi_robust::variational::{check_candidate, inf_identity, sup_identity, IdentityReport, OracleConfig};
use renyi_robust::{FiniteMeasure, OrderParams};

use super::ctx;
use crate::input;
use crate::output::{num, pretty_pairs, Format, Outcome, Report};
use crate::Context;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Inf,
    Sup,
    Both,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Nominal measure ν: `[p1,...]`, `{"labels":[...],"probs":[...]}` or a JSON file.
    #[arg(long)]
    measure: String,
    /// Function values `[g1,...]`, `{"labels":[...],"values":[...]}` or a JSON file.
    #[arg(long)]
    g: String,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Which::Both)]
    direction: Which,
    /// Random simplex points scanned by the oracle (on top of the grid).
    #[arg(long, default_value_t = ORACLE_SAMPLES)]
    oracle_samples: usize,
    /// Step of the regular simplex grid used for supports of size ≤ 3.
    #[arg(long, default_value_t = ORACLE_GRID_STEP)]
    grid_step: f64,
    /// Replace the optimizer by a wrong measure (negative control).
    #[arg(long, hide = true)]
    corrupt_optimizer: bool,
}

// Half of the mass moved onto the lightest atom of θ*.
fn corrupt(theta: &FiniteMeasure) -> FiniteMeasure {
    let p = theta.probs();
    let k = (0..p.len()).min_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap_or(0);
    let q: Vec<f64> = p.iter().enumerate().map(|(i, x)| 0.5 * x + if i == k { 0.5 } else { 0.0 }).collect();
    FiniteMeasure::from_probs(&q, theta.labels().to_vec()).expect("mixture of probability vectors")
}

pub fn run(a: &Args, cx: &Context) -> Result<Outcome, String> {
    let nu = input::measure("--measure", &a.measure)?;
    let g = input::function("--g", &a.g, &nu)?;
    let params = OrderParams::new(a.beta, a.gamma).map_err(ctx("--beta/--gamma"))?;
    if !(a.grid_step > 0.0 && a.grid_step <= 0.5) {
        return Err("--grid-step: must lie in (0, 0.5]".into());
    }
    let oracle = OracleConfig {
        samples: a.oracle_samples,
        grid_step: a.grid_step,
        seed: cx.seed,
        execution: cx.exec,
    };
    let mut reports: Vec<IdentityReport> = Vec::new();
    if a.direction != Which::Sup {
        reports.push(inf_identity(&nu, &g, params, &oracle).map_err(ctx("identity"))?);
    }
    if a.direction != Which::Inf {
        reports.push(sup_identity(&nu, &g, params, &oracle).map_err(ctx("identity"))?);
    }
    if a.corrupt_optimizer {
        for r in &mut reports {
            let bad = corrupt(&r.optimizer);
            r.rhs_at_optimizer = check_candidate(&nu, &g, params, r.direction, &bad).map_err(ctx("identity"))?;
            r.optimizer = bad;
        }
    }

    let mut pass = true;
    let mut items = Vec::new();
    let mut csv = String::from("direction,lhs,rhs_at_optimizer,oracle,equality_gap,dominance_violation,near_optimal_max_distance,pass\n");
    let mut pretty = String::new();
    for r in &reports {
        let cert = r.certify();
        pass &= cert.passed();
        if !cert.passed() {
            let culprit = if cert.equality { r.oracle_extremizer.as_ref().unwrap_or(&r.optimizer) } else { &r.optimizer };
            eprintln!(
                "certificate failed ({:?}): equality gap {:e}, dominance violation {:e}, violating θ = {}",
                r.direction,
                r.equality_gap(),
                r.dominance_violation(),
                serde_json::to_string(culprit).unwrap_or_default()
            );
        }
        let mut v = serde_json::to_value(r).expect("serialisable report");
        v["certificate"] = serde_json::to_value(cert).expect("serialisable certificate");
        v["equality_gap"] = crate::output::jnum(r.equality_gap());
        v["dominance_violation"] = crate::output::jnum(r.dominance_violation());
        items.push(v);
        let dir = format!("{:?}", r.direction).to_lowercase();
        csv.push_str(&format!(
            "{dir},{},{},{},{},{},{},{}\n",
            num(r.lhs),
            r.rhs_at_optimizer,
            r.oracle_min_or_max,
            num(r.equality_gap()),
            num(r.dominance_violation()),
            num(r.near_optimal_max_distance),
            cert.passed()
        ));
        pretty.push_str(&format!("[{dir}]\n"));
        pretty.push_str(&pretty_pairs(&[
            ("lhs", num(r.lhs)),
            ("rhs at optimizer", r.rhs_at_optimizer.to_string()),
            ("oracle extremum", r.oracle_min_or_max.to_string()),
            ("oracle points", r.oracle_points.to_string()),
            ("equality", cert.equality.to_string()),
            ("dominance", cert.dominance.to_string()),
            ("uniqueness (sampled)", cert.uniqueness.to_string()),
        ]));
    }
    Ok(Outcome {
        report: Report {
            json: json!({ "pass": pass, "reports": items }),
            csv,
            pretty,
            default_format: Format::Json,
        },
        pass,
    })
}
