use serde_json::json;

use renyi_robust::renyi::{kl_discrete, renyi_discrete, renyi_gaussian};
use renyi_robust::ExtReal;

use super::ctx;
use crate::input;
use crate::output::{jnum, num, Format, Outcome, Report};
use crate::Context;

/// Computes D(first‖second) for two discrete or two Gaussian laws.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Discrete law: `[p1,...]`, `{"labels":[...],"probs":[...]}` or a JSON file. Give twice.
    #[arg(long)]
    discrete: Vec<String>,
    /// Normal law `mean,variance`. Give twice.
    #[arg(long, allow_negative_numbers = true)]
    gaussian: Vec<String>,
    /// Order α (not 0 or 1).
    #[arg(long, allow_negative_numbers = true, required_unless_present = "kl")]
    alpha: Option<f64>,
    /// Relative entropy instead of a Rényi divergence (discrete only).
    #[arg(long, conflicts_with = "alpha")]
    kl: bool,
}

pub fn run(a: &Args, _ctx: &Context) -> Result<Outcome, String> {
    let (kind, value): (&str, ExtReal) = match (a.discrete.len(), a.gaussian.len()) {
        (2, 0) => {
            let p = input::measure("--discrete", &a.discrete[0])?;
            let q = input::measure("--discrete", &a.discrete[1])?;
            let v = match a.alpha {
                Some(alpha) => renyi_discrete(&p, &q, alpha),
                None => kl_discrete(&p, &q),
            };
            ("discrete", v.map_err(ctx("--discrete"))?)
        }
        (0, 2) => {
            let p = input::gaussian("--gaussian", &a.gaussian[0])?;
            let q = input::gaussian("--gaussian", &a.gaussian[1])?;
            let alpha = a.alpha.ok_or("--kl is only available for --discrete")?;
            ("gaussian", renyi_gaussian(p, q, alpha).map_err(ctx("--alpha"))?)
        }
        _ => return Err("give exactly two --discrete or exactly two --gaussian laws".into()),
    };
    let order = a.alpha.map(num).unwrap_or_else(|| "kl".into());
    Ok(Outcome {
        report: Report {
            json: json!({ "kind": kind, "alpha": a.alpha.map(jnum).unwrap_or(json!("kl")), "divergence": jnum(value.value()) }),
            csv: format!("alpha,divergence\n{order},{value}"),
            pretty: value.to_string(),
            default_format: Format::Pretty,
        },
        pass: true,
    })
}
