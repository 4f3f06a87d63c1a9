use crate::io::{read_json, require};
use crate::report::{num, sci, CheckKind, Report};
use crate::{CliError, Ctx, Result};
use metricframe::{LipschitzFamily, MetricSample, NamedFamily};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    /// Sampled frame bounds of a family.
    Bounds,
    /// Bounds of a built-in family on an interval sample.
    Named,
    /// Reconstruction of the logarithmic family.
    Reconstruct,
    /// Bounds for a perturbed frame from Lipschitz constants.
    Stability,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Sample file `{"points", "dist", "base"}`.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    /// Family file `{"values", "remainder"}`.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Built-in family: log(A) or rational(A,B).
    #[arg(long)]
    pub named: Option<String>,
    /// Equally spaced sample `lo:hi:count`.
    #[arg(long)]
    pub interval: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Lipschitz number of the analysis map (stability).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Lipschitz number of the reconstruction map (stability).
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

fn interval_sample(text: &str) -> Result<MetricSample> {
    let bad = || CliError::Input(format!("expected lo:hi:count, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(MetricSample::interval(lo, hi, n)?)
}

fn named_pair(a: &Args) -> Result<(MetricSample, LipschitzFamily, NamedFamily)> {
    let fam: NamedFamily = require(&a.named, "--named")?.parse()?;
    let s = interval_sample(require(&a.interval, "--interval")?)?;
    let f = metricframe::make_named_family(fam, &s, a.terms)?;
    Ok((s, f, fam))
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(format!("metric {:?}", a.op).to_lowercase(), ctx.seed);
    match a.op {
        Op::Bounds | Op::Named => {
            let (s, f) = if a.op == Op::Named {
                let (s, f, _) = named_pair(a)?;
                (s, f)
            } else {
                let s: MetricSample = read_json(require(&a.sample, "--sample")?)?;
                s.validate()?;
                let f: LipschitzFamily = read_json(require(&a.family, "--family")?)?;
                (s, f)
            };
            let b = metricframe::metric_frame_bounds(&s, &f, a.p)?;
            r.summary = format!("({}, {}) over {} pairs, remainder {}", num(b.a), num(b.b), b.pairs, sci(b.remainder));
            r.flag("lower bound positive", CheckKind::Hypothesis, b.is_frame(), None);
            r.data = serde_json::to_value(b).expect("serializes");
        }
        Op::Reconstruct => {
            let (s, f, fam) = named_pair(a)?;
            if !matches!(fam, NamedFamily::Log(_)) {
                return Err(CliError::Input("reconstruct is defined for the log family".into()));
            }
            let tol = ctx.tol_or(1e-12);
            let rep = metricframe::reconstruction_check(&s, &f, metricframe::log_reconstructor, a.p)?;
            r.summary = format!("max deviation {} (value remainder {})", sci(rep.max_deviation), sci(f.value_remainder));
            r.bound(
                "d(S(theta x), x) within the truncation remainder",
                CheckKind::Theorem,
                (rep.max_deviation - f.value_remainder).max(0.0),
                tol,
            );
            r.data = json!({"max_deviation": rep.max_deviation, "reconstructor_lip": rep.reconstructor_lip,
                            "value_remainder": f.value_remainder});
        }
        Op::Stability => {
            let theta = *require(&a.theta, "--theta")?;
            let s = *require(&a.s, "--s")?;
            let (lo, hi) = metricframe::stability_bounds(theta, s, a.alpha, a.gamma)?;
            r.summary = format!("perturbed frame bounds ({}, {})", num(lo), num(hi));
            r.flag("alpha |theta| + gamma <= 1/|S|", CheckKind::Hypothesis, true, None);
            r.data = json!({"a": lo, "b": hi});
        }
    }
    Ok(r)
}
