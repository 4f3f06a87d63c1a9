use crate::io::{parse_subset, random_subset, read_json, require, show_subset};
use crate::report::{num, CheckKind, Report};
use crate::{Ctx, Result};
use linops::{random_vector, seeded_rng};
use serde_json::json;
use sip::SipJson;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Identity,
    Parseval,
    Lower34,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Pair file `{"p", "omega", "tau"}`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Overrides the exponent stored in the file.
    #[arg(long)]
    pub p: Option<f64>,
    /// 1-based indices of M; sampled per x when absent.
    #[arg(long)]
    pub subset: Option<String>,
    /// Number of sampled vectors x.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let mut j: SipJson = read_json(require(&a.input, "--in")?)?;
    if let Some(p) = a.p {
        j.p = p;
    }
    let pf = j.to_pair()?;
    let fixed = a.subset.as_deref().map(parse_subset).transpose()?;
    let mut rng = seeded_rng(ctx.seed);
    let n = a.samples.max(1);
    let mut r = Report::new(format!("sip {:?}", a.op).to_lowercase(), ctx.seed);
    let m_note = fixed.as_ref().map(|m| format!(", M = {}", show_subset(m))).unwrap_or_default();
    match a.op {
        Op::Identity => {
            let tol = ctx.tol_or(1e-8);
            let mut worst = 0.0f64;
            for _ in 0..n {
                let m = fixed.clone().unwrap_or_else(|| random_subset(&mut rng, pf.len()));
                let x = random_vector(&mut rng, pf.dim());
                worst = worst.max(sip::general_identity_residual(&pf, &m, &x)?);
            }
            r.summary = format!("general identity, p = {}, {n} samples{m_note}", num(j.p));
            r.bound("general identity residual", CheckKind::Theorem, worst, tol);
            r.data = json!({"p": j.p, "samples": n, "max_residual": worst});
        }
        Op::Parseval => {
            let tol = ctx.tol_or(1e-8);
            let mut worst = 0.0f64;
            let mut op_worst = 0.0f64;
            for _ in 0..n {
                let m = fixed.clone().unwrap_or_else(|| random_subset(&mut rng, pf.len()));
                let x = random_vector(&mut rng, pf.dim());
                worst = worst.max(sip::parseval_identity_residual(&pf, &m, &x)?);
                op_worst = op_worst.max(sip::operator_identity_residual(&pf, &m)?);
            }
            r.summary = format!("Parseval identity, p = {}, {n} samples{m_note}", num(j.p));
            r.bound("Parseval identity residual", CheckKind::Theorem, worst, tol);
            r.bound("S_M + S_Mc^2 = S_Mc + S_M^2", CheckKind::Theorem, op_worst, tol);
            r.data = json!({"p": j.p, "samples": n, "max_residual": worst, "max_operator_residual": op_worst});
        }
        Op::Lower34 => {
            let tol = ctx.tol_or(1e-9);
            let (mut held, mut worst) = (0usize, f64::INFINITY);
            for _ in 0..n {
                let m = fixed.clone().unwrap_or_else(|| random_subset(&mut rng, pf.len()));
                let x = random_vector(&mut rng, pf.dim());
                let c = sip::lower_bound_check(&pf, &m, &x)?;
                if c.condition_holds {
                    held += 1;
                    worst = worst.min(c.value - c.threshold);
                }
            }
            r.summary = format!("3/4 lower bound, p = {}, condition held on {held} of {n} samples{m_note}", num(j.p));
            let deficit = if held > 0 { (-worst).max(0.0) } else { 0.0 };
            r.bound("expression >= 0.75 |x|^2 where the condition holds", CheckKind::Theorem, deficit, tol);
            r.data = json!({"p": j.p, "samples": n, "condition_held": held,
                            "min_margin": (held > 0).then_some(worst)});
        }
    }
    Ok(r)
}
