use crate::io::{parse_subset, random_subset, read_json, require, show_subset};
use crate::report::{num, CheckKind, Report};
use crate::{CliError, Ctx, Result};
use hframe::{FrameJson, HilbertFrame, IdentityMode, NamedFrame, PerturbMode};
use linops::{identity_residual, random_vector, seeded_rng};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Bounds,
    Dual,
    Parsevalize,
    Algorithm,
    Identity,
    Dilate,
    Perturb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Quadratic,
    General,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Frame file `{"field", "dim", "vectors": Matrix}`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Built-in frame: mercedes, harmonic:N:M, lines:N, basis-plus-first:D.
    #[arg(long, conflicts_with = "input")]
    pub named: Option<String>,
    /// Write the resulting frame here (dual, parsevalize, dilate).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    /// 1-based indices of the subset M; sampled when absent.
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    /// Perturbed frame for `perturb`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Quadratic)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

pub fn parse_named(s: &str) -> Result<NamedFrame> {
    let parts: Vec<&str> = s.split(':').collect();
    let n = |i: usize| -> Result<usize> {
        parts.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| CliError::Input(format!("bad frame name {s:?}")))
    };
    Ok(match parts[0] {
        "mercedes" => NamedFrame::Mercedes,
        "harmonic" => NamedFrame::Harmonic { n: n(1)?, m: n(2)? },
        "lines" => NamedFrame::Lines(n(1)?),
        "basis-plus-first" => NamedFrame::BasisPlusFirst(n(1)?),
        _ => return Err(CliError::Input(format!("unknown frame {s:?}"))),
    })
}

fn load(a: &Args) -> Result<HilbertFrame> {
    if let Some(name) = &a.named {
        return Ok(hframe::make_named_frame(parse_named(name)?)?);
    }
    let path = require(&a.input, "--in or --named")?;
    Ok(read_json::<FrameJson>(path)?.to_frame()?)
}

fn write_frame(out: &Option<PathBuf>, f: &HilbertFrame) -> Result<()> {
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&FrameJson::from_frame(f)).expect("serializes");
        std::fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let f = load(a)?;
    let mut r = Report::new(format!("hframe {:?}", a.op).to_lowercase(), ctx.seed);
    match a.op {
        Op::Bounds => {
            let tol = ctx.tol_or(1e-9);
            let b = hframe::frame_bounds(&f);
            let tight = b.is_tight(tol);
            let kind = if tight {
                "tight"
            } else if b.is_frame {
                "frame"
            } else {
                "not a frame"
            };
            r.summary = format!("({}, {}) {kind}", num(b.a), num(b.b));
            r.flag("frame operator invertible", CheckKind::Hypothesis, b.is_frame, None);
            r.data = json!({"a": b.a, "b": b.b, "is_frame": b.is_frame, "tight": tight, "tight_tol": tol,
                            "dim": f.dim(), "len": f.len()});
        }
        Op::Dual => {
            let tol = ctx.tol_or(1e-9);
            let d = hframe::canonical_dual(&f)?;
            let res = identity_residual(&(f.synthesis() * d.analysis()));
            r.summary = format!("canonical dual of {} vectors in dimension {}", f.len(), f.dim());
            r.bound("reconstruction sum <h, S^-1 t_n> t_n = h", CheckKind::Theorem, res, tol);
            for n in 0..d.len() {
                r.line(format!("dual_{} = {}", n + 1, super::describe_vector(&d.vector(n))));
            }
            write_frame(&a.out, &d)?;
            r.data = json!({"dual": FrameJson::from_frame(&d)});
        }
        Op::Parsevalize => {
            let tol = ctx.tol_or(1e-9);
            let p = hframe::parsevalize(&f)?;
            let res = identity_residual(&p.frame_operator());
            r.summary = format!("canonical Parseval frame of {} vectors", p.len());
            r.bound("frame operator of S^-1/2 t_n is I", CheckKind::Theorem, res, tol);
            write_frame(&a.out, &p)?;
            r.data = json!({"parseval": FrameJson::from_frame(&p)});
        }
        Op::Algorithm => {
            let tol = ctx.tol_or(1e-10);
            let h = random_vector(&mut seeded_rng(ctx.seed), f.dim());
            let run = hframe::frame_algorithm(&f, &h, a.iters)?;
            let hn = h.norm();
            let mut errors = Vec::with_capacity(a.iters);
            let mut excess = f64::NEG_INFINITY;
            for (k, hk) in run.approximants.iter().enumerate() {
                let err = (hk - &h).norm();
                excess = excess.max(err - run.rho.powi(k as i32 + 1) * hn);
                errors.push(err);
            }
            r.summary = format!("frame algorithm, {} iterations, rate {}", a.iters, num(run.rho));
            r.bound("|h_k - h| <= ((b-a)/(b+a))^k |h|", CheckKind::Theorem, excess.max(0.0), tol);
            if let Some(last) = errors.last() {
                r.line(format!("final error {}", crate::report::sci(*last)));
            }
            r.data = json!({"rho": run.rho, "a": run.bounds.a, "b": run.bounds.b, "h_norm": hn, "errors": errors});
        }
        Op::Identity => {
            let tol = ctx.tol_or(1e-9);
            let parseval = f.is_parseval();
            let mode = if parseval { IdentityMode::Parseval } else { IdentityMode::General };
            let fixed = a.subset.as_deref().map(parse_subset).transpose()?;
            let mut rng = seeded_rng(ctx.seed);
            let (mut gen, mut par, mut low) = (0.0f64, 0.0f64, f64::INFINITY);
            for _ in 0..a.samples.max(1) {
                let m = fixed.clone().unwrap_or_else(|| random_subset(&mut rng, f.len()));
                let h = random_vector(&mut rng, f.dim());
                let res = hframe::frame_identity_residuals(&f, &m, &h, mode)?;
                gen = gen.max(res.general_residual);
                if let (Some(p), Some(v)) = (res.parseval_residual, res.lower_bound_value) {
                    par = par.max(p);
                    low = low.min(v - 0.75 * h.norm_squared());
                }
            }
            r.summary = format!(
                "frame identities on {} samples{}",
                a.samples.max(1),
                fixed.as_ref().map(|m| format!(", M = {}", show_subset(m))).unwrap_or_default()
            );
            r.bound("general frame identity", CheckKind::Theorem, gen, tol);
            if parseval {
                r.bound("Parseval frame identity", CheckKind::Theorem, par, tol);
                r.bound("3/4 lower bound deficit", CheckKind::Theorem, (-low).max(0.0), tol);
            } else {
                r.line("frame is not Parseval: only the general identity applies");
            }
            r.data = json!({"parseval": parseval, "general_residual": gen,
                            "parseval_residual": parseval.then_some(par),
                            "lower_bound_margin": parseval.then_some(low)});
        }
        Op::Dilate => {
            let tol = ctx.tol_or(1e-9);
            let d = hframe::naimark_dilate(&f)?;
            r.summary = format!("dilation to dimension {} ({} added)", d.dim, d.dim - f.dim());
            r.flag("dilated family is a Riesz basis", CheckKind::Theorem, hframe::riesz_basis_check(&d.omega), None);
            let restricted = (&d.projection * d.omega.synthesis()).rows(0, f.dim()).into_owned();
            r.bound("P w_n = t_n", CheckKind::Theorem, linops::max_abs(&(restricted - f.synthesis())), tol);
            if f.is_parseval() {
                let gram = d.omega.analysis() * d.omega.synthesis();
                r.bound("dilation of a Parseval frame is orthonormal", CheckKind::Theorem, identity_residual(&gram), tol);
            }
            write_frame(&a.out, &d.omega)?;
            r.data = json!({"dim": d.dim, "omega": FrameJson::from_frame(&d.omega)});
        }
        Op::Perturb => {
            let tol = ctx.tol_or(1e-9);
            let other = read_json::<FrameJson>(require(&a.other, "--other")?)?.to_frame()?;
            let mode = match a.mode {
                Mode::Quadratic => PerturbMode::Quadratic,
                Mode::General => PerturbMode::general(a.alpha, a.beta, a.gamma, ctx.seed),
            };
            let p = hframe::perturb_certificate(&f, &other, mode)?;
            let kind = if p.falsification_only { CheckKind::Falsification } else { CheckKind::Hypothesis };
            r.summary = format!("perturbation predicts bounds ({}, {})", num(p.predicted.0), num(p.predicted.1));
            let note = p.c.map(|c| format!("c = {}", num(c))).or(p.worst_excess.map(|w| format!("worst excess {}", num(w))));
            r.flag("closeness hypothesis", kind, p.valid, note);
            if p.valid {
                let m = hframe::frame_bounds(&other);
                let ok = m.a >= p.predicted.0 - tol && m.b <= p.predicted.1 + tol;
                r.flag("measured bounds inside predicted bounds", CheckKind::Theorem, ok,
                       Some(format!("measured ({}, {})", num(m.a), num(m.b))));
            }
            r.data = serde_json::to_value(&p).expect("serializes");
        }
    }
    Ok(r)
}
