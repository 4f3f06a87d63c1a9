use crate::io::{read_json, read_matrix, require};
use crate::report::{num, CheckKind, Report};
use crate::{CliError, Ctx, Result};
use linops::{identity_residual, max_abs};
use pasf::{PAsf, PasfJson, PasfPerturbMode};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Check,
    Dual,
    Alldual,
    Similar,
    Dilate,
    Riesz,
    Perturb,
    Expand,
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
    /// p-ASF file `{"p", "F", "T"}`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Use the truncated shift pair on K^D instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub shift: Option<usize>,
    /// Exponent for `--shift`.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Second p-ASF (similar, expand).
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Matrix U (m x d) for `alldual`.
    #[arg(long)]
    pub u: Option<PathBuf>,
    /// Matrix V (d x m) for `alldual`.
    #[arg(long)]
    pub v: Option<PathBuf>,
    /// Perturbed synthesis matrix (d x m) for `perturb`.
    #[arg(long)]
    pub omega: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Quadratic)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Scalar lambda for `expand`.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

fn load(a: &Args) -> Result<PAsf> {
    if let Some(d) = a.shift {
        if d == 0 {
            return Err(CliError::Input("--shift needs a positive dimension".into()));
        }
        return Ok(pasf::shift_example(d, a.p)?);
    }
    Ok(read_json::<PasfJson>(require(&a.input, "--in or --shift")?)?.to_pasf()?)
}

fn interval(i: &linops::NormInterval) -> String {
    if i.is_exact() { num(i.lo) } else { format!("[{}, {}]", num(i.lo), num(i.hi)) }
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let pf = load(a)?;
    let mut r = Report::new(format!("pasf {:?}", a.op).to_lowercase(), ctx.seed);
    let tol = ctx.tol_or(1e-9);
    match a.op {
        Op::Check => {
            let c = pasf::check(&pf);
            r.summary = format!("p = {}, bounds a in {}, b in {}", num(pf.p()), interval(&c.a), interval(&c.b));
            r.flag("frame operator S = theta_tau theta_f invertible", CheckKind::Hypothesis, c.is_pasf, None);
            r.data = serde_json::to_value(c).expect("serializes");
        }
        Op::Dual => {
            let d = pasf::canonical_dual(&pf)?;
            r.summary = "canonical dual (f_n S^-1, S^-1 tau_n)".into();
            r.flag("canonical dual is a dual", CheckKind::Theorem, pasf::dual_check(&pf, &d)?, None);
            r.bound("theta_tau theta_g = I", CheckKind::Theorem, identity_residual(&(pf.synthesis() * d.analysis())), tol);
            r.data = json!({"dual": PasfJson::from_pasf(&d)});
        }
        Op::Alldual => {
            let u = read_matrix(require(&a.u, "--u")?)?;
            let v = read_matrix(require(&a.v, "--v")?)?;
            let g = pasf::dual_from_operators(&pf, &u, &v)?;
            r.summary = "dual from (U, V)".into();
            r.flag("constructed pair is a dual", CheckKind::Theorem, pasf::dual_check(&pf, &g)?, None);
            r.data = json!({"dual": PasfJson::from_pasf(&g)});
        }
        Op::Similar => {
            let q = read_json::<PasfJson>(require(&a.other, "--other")?)?.to_pasf()?;
            match pasf::similarity(&pf, &q)? {
                Some(s) => {
                    r.summary = "similar: transition operators recovered".into();
                    r.bound("P_{f,tau} = P_{g,omega}", CheckKind::Theorem, s.projection_residual, tol);
                    let gf = max_abs(&(pf.analysis() * &s.t_fg - q.analysis()));
                    let gt = max_abs(&(&s.t_tau_omega * pf.synthesis() - q.synthesis()));
                    r.bound("g_n = f_n T_fg", CheckKind::Theorem, gf, tol);
                    r.bound("omega_n = T_tau_omega tau_n", CheckKind::Theorem, gt, tol);
                    r.data = json!({"t_fg": linops::MatrixJson::from_matrix(&s.t_fg),
                                    "t_tau_omega": linops::MatrixJson::from_matrix(&s.t_tau_omega),
                                    "projection_residual": s.projection_residual});
                }
                None => {
                    r.summary = "not similar: the projections differ".into();
                    r.flag("P_{f,tau} = P_{g,omega}", CheckKind::Theorem, false, None);
                }
            }
        }
        Op::Dilate => {
            let d = pasf::dilate(&pf)?;
            let table = d.omega_table();
            r.summary = format!("dilation onto K^{} + range(I - P), rank {}", pf.dim(), d.basis.ncols());
            for (n, (t, k)) in table.iter().enumerate() {
                r.line(format!(
                    "w{} = {} + {}",
                    n + 1,
                    super::describe_vector(t),
                    super::describe_vector(k)
                ));
            }
            r.flag("dilated pair is a p-approximate Riesz basis", CheckKind::Theorem, d.riesz, None);
            let (f0, t0) = d.restriction();
            let exact = &f0 == pf.analysis() && &t0 == pf.synthesis();
            r.flag("restriction recovers (F, T)", CheckKind::Exact, exact, None);
            let rows: Vec<serde_json::Value> = table
                .iter()
                .map(|(t, k)| json!({"tau": super::describe_vector(t), "k": super::describe_vector(k)}))
                .collect();
            r.data = json!({"omega_table": rows, "rank": d.basis.ncols(), "dilated": PasfJson::from_pasf(&d.dilated)});
        }
        Op::Riesz => {
            let ok = pasf::riesz_check(&pf)?;
            r.summary = if ok { "p-approximate Riesz basis".into() } else { "not a p-approximate Riesz basis".into() };
            r.flag("theta_f S^-1 theta_tau = I", CheckKind::Theorem, ok, None);
        }
        Op::Perturb => {
            let omega = read_matrix(require(&a.omega, "--omega")?)?;
            let mode = match a.mode {
                Mode::Quadratic => PasfPerturbMode::Quadratic,
                Mode::General => PasfPerturbMode::general(a.alpha, a.beta, a.gamma, ctx.seed),
            };
            let p = pasf::perturb_certificate(&pf, &omega, mode)?;
            let kind = if p.falsification_only { CheckKind::Falsification } else { CheckKind::Hypothesis };
            r.summary = match p.predicted {
                Some((lo, hi)) => format!("perturbation predicts bounds ({}, {})", num(lo), num(hi)),
                None => "perturbation hypothesis fails".into(),
            };
            let note = p.lambda.map(|l| format!("lambda = {}", num(l)));
            r.flag("closeness hypothesis", kind, p.valid, note);
            r.data = serde_json::to_value(&p).expect("serializes");
        }
        Op::Expand => {
            let q = read_json::<PasfJson>(require(&a.other, "--other")?)?.to_pasf()?;
            let e = pasf::expand_to_asf(&pf, &q, a.lambda)?;
            r.summary = format!("expanded with {} nonzero appended vectors (minimum {})", e.nonzero_appended, e.n_min);
            r.bound("expanded frame operator is I", CheckKind::Theorem, identity_residual(&e.combined.frame_operator()), tol);
            r.data = json!({"combined": PasfJson::from_pasf(&e.combined), "nonzero_appended": e.nonzero_appended,
                            "n_min": e.n_min});
        }
    }
    Ok(r)
}
