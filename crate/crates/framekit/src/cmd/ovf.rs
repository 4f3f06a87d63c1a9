use crate::io::{read_json, read_matrix, require};
use crate::report::{num, CheckKind, Report};
use crate::{CliError, Ctx, Result};
use linops::{approx_eq, max_abs, Matrix, MatrixJson};
use ovf::{FiniteGroup, OvfJson, OvfPair, OvfPerturbMode};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Check,
    Dual,
    Similar,
    Classify,
    Dilate,
    Group,
    Perturb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Quadratic,
    Triple,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Pair file `{"d", "r", "A": [..], "Psi": [..]}`; for `group`, a group file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Second pair for `similar`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Stacked perturbed analysis matrix for `perturb`.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Quadratic)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

/// Group file: a Cayley table (or the order of a cyclic group), a unitary
/// representation and the two generators.
#[derive(Debug, Deserialize)]
struct GroupJson {
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    cyclic: Option<usize>,
    rep: Vec<MatrixJson>,
    #[serde(rename = "A")]
    a: MatrixJson,
    #[serde(rename = "Psi")]
    psi: MatrixJson,
}

fn load(path: &Option<PathBuf>, flag: &str) -> Result<OvfPair> {
    Ok(read_json::<OvfJson>(require(path, flag)?)?.to_pair()?)
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(format!("ovf {:?}", a.op).to_lowercase(), ctx.seed);
    let tol = ctx.tol_or(1e-10);
    if a.op == Op::Group {
        let g: GroupJson = read_json(require(&a.input, "--in")?)?;
        let group = match (g.table, g.cyclic) {
            (Some(t), None) => FiniteGroup::new(t)?,
            (None, Some(n)) => FiniteGroup::cyclic(n)?,
            _ => return Err(CliError::Input("group file needs exactly one of \"table\" or \"cyclic\"".into())),
        };
        let rep: Vec<Matrix> = g.rep.iter().map(|m| m.to_matrix()).collect::<std::result::Result<_, _>>()?;
        let out = ovf::group_generated(&group, &rep, &g.a.to_matrix()?, &g.psi.to_matrix()?)?;
        let c = ovf::check(&out.pair);
        r.summary = format!("group-generated family of order {}, bounds ({}, {})", group.order(), num(c.a), num(c.b));
        r.bound("S commutes with the representation", CheckKind::Theorem, out.commutant_residual, tol);
        r.bound("A_g Psi_h* depends only on g^-1 h", CheckKind::Theorem, out.gc1_residual, tol);
        r.flag("frame operator invertible", CheckKind::Hypothesis, c.is_ovf, None);
        r.data = json!({"pair": OvfJson::from_pair(&out.pair), "commutant_residual": out.commutant_residual,
                        "gc1_residual": out.gc1_residual, "check": c});
        return Ok(r);
    }
    let p = load(&a.input, "--in")?;
    match a.op {
        Op::Check => {
            let c = ovf::check(&p);
            r.summary = format!("{} blocks of size {}x{}, bounds ({}, {})", p.len(), p.block(), p.dim(), num(c.a), num(c.b));
            r.flag("frame operator invertible", CheckKind::Hypothesis, c.is_ovf, None);
            let blockwise = max_abs(&(p.frame_operator() - p.frame_operator_blockwise()));
            r.bound("stacked and blockwise frame operators agree", CheckKind::Theorem, blockwise, tol);
            r.data = serde_json::to_value(c).expect("serializes");
        }
        Op::Dual => {
            let d = ovf::canonical_dual(&p)?;
            let dd = ovf::canonical_dual(&d)?;
            r.summary = "canonical dual (A_n S^-1, Psi_n (S^-1)*)".into();
            r.flag("canonical dual is a dual", CheckKind::Theorem, ovf::duality_check(&p, &d)?, None);
            let inv = max_abs(&(dd.theta_a() - p.theta_a())).max(max_abs(&(dd.theta_psi() - p.theta_psi())));
            r.bound("dual of the dual is the pair", CheckKind::Theorem, inv, tol);
            r.data = json!({"dual": OvfJson::from_pair(&d)});
        }
        Op::Similar => {
            let q = load(&a.other, "--other")?;
            match ovf::similarity(&p, &q)? {
                Some(s) => {
                    r.summary = "similar: right multipliers recovered".into();
                    r.bound("P_{A,Psi} = P_{B,Phi}", CheckKind::Theorem, s.projection_residual, ctx.tol_or(1e-8));
                    let ok = approx_eq(&(p.theta_a() * &s.r_ab), q.theta_a(), ctx.tol_or(1e-8))
                        && approx_eq(&(p.theta_psi() * &s.r_psi_phi), q.theta_psi(), ctx.tol_or(1e-8));
                    r.flag("B_n = A_n R_AB and Phi_n = Psi_n R_PsiPhi", CheckKind::Theorem, ok, None);
                    r.data = json!({"r_ab": MatrixJson::from_matrix(&s.r_ab),
                                    "r_psi_phi": MatrixJson::from_matrix(&s.r_psi_phi),
                                    "parseval_residual": s.parseval_residual()});
                }
                None => {
                    r.summary = "not similar: the projections differ".into();
                    r.flag("P_{A,Psi} = P_{B,Phi}", CheckKind::Theorem, false, None);
                }
            }
        }
        Op::Classify => {
            let c = ovf::classify(&p)?;
            r.summary = match (c.riesz, c.orthonormal) {
                (_, true) => "orthonormal".into(),
                (true, false) => "Riesz, not orthonormal".into(),
                _ => "neither Riesz nor orthonormal".into(),
            };
            r.data = serde_json::to_value(c).expect("serializes");
        }
        Op::Dilate => {
            let d = ovf::dilate(&p)?;
            let c = ovf::classify(&d.pair)?;
            r.summary = format!("orthonormal dilation on K^{} + {} complement dimensions", p.dim(), d.complement.ncols());
            r.flag("dilation is orthonormal", CheckKind::Theorem, c.orthonormal, None);
            r.bound("restriction recovers (A_n, Psi_n)", CheckKind::Theorem, d.restriction_residual, ctx.tol_or(1e-8));
            r.data = json!({"pair": OvfJson::from_pair(&d.pair), "restriction_residual": d.restriction_residual});
        }
        Op::Perturb => {
            let b = read_matrix(require(&a.b, "--b")?)?;
            let mode = match a.mode {
                Mode::Quadratic => OvfPerturbMode::Quadratic,
                Mode::Triple => OvfPerturbMode::triple(a.alpha, a.beta, a.gamma, ctx.seed),
            };
            let rep = ovf::perturb_certificate(&p, &b, mode)?;
            let kind = if rep.falsification_only { CheckKind::Falsification } else { CheckKind::Hypothesis };
            r.summary = match rep.predicted {
                Some((lo, hi)) => format!("perturbation predicts bounds ({}, {})", num(lo), num(hi)),
                None => "perturbation hypothesis fails".into(),
            };
            r.flag("perturbation hypothesis", kind, rep.valid, Some(format!("condition {}", num(rep.condition))));
            if let Some(ok) = rep.contained {
                r.flag("measured bounds inside predicted bounds", CheckKind::Theorem, ok, None);
            }
            r.data = serde_json::to_value(&rep).expect("serializes");
        }
        Op::Group => unreachable!(),
    }
    Ok(r)
}
