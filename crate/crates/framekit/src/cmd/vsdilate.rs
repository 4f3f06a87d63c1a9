use crate::io::{read_json, require};
use crate::report::{CheckKind, Report};
use crate::{CliError, Ctx, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use vsdilate::{block, pow, to_string_rows, BigRational, DilationQuadruple, Field, Mat, PowerCheck, SchurCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Halmos,
    Ndilate,
    Sznagy,
    Standard,
    Ando,
    Intertwine,
    Witness,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Matrix T as JSON rows of numbers or strings such as "1/2".
    #[arg(long)]
    pub t: Option<PathBuf>,
    /// Commuting partner (ando) or intertwiner (intertwine).
    #[arg(long)]
    pub s: Option<PathBuf>,
    /// Second map for `intertwine`.
    #[arg(long)]
    pub t2: Option<PathBuf>,
    /// Number of exact powers for `ndilate`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Truncation horizon for `standard`, `ando`, `intertwine`.
    #[arg(long, default_value_t = 4)]
    pub horizon: usize,
    /// Half-width of the window for `sznagy`.
    #[arg(long, default_value_t = 4)]
    pub window: usize,
    /// Schur case 1..4 for a halmos dilation with blocks B, C, D.
    #[arg(long)]
    pub case: Option<u8>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<PathBuf>,
}

fn cell(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(CliError::Input(format!("matrix entries must be numbers or strings, got {v}"))),
    }
}

fn read_mat<F: Field>(path: &Path) -> Result<Mat<F>> {
    let v: Value = read_json(path)?;
    let rows = match &v {
        Value::Object(o) => o.get("rows").cloned().unwrap_or(Value::Null),
        other => other.clone(),
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| CliError::Input(format!("{}: expected an array of rows", path.display())))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::Input(format!("{}: each row must be an array", path.display())))?
                .iter()
                .map(cell)
                .collect::<Result<Vec<String>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vsdilate::parse_matrix::<F>(&rows)?)
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    if ctx.rational {
        run_in::<BigRational>(a, ctx)
    } else {
        run_in::<f64>(a, ctx)
    }
}

struct Recorder<'a> {
    r: &'a mut Report,
    exact: bool,
}

impl Recorder<'_> {
    fn power(&mut self, what: &str, c: &PowerCheck) {
        self.residual(&format!("{what}, k = {}", c.k), c.residual, c.holds);
    }

    fn residual(&mut self, name: &str, residual: f64, holds: bool) {
        if self.exact {
            let note = (!holds).then(|| format!("largest entry of the difference {residual}"));
            self.r.flag(name, CheckKind::Exact, holds, note);
        } else {
            self.r.bound(name, CheckKind::Theorem, residual, vsdilate::FLOAT_TOL);
        }
    }

    fn exact(&mut self, name: &str, holds: bool) {
        let kind = if self.exact { CheckKind::Exact } else { CheckKind::Theorem };
        self.r.flag(name, kind, holds, None);
    }
}

fn quadruple_checks<F: Field>(rec: &mut Recorder, q: &DilationQuadruple<F>) {
    rec.exact("P is idempotent", q.p_idempotent());
    rec.exact("range of P is I(V)", q.p_range_matches());
    if let (Some(res), Some(holds)) = (q.inverse_residual(), q.inverse_holds()) {
        rec.residual("U U^-1 = U^-1 U = I", res, holds);
    }
}

fn quadruple_data<F: Field>(q: &DilationQuadruple<F>) -> Value {
    json!({"space": q.space, "blocks": q.blocks, "u": to_string_rows(&q.u),
           "u_inv": q.u_inv.as_ref().map(to_string_rows), "p": to_string_rows(&q.p),
           "embedding": to_string_rows(&q.embedding), "horizon": q.horizon})
}

fn run_in<F: Field>(a: &Args, ctx: &Ctx) -> Result<Report> {
    let t: Mat<F> = read_mat(require(&a.t, "--t")?)?;
    let mut r = Report::new(format!("vsdilate {:?}", a.op).to_lowercase(), ctx.seed);
    let mode = if ctx.rational { "rational" } else { "float" };
    let d = t.nrows();
    let mut data = json!({});
    let summary;
    let mut lines = Vec::new();
    {
        let mut rec = Recorder { r: &mut r, exact: ctx.rational };
        match a.op {
            Op::Halmos => {
                let q = match a.case {
                    None => vsdilate::halmos(&t)?,
                    Some(c) => {
                        let case = SchurCase::try_from(c)?;
                        let b = read_mat(require(&a.b, "--b")?)?;
                        let cm = read_mat(require(&a.c, "--c")?)?;
                        let dm = read_mat(require(&a.d, "--d")?)?;
                        vsdilate::schur_halmos(&t, &b, &cm, &dm, case)?
                    }
                };
                summary = format!("Halmos dilation on V + V ({mode})");
                rec.power("P U I = I T", &q.power_check(&t, 1));
                quadruple_checks(&mut rec, &q);
                data = quadruple_data(&q);
            }
            Op::Ndilate => {
                let q = vsdilate::n_dilation(&t, a.n)?;
                summary = format!("{}-block dilation, T^k = P U^k|V for k <= {} ({mode})", a.n + 1, a.n);
                for c in q.table(&t, a.n) {
                    rec.power("P U^k I = I T^k", &c);
                }
                let beyond = q.power_check(&t, a.n + 1);
                let comp = block(&(&q.p * pow(&q.u, a.n + 1) * &q.embedding), 0, 0, d, d);
                let tk = pow(&t, a.n + 1);
                lines.push(format!(
                    "k = {} beyond the horizon: P U^k|V = {:?}, T^k = {:?} ({})",
                    a.n + 1,
                    to_string_rows(&comp),
                    to_string_rows(&tk),
                    if beyond.holds { "equal" } else { "differ" }
                ));
                quadruple_checks(&mut rec, &q);
                data = json!({"dilation": quadruple_data(&q),
                              "beyond_horizon": {"k": a.n + 1, "compression": to_string_rows(&comp),
                                                 "t_power": to_string_rows(&tk), "equal": beyond.holds}});
            }
            Op::Sznagy => {
                let w = vsdilate::banded_sznagy(&t, a.window)?;
                summary = format!("banded window [-{0}, {0}], powers 1..={1} ({mode})", a.window, w.horizon);
                for n in 1..=w.horizon {
                    rec.power("P U^n|V = T^n", &w.compression(&t, n)?);
                }
                let (res, ok) = w.interior_inverse();
                rec.residual("U V = V U = I on the interior", res, ok);
                data = json!({"u": to_string_rows(&w.u), "v": to_string_rows(&w.v), "horizon": w.horizon});
            }
            Op::Standard => {
                let q = vsdilate::standard_dilation(&t, a.horizon)?;
                summary = format!("shift dilation on sequences up to index {} ({mode})", a.horizon);
                rec.power("P U^k I = I T^k", &q.power_check(&t, 0));
                for c in q.table(&t, a.horizon) {
                    rec.power("P U^k I = I T^k", &c);
                }
                quadruple_checks(&mut rec, &q);
                lines.push(format!("Krylov rank {} of {}", q.krylov_rank(), q.u.nrows()));
                data = quadruple_data(&q);
            }
            Op::Ando => {
                let s: Mat<F> = read_mat(require(&a.s, "--s")?)?;
                let g = vsdilate::ando_like(&t, &s, a.horizon)?;
                summary = format!("commuting pair on the grid n + m <= {} ({mode})", a.horizon);
                for c in g.verify(&t, &s) {
                    rec.residual(&format!("P U^n V^m I = I T^n S^m, (n, m) = ({}, {})", c.n, c.m), c.residual, c.holds);
                }
                rec.exact("U V = V U", g.structural_identity_holds());
                rec.exact("P is idempotent", g.p_idempotent());
            }
            Op::Intertwine => {
                let t2: Mat<F> = read_mat(require(&a.t2, "--t2")?)?;
                let s: Mat<F> = read_mat(require(&a.s, "--s")?)?;
                let l = vsdilate::intertwine_lift(&t, &t2, &s, a.horizon)?;
                summary = format!("lifted intertwiner up to index {} ({mode})", a.horizon);
                rec.residual("U1 R = R U2", l.shift_residual, l.shift_residual == 0.0);
                rec.residual("R P2 = P1 R", l.projection_residual, l.projection_residual == 0.0);
                rec.residual("R I2 = I1 S", l.embedding_residual, l.embedding_residual == 0.0);
                rec.exact("lift intertwines", l.holds);
                data = json!({"r": to_string_rows(&l.r)});
            }
            Op::Witness => {
                let w = vsdilate::non_similarity_witness(&t)?;
                summary = if w.distinct {
                    format!("traces {} and {} differ: the two dilations are not similar", w.trace_first, w.trace_second)
                } else {
                    "tr T = 0: the trace test is inconclusive".into()
                };
                rec.exact("first dilation invertible", w.first_invertible);
                data = serde_json::to_value(&w).expect("serializes");
            }
        }
    }
    r.summary = summary;
    r.lines = lines;
    r.data = data;
    Ok(r)
}
