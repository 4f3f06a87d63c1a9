use crate::io::{read_json, require};
use crate::report::{num, CheckKind, Report};
use crate::{Ctx, Result};
use multiplier::{BoundCheck, MultiplierJson, Variant};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Apply,
    Lip,
    Tail,
    Continuity,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    /// Multiplier file `{"p", "sample", "family", "symbol", "tau", ...}`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Tail cut; every cut when absent.
    #[arg(long)]
    pub cut: Option<usize>,
    /// Second multiplier whose symbol and vectors replace the first's (continuity).
    #[arg(long)]
    pub other: Option<PathBuf>,
}

fn record(r: &mut Report, name: &str, c: &BoundCheck, slack: f64) {
    r.bound(name, CheckKind::Theorem, (c.measured - c.bound).max(0.0), slack);
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let m = read_json::<MultiplierJson>(require(&a.input, "--in")?)?.to_multiplier()?;
    let slack = ctx.tol_or(multiplier::SLACK);
    let mut r = Report::new(format!("multiplier {:?}", a.op).to_lowercase(), ctx.seed);
    let (b, bsrc) = m.b();
    let (d, dsrc) = m.d();
    let constants = json!({"b": b, "b_source": bsrc, "d": d, "d_source": dsrc});
    match a.op {
        Op::Apply => {
            let mut rows = Vec::new();
            for j in 0..m.sample().len() {
                let v = m.apply(j)?;
                r.line(format!("{} -> {}", m.sample().points[j], super::describe_vector(&v)));
                rows.push(linops::MatrixJson::from_matrix(&linops::Matrix::from_column_slice(v.len(), 1, v.as_slice())));
            }
            r.summary = format!("multiplier on {} points, Lipschitz number {}", m.sample().len(), num(m.lipschitz_number()));
            r.data = json!({"values": rows, "lipschitz_number": m.lipschitz_number(), "constants": constants});
        }
        Op::Lip => {
            let c = multiplier::lip_bound_check(&m)?;
            r.summary = format!("Lip(M) = {} <= {}", num(c.measured), num(c.bound));
            record(&mut r, "Lip(M) <= b d sup|lambda|", &c, slack);
            r.data = json!({"check": c, "constants": constants});
        }
        Op::Tail => {
            let cuts: Vec<usize> = match a.cut {
                Some(k) => vec![k],
                None => (0..m.symbol().len()).collect(),
            };
            let mut rows = Vec::new();
            for k in cuts {
                let c = multiplier::tail_decay(&m, k)?;
                r.line(format!("cut {k}: {} <= {}", num(c.measured), num(c.bound)));
                record(&mut r, &format!("tail bound at cut {k}"), &c, slack);
                rows.push(json!({"cut": k, "check": c}));
            }
            r.summary = "tail bounds Lip(M - M_k) <= b d sup_{n>=k}|lambda_n|".into();
            r.data = json!({"tails": rows, "constants": constants});
        }
        Op::Continuity => {
            let o = read_json::<MultiplierJson>(require(&a.other, "--other")?)?.to_multiplier()?;
            let cs = multiplier::continuity(&m, &Variant::Symbol(o.symbol().to_vec()))?;
            let cv = multiplier::continuity(&m, &Variant::Vectors(o.tau().clone()))?;
            r.summary = format!("symbol change {} <= {}, vector change {} <= {}",
                num(cs.measured), num(cs.bound), num(cv.measured), num(cv.bound));
            record(&mut r, "continuity in the symbol", &cs, slack);
            record(&mut r, "continuity in the vectors", &cv, slack);
            r.data = json!({"symbol": cs, "vectors": cv, "constants": constants});
        }
    }
    Ok(r)
}
