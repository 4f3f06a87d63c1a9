use crate::io::parse_range;
use crate::report::{num, sci, CheckKind, Report};
use crate::{CliError, Ctx, Result};
use cuntz::{CuntzError, SolveOptions};
use linops::{random_matrix, seeded_rng};
use num_rational::BigRational;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    /// Fixed point b of the commutator equations.
    Solve,
    /// Assemble D_mu, X_mu and report their norms.
    Build,
    /// Symbolic structure, bounds and decay over a range of n.
    Verify,
    /// Lower bound |[D, X] - I| >= 1 for scalar matrices.
    Obstruction,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    pub op: Op,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    /// `lo:hi:step` for `verify`.
    #[arg(long, default_value = "6:12:2")]
    pub n_range: String,
    /// Word-count ceiling for the solver.
    #[arg(long, default_value_t = SolveOptions::default().max_words)]
    pub max_words: usize,
    #[arg(long, default_value_t = SolveOptions::default().max_iters)]
    pub max_iters: usize,
    /// Matrix size for `obstruction`.
    #[arg(long, default_value_t = 5)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

fn options(a: &Args, ctx: &Ctx) -> SolveOptions {
    SolveOptions { max_iters: a.max_iters, max_words: a.max_words, tol: ctx.tol_or(1e-10), ..SolveOptions::default() }
}

/// Turns a solver stop into a failed check; other errors propagate.
fn not_converged(r: &mut Report, n: usize, e: CuntzError) -> Result<()> {
    match e {
        CuntzError::NotConverged(d) => {
            r.flag(
                &format!("n = {n}: fixed-point iteration converges"),
                CheckKind::Theorem,
                false,
                Some(format!("stopped at {} stage: {}", d.stage, d.message)),
            );
            r.data = serde_json::to_value(&*d).expect("serializes");
            Ok(())
        }
        other => Err(other.into()),
    }
}

pub fn run(a: &Args, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(format!("cuntz {:?}", a.op).to_lowercase(), ctx.seed);
    match a.op {
        Op::Solve => {
            let opts = options(a, ctx);
            r.summary = format!("solve n = {}, delta = {}", a.n, sci(cuntz::delta(a.n)));
            match cuntz::solve_b(a.n, opts) {
                Ok(sol) => {
                    r.bound("residual of T b = a + delta F(b) + delta G(b, b)", CheckKind::Theorem, sol.residual_hi, 1e-8);
                    r.flag(
                        "|b| <= 16 sqrt2 n^3",
                        CheckKind::Theorem,
                        sol.b_norm_hi <= sol.b_bound,
                        Some(format!("{} vs {}", num(sol.b_norm_hi), num(sol.b_bound))),
                    );
                    for (i, b) in sol.b.iter().enumerate() {
                        r.line(format!("b{} = {b}", i + 1));
                    }
                    r.data = json!({"options": opts, "solution": sol});
                }
                Err(e) => not_converged(&mut r, a.n, e)?,
            }
        }
        Op::Build => {
            let opts = options(a, ctx);
            r.summary = format!("D_mu, X_mu for n = {}, mu = {}", a.n, num(a.mu));
            match cuntz::build_dx(a.n, a.mu, opts) {
                Ok(b) => {
                    let rep = cuntz::bounds_from(&b);
                    r.flag("[D, X] - I vanishes off the last column", CheckKind::Theorem, b.off_column_words == 0,
                           Some(format!("{} stray words", b.off_column_words)));
                    r.flag("|D| within the explicit bound", CheckKind::Theorem, rep.d_within_formula(),
                           Some(format!("[{}, {}] vs {}", num(rep.d_norm.lo), num(rep.d_norm.hi), num(rep.d_formula))));
                    r.flag("|X| within the explicit bound", CheckKind::Theorem, rep.x_within_formula(),
                           Some(format!("[{}, {}] vs {}", num(rep.x_norm.lo), num(rep.x_norm.hi), num(rep.x_formula))));
                    r.line(format!("error bound |[D, X] - I| <= {}", sci(b.error_bound)));
                    r.data = json!({"bounds": rep, "d": b.d, "x": b.x, "defect_last_column":
                        (0..b.n).map(|i| b.defect.get(i, b.n - 1).clone()).collect::<Vec<_>>()});
                }
                Err(e) => not_converged(&mut r, a.n, e)?,
            }
        }
        Op::Verify => {
            let ns = parse_range(&a.n_range)?;
            if ns.iter().any(|&n| n < 2) {
                return Err(CliError::Input("n must be at least 2".into()));
            }
            let mu = BigRational::from_float(a.mu)
                .filter(|m| a.mu > 0.0 && m > &BigRational::from_integer(0.into()))
                .ok_or_else(|| CliError::Input(format!("mu must be positive, got {}", a.mu)))?;
            r.summary = format!("verify n in {:?}, mu = {}", ns, num(a.mu));
            let opts = options(a, ctx);
            let mut errors = Vec::new();
            let mut rows = Vec::new();
            for &n in &ns {
                let s = cuntz::free::structure_check(n, &cuntz::free::delta_exact(n), &mu)?;
                r.flag(&format!("n = {n}: [D, X] - I is last-column-only"), CheckKind::Exact, s.holds(), None);
                match cuntz::verify_bounds(n, a.mu, opts) {
                    Ok(b) => {
                        r.bound(&format!("n = {n}: solver residual"), CheckKind::Theorem, b.residual_hi, 1e-8);
                        r.flag(&format!("n = {n}: |X| <= 2"), CheckKind::Theorem, b.x_norm.hi <= 2.0, None);
                        r.flag(&format!("n = {n}: |b| <= 16 sqrt2 n^3"), CheckKind::Theorem, b.b_norm_hi <= b.b_bound, None);
                        errors.push((n, b.error_bound));
                        rows.push(json!({"n": n, "structure": s, "bounds": b}));
                    }
                    Err(CuntzError::NotConverged(d)) => {
                        r.flag(&format!("n = {n}: fixed-point iteration converges"), CheckKind::Theorem, false,
                               Some(format!("stopped at {} stage: {}", d.stage, d.message)));
                        rows.push(json!({"n": n, "structure": s, "diagnostics": *d}));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let ratios = cuntz::decay_ratios(&errors, 1.1);
            for c in &ratios {
                r.flag(&format!("decay ratio n = {} -> {}", c.n1, c.n2), CheckKind::Theorem, c.holds,
                       Some(format!("{} vs {}", num(c.ratio), num(c.predicted))));
            }
            r.data = json!({"rows": rows, "ratios": ratios});
        }
        Op::Obstruction => {
            if a.dim == 0 || a.trials == 0 {
                return Err(CliError::Input("--dim and --trials must be positive".into()));
            }
            let tol = ctx.tol_or(1e-9);
            let mut rng = seeded_rng(ctx.seed);
            let mut least = f64::INFINITY;
            for _ in 0..a.trials {
                let d = random_matrix(&mut rng, a.dim, a.dim);
                let x = random_matrix(&mut rng, a.dim, a.dim);
                least = least.min(cuntz::finite_obstruction(&d, &x)?);
            }
            r.summary = format!("min |[D, X] - I| = {} over {} pairs of size {}", num(least), a.trials, a.dim);
            r.bound("1 - min |[D, X] - I|", CheckKind::Theorem, (1.0 - least).max(0.0), tol);
            r.data = json!({"min": least, "trials": a.trials, "dim": a.dim});
        }
    }
    Ok(r)
}
