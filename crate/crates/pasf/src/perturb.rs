use crate::{check, PAsf, PasfError, Result};
use linops::{opnorm_interval, pnorm, random_vector, seeded_rng, Matrix, NormInterval, Vector};
use serde::Serialize;

/// Default sample size for the sampled hypothesis check.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum PasfPerturbMode {
    /// `‖Σc_n(τ_n−ω_n)‖ ≤ α‖Σc_nτ_n‖ + γ‖c‖_p + β‖Σc_nω_n‖`, checked on samples.
    General { alpha: f64, beta: f64, gamma: f64, samples: usize, seed: u64 },
    /// `λ = Σ‖τ_n − ω_n‖^q`.
    Quadratic,
    /// One of the four summability conditions, with replacement functionals `G` (m×d).
    TwoSided { case: u8, g: Matrix },
}

impl PasfPerturbMode {
    pub fn general(alpha: f64, beta: f64, gamma: f64, seed: u64) -> Self {
        PasfPerturbMode::General { alpha, beta, gamma, samples: DEFAULT_SAMPLES, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PasfPerturbReport {
    pub valid: bool,
    /// Set when validity rests on a sample rather than a proof.
    pub falsification_only: bool,
    pub lambda: Option<f64>,
    /// Threshold `1/‖θ_f S⁻¹‖^q` evaluated at the upper end of the norm interval.
    pub threshold: Option<f64>,
    pub worst_excess: Option<f64>,
    pub samples: usize,
    /// Predicted bounds, conservative in the norm intervals.
    pub predicted: Option<(f64, f64)>,
    /// Quadratic mode only: the literal form with `λ^{1/p}` and no `‖θ_f‖` factor.
    pub literal_form: Option<(f64, f64)>,
    /// Two-sided mode: value of the requested sum.
    pub condition_sum: Option<f64>,
    /// Bounds of the unperturbed pair.
    pub original: (NormInterval, NormInterval),
}

struct Norms {
    sinv: NormInterval,
    theta_f: NormInterval,
    theta_tau: NormInterval,
    theta_f_sinv: NormInterval,
    si: Matrix,
}

fn norms(pf: &PAsf) -> Result<Norms> {
    let si = pf.frame_operator_inverse()?;
    let p = pf.p();
    Ok(Norms {
        sinv: opnorm_interval(&si, p)?,
        theta_f: opnorm_interval(pf.analysis(), p)?,
        theta_tau: opnorm_interval(pf.synthesis(), p)?,
        theta_f_sinv: opnorm_interval(&(pf.analysis() * &si), p)?,
        si,
    })
}

fn col_norms(a: &Matrix, p: f64) -> Vec<f64> {
    a.column_iter().map(|c| pnorm(c.iter(), p)).collect()
}

fn row_norms(a: &Matrix, q: f64) -> Vec<f64> {
    a.row_iter().map(|r| pnorm(r.iter(), q)).collect()
}

pub fn perturb_certificate(pf: &PAsf, omega: &Matrix, mode: PasfPerturbMode) -> Result<PasfPerturbReport> {
    linops::expect_shape(omega, pf.dim(), pf.len())?;
    let base = check(pf);
    if !base.is_pasf {
        return Err(PasfError::NotInvertible);
    }
    let n = norms(pf)?;
    let (p, q) = (pf.p(), pf.q());
    let diff = pf.synthesis() - omega;
    let mut report = PasfPerturbReport {
        valid: false,
        falsification_only: false,
        lambda: None,
        threshold: None,
        worst_excess: None,
        samples: 0,
        predicted: None,
        literal_form: None,
        condition_sum: None,
        original: (base.a, base.b),
    };
    match mode {
        PasfPerturbMode::General { alpha, beta, gamma, samples, seed } => {
            if alpha < 0.0 || beta < 0.0 || gamma < 0.0 {
                return Err(PasfError::HypothesisViolated("alpha, beta, gamma must be nonnegative".into()));
            }
            let lead = alpha + gamma * n.theta_f_sinv.hi;
            if lead.max(beta) >= 1.0 {
                return Err(PasfError::HypothesisViolated(format!(
                    "max(alpha + gamma*|theta_f S^-1|, beta) = {} >= 1",
                    lead.max(beta)
                )));
            }
            let m = pf.len();
            let mut rng = seeded_rng(seed);
            let mut worst = f64::NEG_INFINITY;
            for k in 0..samples {
                let c: Vector = if k < m { linops::basis_vector(m, k) } else { random_vector(&mut rng, m) };
                let lhs = pnorm((&diff * &c).iter(), p);
                let rhs = alpha * pnorm((pf.synthesis() * &c).iter(), p)
                    + gamma * pnorm(c.iter(), p)
                    + beta * pnorm((omega * &c).iter(), p);
                worst = worst.max(lhs - rhs);
            }
            report.valid = worst <= 1e-12 * (1.0 + linops::max_abs(pf.synthesis()));
            report.falsification_only = true;
            report.worst_excess = Some(worst);
            report.samples = samples;
            report.predicted = Some((
                (1.0 - lead) / ((1.0 + beta) * n.sinv.hi),
                ((1.0 + alpha) / (1.0 - beta) * n.theta_tau.hi + gamma / (1.0 - beta)) * n.theta_f.hi,
            ));
        }
        PasfPerturbMode::Quadratic => {
            let cn = col_norms(&diff, p);
            let lambda: f64 = if q.is_infinite() {
                cn.iter().copied().fold(0.0, f64::max)
            } else {
                cn.iter().map(|x| x.powf(q)).sum()
            };
            // Hölder: ‖Σc_n(τ_n−ω_n)‖ ≤ λ^{1/q}‖c‖_p, so γ = λ^{1/q}
            let gamma = if q.is_infinite() { lambda } else { lambda.powf(1.0 / q) };
            let threshold = if q.is_infinite() {
                1.0 / n.theta_f_sinv.hi
            } else {
                1.0 / n.theta_f_sinv.hi.powf(q)
            };
            report.lambda = Some(lambda);
            report.threshold = Some(threshold);
            report.valid = lambda < threshold;
            report.predicted = Some((
                (1.0 - gamma * n.theta_f_sinv.hi) / n.sinv.hi,
                (n.theta_tau.hi + gamma) * n.theta_f.hi,
            ));
            let lp = lambda.powf(1.0 / p);
            report.literal_form = Some(((1.0 - lp * n.theta_f_sinv.hi) / n.sinv.hi, n.theta_tau.hi + lp));
        }
        PasfPerturbMode::TwoSided { case, g } => {
            linops::expect_shape(&g, pf.len(), pf.dim())?;
            let f = pf.analysis();
            let tau = pf.synthesis();
            let si = &n.si;
            let fg = f - &g;
            let terms: Vec<f64> = match case {
                1 => zip_sum(&row_norms(&fg, q), &col_norms(&(si * tau), p), &row_norms(&g, q), &col_norms(&(si * &diff), p)),
                2 => zip_sum(&row_norms(&fg, q), &col_norms(&(si * omega), p), &row_norms(f, q), &col_norms(&(si * &diff), p)),
                3 => zip_sum(&row_norms(&(&fg * si), q), &col_norms(tau, p), &row_norms(&(&g * si), q), &col_norms(&diff, p)),
                4 => zip_sum(&row_norms(&(&fg * si), q), &col_norms(omega, p), &row_norms(&(f * si), q), &col_norms(&diff, p)),
                _ => return Err(PasfError::InvalidInput(format!("two-sided case must be 1..4, got {case}"))),
            };
            let sum: f64 = terms.iter().sum();
            report.condition_sum = Some(sum);
            report.valid = sum < 1.0;
        }
    }
    Ok(report)
}

/// Per-index `a_n b_n + c_n d_n`.
fn zip_sum(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    (0..a.len()).map(|i| a[i] * b[i] + c[i] * d[i]).collect()
}
