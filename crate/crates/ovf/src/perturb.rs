use crate::{check, CheckReport, OvfError, OvfPair, Result};
use linops::{random_vector, seeded_rng, spectral_norm, Matrix, Vector};
use serde::Serialize;

/// Default number of sampled vectors in triple mode.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OvfPerturbMode {
    /// Prefix inequality with constants `α, β, γ`, checked on sampled `y`.
    Triple { alpha: f64, beta: f64, gamma: f64, samples: usize, seed: u64 },
    /// `Σ‖A_n − B_n‖‖Ψ_n(S*)⁻¹‖ < 1`.
    Quadratic,
}

impl OvfPerturbMode {
    pub fn triple(alpha: f64, beta: f64, gamma: f64, seed: u64) -> Self {
        OvfPerturbMode::Triple { alpha, beta, gamma, samples: DEFAULT_SAMPLES, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OvfPerturbReport {
    /// Quadratic: the summability condition holds. Triple: no sample violated the hypothesis.
    pub valid: bool,
    /// Set in triple mode, where a passing sample does not prove the hypothesis.
    pub falsification_only: bool,
    /// Triple: `α + γ‖θ_Ψ(S*)⁻¹‖`. Quadratic: `Σ‖A_n − B_n‖‖Ψ_n(S*)⁻¹‖`.
    pub condition: f64,
    /// Quadratic mode: `Σ‖A_n − B_n‖²`.
    pub square_sum: Option<f64>,
    pub worst_excess: Option<f64>,
    pub samples: usize,
    /// Predicted bounds for `(B_n, Ψ_n)`; absent when the hypothesis fails.
    pub predicted: Option<(f64, f64)>,
    /// Optimal bounds of `(B_n, Ψ_n)`.
    pub measured: CheckReport,
    /// `predicted` encloses `measured`, with slack 1e-9.
    pub contained: Option<bool>,
    pub original: CheckReport,
}

const SLACK: f64 = 1e-9;

pub fn perturb_certificate(p: &OvfPair, b: &Matrix, mode: OvfPerturbMode) -> Result<OvfPerturbReport> {
    linops::expect_shape(b, p.theta_a().nrows(), p.dim())?;
    let original = check(p);
    if !original.is_ovf {
        return Err(OvfError::NotInvertible);
    }
    let perturbed = OvfPair::from_stacked(p.block(), b.clone(), p.theta_psi().clone())?;
    let measured = check(&perturbed);
    let s_adj_inv = p.frame_operator_inverse()?.adjoint();
    let s_adj_inv_norm = spectral_norm(&s_adj_inv);
    let theta_a = spectral_norm(p.theta_a());
    let theta_psi = spectral_norm(p.theta_psi());
    let diff = p.theta_a() - b;
    let mut report = OvfPerturbReport {
        valid: false,
        falsification_only: false,
        condition: 0.0,
        square_sum: None,
        worst_excess: None,
        samples: 0,
        predicted: None,
        measured,
        contained: None,
        original,
    };
    match mode {
        OvfPerturbMode::Triple { alpha, beta, gamma, samples, seed } => {
            if alpha < 0.0 || beta < 0.0 || gamma < 0.0 {
                return Err(OvfError::HypothesisViolated("alpha, beta, gamma must be nonnegative".into()));
            }
            let lead = alpha + gamma * spectral_norm(&(p.theta_psi() * &s_adj_inv));
            report.condition = lead;
            if lead.max(beta) >= 1.0 {
                return Err(OvfError::HypothesisViolated(format!(
                    "max(alpha + gamma*|theta_Psi (S*)^-1|, beta) = {} >= 1",
                    lead.max(beta)
                )));
            }
            let worst = sampled_excess(p, b, &diff, alpha, beta, gamma, samples, seed);
            report.valid = worst <= 1e-12 * (1.0 + theta_a.max(spectral_norm(b)));
            report.falsification_only = true;
            report.worst_excess = Some(worst);
            report.samples = samples;
            report.predicted = Some((
                (1.0 - lead) / ((1.0 + beta) * s_adj_inv_norm),
                theta_psi * ((1.0 + alpha) * theta_a + gamma) / (1.0 - beta),
            ));
        }
        OvfPerturbMode::Quadratic => {
            let r = p.block();
            let mut cond = 0.0;
            let mut sq = 0.0;
            for n in 0..p.len() {
                let dn = spectral_norm(&diff.rows(n * r, r).into_owned());
                cond += dn * spectral_norm(&(p.psi(n) * &s_adj_inv));
                sq += dn * dn;
            }
            report.condition = cond;
            report.square_sum = Some(sq);
            report.valid = cond < 1.0;
            if report.valid {
                report.predicted = Some(((1.0 - cond) / s_adj_inv_norm, theta_psi * (sq.sqrt() + theta_a)));
            }
        }
    }
    if report.valid {
        let (lo, hi) = report.predicted.expect("set when valid");
        report.contained = Some(measured.is_ovf && lo <= measured.a + SLACK && measured.b <= hi + SLACK);
    }
    Ok(report)
}

/// Largest `lhs − rhs` of the prefix inequality over sampled `y`, all prefixes.
#[allow(clippy::too_many_arguments)]
fn sampled_excess(
    p: &OvfPair,
    b: &Matrix,
    diff: &Matrix,
    alpha: f64,
    beta: f64,
    gamma: f64,
    samples: usize,
    seed: u64,
) -> f64 {
    let (r, d, m) = (p.block(), p.dim(), p.len());
    let mr = m * r;
    let mut rng = seeded_rng(seed);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..samples {
        let y: Vector = if k < mr { linops::basis_vector(mr, k) } else { random_vector(&mut rng, mr) };
        let (mut sd, mut sa, mut sb) = (Vector::zeros(d), Vector::zeros(d), Vector::zeros(d));
        let mut ynorm2 = 0.0;
        for n in 0..m {
            let yn = y.rows(n * r, r);
            sd += diff.rows(n * r, r).adjoint() * yn;
            sa += p.theta_a().rows(n * r, r).adjoint() * yn;
            sb += b.rows(n * r, r).adjoint() * yn;
            ynorm2 += yn.norm_squared();
            let excess = sd.norm() - (alpha * sa.norm() + beta * sb.norm() + gamma * ynorm2.sqrt());
            worst = worst.max(excess);
        }
    }
    worst
}
