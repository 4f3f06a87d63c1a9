use crate::{frame_bounds, HframeError, HilbertFrame, Result};
use linops::{random_vector, seeded_rng, Vector};
use serde::Serialize;

/// Default number of sampled coefficient sequences in general mode.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbMode {
    /// Quadratic closeness `c = Σ‖τ_n − ω_n‖² < a`.
    Quadratic,
    /// Three-parameter closeness, checked on sampled coefficient sequences.
    General { alpha: f64, beta: f64, gamma: f64, samples: usize, seed: u64 },
}

impl PerturbMode {
    pub fn general(alpha: f64, beta: f64, gamma: f64, seed: u64) -> Self {
        PerturbMode::General { alpha, beta, gamma, samples: DEFAULT_SAMPLES, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbReport {
    /// Quadratic mode: `c < a`. General mode: no sampled sequence violated the hypothesis.
    pub valid: bool,
    /// `true` in general mode: a passing sample does not prove the hypothesis.
    pub falsification_only: bool,
    /// `c` in quadratic mode.
    pub c: Option<f64>,
    /// Largest `lhs − rhs` over the sample in general mode (≤ 0 when it passes).
    pub worst_excess: Option<f64>,
    pub samples: usize,
    /// Predicted bounds for the perturbed family.
    pub predicted: (f64, f64),
    /// Bounds of the unperturbed frame.
    pub original: (f64, f64),
}

pub fn perturb_certificate(f: &HilbertFrame, omega: &HilbertFrame, mode: PerturbMode) -> Result<PerturbReport> {
    if f.dim() != omega.dim() || f.len() != omega.len() {
        return Err(HframeError::InvalidInput("families must have the same dim and length".into()));
    }
    let fb = frame_bounds(f);
    if !fb.is_frame {
        return Err(HframeError::NotAFrame { rank: linops::rank(f.synthesis()), dim: f.dim() });
    }
    let (a, b) = (fb.a, fb.b);
    let diff = f.synthesis() - omega.synthesis();
    match mode {
        PerturbMode::Quadratic => {
            let c = diff.norm_squared();
            let valid = c < a;
            let predicted = (a * (1.0 - (c / a).sqrt()).powi(2), b * (1.0 + (c / b).sqrt()).powi(2));
            Ok(PerturbReport {
                valid,
                falsification_only: false,
                c: Some(c),
                worst_excess: None,
                samples: 0,
                predicted,
                original: (a, b),
            })
        }
        PerturbMode::General { alpha, beta, gamma, samples, seed } => {
            if alpha < 0.0 || beta < 0.0 || gamma < 0.0 {
                return Err(HframeError::HypothesisViolated("alpha, beta, gamma must be nonnegative".into()));
            }
            let lead = alpha + gamma / a.sqrt();
            if lead.max(beta) >= 1.0 {
                return Err(HframeError::HypothesisViolated(format!(
                    "max(alpha + gamma/sqrt(a), beta) = {} >= 1",
                    lead.max(beta)
                )));
            }
            let m = f.len();
            let mut rng = seeded_rng(seed);
            let mut worst = f64::NEG_INFINITY;
            for k in 0..samples {
                let c: Vector = if k < m { linops::basis_vector(m, k) } else { random_vector(&mut rng, m) };
                let lhs = (&diff * &c).norm();
                let rhs = alpha * (f.synthesis() * &c).norm() + gamma * c.norm() + beta * (omega.synthesis() * &c).norm();
                worst = worst.max(lhs - rhs);
            }
            let slack = 1e-12 * (1.0 + f.synthesis().norm());
            let predicted = (
                a * (1.0 - (alpha + beta + gamma / a.sqrt()) / (1.0 + beta)).powi(2),
                b * (1.0 + (alpha + beta + gamma / b.sqrt()) / (1.0 - beta)).powi(2),
            );
            Ok(PerturbReport {
                valid: worst <= slack,
                falsification_only: true,
                c: None,
                worst_excess: Some(worst),
                samples,
                predicted,
                original: (a, b),
            })
        }
    }
}
