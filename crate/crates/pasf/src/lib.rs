//! p-approximate Schauder frames (p-ASF) on `K^d` with the `ℓ^p` norm.
//!
//! A pair is stored as the analysis matrix `F` (m×d, row n is the functional
//! `f_n`) and the synthesis matrix `T` (d×m, column n is `τ_n`). The frame
//! operator is `S = TF`.

mod dilate;
mod perturb;

pub use dilate::{dilate, Dilation};
pub use perturb::{perturb_certificate, PasfPerturbMode, PasfPerturbReport};

use linops::{
    approx_eq, conjugate_exponent, inverse, max_abs, opnorm_interval, rank, singular_values, spectral_norm, tol, LinopsError, Matrix,
    MatrixJson, NormInterval,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PasfError {
    #[error("frame operator is not invertible")]
    NotInvertible,
    #[error("validity operator is singular: the family is not a dual")]
    NotADual,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linops(LinopsError),
}

impl From<LinopsError> for PasfError {
    fn from(e: LinopsError) -> Self {
        match e {
            LinopsError::NotInvertible { .. } => PasfError::NotInvertible,
            other => PasfError::Linops(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, PasfError>;

/// Finite p-approximate Schauder frame candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct PAsf {
    p: f64,
    f: Matrix,
    t: Matrix,
}

impl PAsf {
    /// Builds a pair from `F` (m×d) and `T` (d×m).
    pub fn new(p: f64, f: Matrix, t: Matrix) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(PasfError::InvalidInput(format!("p must be >= 1, got {p}")));
        }
        let (m, d) = f.shape();
        if m == 0 || d == 0 {
            return Err(PasfError::InvalidInput("empty family".into()));
        }
        if t.shape() != (d, m) {
            return Err(PasfError::ShapeMismatch(format!(
                "F is {m}x{d}, so T must be {d}x{m}, got {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        linops::check_finite(&f)?;
        linops::check_finite(&t)?;
        Ok(PAsf { p, f, t })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        conjugate_exponent(self.p)
    }

    /// Dimension of `X = K^d`.
    pub fn dim(&self) -> usize {
        self.f.ncols()
    }

    /// Family length.
    pub fn len(&self) -> usize {
        self.f.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.f.nrows() == 0
    }

    /// Analysis matrix `θ_f`.
    pub fn analysis(&self) -> &Matrix {
        &self.f
    }

    /// Synthesis matrix `θ_τ`.
    pub fn synthesis(&self) -> &Matrix {
        &self.t
    }

    /// `S = θ_τ θ_f`.
    pub fn frame_operator(&self) -> Matrix {
        &self.t * &self.f
    }

    pub fn frame_operator_inverse(&self) -> Result<Matrix> {
        Ok(inverse(&self.frame_operator())?)
    }

    /// `P = θ_f S⁻¹ θ_τ`, an idempotent on the coefficient space.
    pub fn projection(&self) -> Result<Matrix> {
        Ok(&self.f * self.frame_operator_inverse()? * &self.t)
    }

    fn same_shape(&self, other: &PAsf) -> Result<()> {
        if self.p != other.p || self.f.shape() != other.f.shape() {
            return Err(PasfError::ShapeMismatch(format!(
                "(p={}, m={}, d={}) vs (p={}, m={}, d={})",
                self.p,
                self.len(),
                self.dim(),
                other.p,
                other.len(),
                other.dim()
            )));
        }
        Ok(())
    }
}

/// Result of [`check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckReport {
    pub is_pasf: bool,
    /// Enclosure of the optimal lower bound `1/‖S⁻¹‖`.
    pub a: NormInterval,
    /// Enclosure of the optimal upper bound `‖S‖`.
    pub b: NormInterval,
}

pub fn check(pf: &PAsf) -> CheckReport {
    let s = pf.frame_operator();
    let b = opnorm_interval(&s, pf.p).expect("valid p");
    match inverse(&s) {
        Ok(si) => CheckReport { is_pasf: true, a: opnorm_interval(&si, pf.p).expect("valid p").recip(), b },
        Err(_) => CheckReport { is_pasf: false, a: NormInterval::exact(0.0), b },
    }
}

/// `f_n = ζ_n U`, `τ_n = V e_n`, so `S = VU`.
pub fn from_shift_operators(u: Matrix, v: Matrix, p: f64) -> Result<PAsf> {
    let pf = PAsf::new(p, u, v)?;
    pf.frame_operator_inverse()?;
    Ok(pf)
}

/// Canonical dual `(f_n S⁻¹, S⁻¹τ_n)`.
pub fn canonical_dual(pf: &PAsf) -> Result<PAsf> {
    let si = pf.frame_operator_inverse()?;
    PAsf::new(pf.p, &pf.f * &si, &si * &pf.t)
}

fn is_close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    approx_eq(a, b, tol)
}

/// `θ_τ θ_g = I` and `θ_ω θ_f = I` within 1e-9.
pub fn dual_check(pf: &PAsf, q: &PAsf) -> Result<bool> {
    pf.same_shape(q)?;
    let id = Matrix::identity(pf.dim(), pf.dim());
    Ok(is_close(&(&pf.t * &q.f), &id, tol::EQ) && is_close(&(&q.t * &pf.f), &id, tol::EQ))
}

/// Dual parametrized by `U` (m×d) and `V` (d×m):
/// `g_n = f_nS⁻¹ + ζ_nU − f_nS⁻¹θ_τU`, `ω_n = S⁻¹τ_n + Ve_n − Vθ_fS⁻¹τ_n`.
pub fn dual_from_operators(pf: &PAsf, u: &Matrix, v: &Matrix) -> Result<PAsf> {
    let (m, d) = (pf.len(), pf.dim());
    if u.shape() != (m, d) || v.shape() != (d, m) {
        return Err(PasfError::ShapeMismatch("U must be m x d and V must be d x m".into()));
    }
    let si = pf.frame_operator_inverse()?;
    let fsi = &pf.f * &si;
    let g = &fsi + u - &fsi * &pf.t * u;
    let w = &si * &pf.t + v - v * &fsi * &pf.t;
    let correction = v * u - v * &fsi * &pf.t * u;
    let validity = &si + &correction;
    // measured against the summands: cancellation can leave a tiny but well-conditioned matrix
    let scale = spectral_norm(&si) + spectral_norm(&correction);
    let smallest = singular_values(&validity).last().copied().unwrap_or(0.0);
    if !(smallest > tol::INV_RATIO * scale) || inverse(&validity).is_err() {
        return Err(PasfError::NotADual);
    }
    PAsf::new(pf.p, g, w)
}

/// Transition operators `(T_fg, T_τω)` with `g_n = f_n T_fg` and `ω_n = T_τω τ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    pub t_fg: Matrix,
    pub t_tau_omega: Matrix,
    /// `max|P_{f,τ} − P_{g,ω}|`.
    pub projection_residual: f64,
}

/// Returns the transition pair when both projections agree within 1e-8.
pub fn similarity(pf: &PAsf, q: &PAsf) -> Result<Option<Similarity>> {
    pf.same_shape(q)?;
    let pp = pf.projection()?;
    let pq = match q.projection() {
        Ok(x) => x,
        Err(PasfError::NotInvertible) => return Ok(None),
        Err(e) => return Err(e),
    };
    let residual = max_abs(&(&pp - &pq));
    if !is_close(&pp, &pq, 1e-8) {
        return Ok(None);
    }
    let si = pf.frame_operator_inverse()?;
    Ok(Some(Similarity {
        t_fg: &si * &pf.t * &q.f,
        t_tau_omega: &q.t * &pf.f * &si,
        projection_residual: residual,
    }))
}

/// `θ_τ θ_g = 0` and `θ_ω θ_f = 0` within 1e-9.
pub fn orthogonality_check(pf: &PAsf, q: &PAsf) -> Result<bool> {
    pf.same_shape(q)?;
    let scale = 1f64.max(max_abs(&pf.f)).max(max_abs(&q.f)).max(max_abs(&pf.t)).max(max_abs(&q.t));
    let small = |x: &Matrix| max_abs(x) <= tol::EQ * scale * scale;
    Ok(small(&(&pf.t * &q.f)) && small(&(&q.t * &pf.f)))
}

/// Individual hypothesis failures for [`interpolate`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct InterpolationViolations {
    pub first_not_parseval: bool,
    pub second_not_parseval: bool,
    pub not_orthogonal: bool,
    pub ca_plus_db_not_identity: bool,
}

/// `(f_nA + g_nB, Cτ_n + Dω_n)` for orthogonal Parseval pairs with `CA + DB = I`.
pub fn interpolate(pf: &PAsf, q: &PAsf, a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<PAsf> {
    pf.same_shape(q)?;
    let n = pf.dim();
    for x in [a, b, c, d] {
        linops::expect_shape(x, n, n)?;
    }
    let id = Matrix::identity(n, n);
    let v = InterpolationViolations {
        first_not_parseval: !is_close(&pf.frame_operator(), &id, tol::PARSEVAL),
        second_not_parseval: !is_close(&q.frame_operator(), &id, tol::PARSEVAL),
        not_orthogonal: !orthogonality_check(pf, q)?,
        ca_plus_db_not_identity: !is_close(&(c * a + d * b), &id, tol::EQ),
    };
    if v != InterpolationViolations::default() {
        return Err(PasfError::HypothesisViolated(format!("{v:?}")));
    }
    PAsf::new(pf.p, &pf.f * a + &q.f * b, c * &pf.t + d * &q.t)
}

/// p-approximate Riesz property `θ_f S⁻¹ θ_τ = I_m` within 1e-9.
pub fn riesz_check(pf: &PAsf) -> Result<bool> {
    let p = pf.projection()?;
    Ok(is_close(&p, &Matrix::identity(pf.len(), pf.len()), tol::EQ))
}

/// Expansion of a weak reconstruction pair to one with `S = I`.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// Original pair followed by the appended pairs `(g_n, (I − S)ω_n)`.
    pub combined: PAsf,
    /// Appended vectors `(I − S_P)ω_n` as columns.
    pub appended: Matrix,
    /// Number of appended vectors that are nonzero.
    pub nonzero_appended: usize,
    /// `rank(λI − S_P)` for the requested `λ`.
    pub n_min: usize,
}

pub fn expand_to_asf(weak: &PAsf, q: &PAsf, lambda: f64) -> Result<Expansion> {
    if q.dim() != weak.dim() {
        return Err(PasfError::ShapeMismatch("reconstruction family must live on the same space".into()));
    }
    let d = weak.dim();
    let id = Matrix::identity(d, d);
    if !is_close(&q.frame_operator(), &id, tol::EQ) {
        return Err(PasfError::InvalidInput("second family does not reconstruct (S_Q != I)".into()));
    }
    let s = weak.frame_operator();
    let appended = (&id - &s) * &q.t;
    let fc = linops::vcat(&weak.f, &q.f);
    let tc = linops::hcat(&weak.t, &appended);
    let scale = 1f64.max(max_abs(&s));
    let nonzero_appended =
        appended.column_iter().filter(|c| c.iter().any(|z| z.norm() > tol::EQ * scale)).count();
    let n_min = rank(&(&id * linops::re(lambda) - &s));
    Ok(Expansion { combined: PAsf::new(weak.p, fc, tc)?, appended, nonzero_appended, n_min })
}

/// Wire form `{"p": 2.0, "F": Matrix, "T": Matrix}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PasfJson {
    pub p: f64,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "T")]
    pub t: MatrixJson,
}

impl PasfJson {
    pub fn to_pasf(&self) -> Result<PAsf> {
        PAsf::new(self.p, self.f.to_matrix()?, self.t.to_matrix()?)
    }

    pub fn from_pasf(pf: &PAsf) -> Self {
        PasfJson { p: pf.p, f: MatrixJson::from_matrix(&pf.f), t: MatrixJson::from_matrix(&pf.t) }
    }
}

/// Truncated shifts on `K^d → K^{d+1}` and back: `R x = (0, x)`, `L y = (y_2, …, y_{d+1})`.
pub fn shift_pair(d: usize) -> (Matrix, Matrix) {
    let r = Matrix::from_fn(d + 1, d, |i, j| linops::re(if i == j + 1 { 1.0 } else { 0.0 }));
    let l = r.transpose();
    (r, l)
}

/// The pair `f_n = ζ_nR`, `τ_n = Le_n` with `m = d + 1` coefficients.
pub fn shift_example(d: usize, p: f64) -> Result<PAsf> {
    let (r, l) = shift_pair(d);
    from_shift_operators(r, l, p)
}
