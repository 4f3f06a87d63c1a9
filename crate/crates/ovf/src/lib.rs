//! Weak operator-valued frames `(A_n, Ψ_n)` in `B(K^d, K^r)`.
//!
//! A pair is stored through its stacked analysis operators `θ_A` and `θ_Ψ`,
//! both `(m·r)×d`; block `n` holds `A_n` (resp. `Ψ_n`). The frame operator is
//! `S = θ_Ψ*θ_A = Σ Ψ_n*A_n`. At finite size every pair is factorable.

mod dilate;
mod group;
mod perturb;

pub use dilate::{dilate, DilateViolations, OvfDilation};
pub use group::{commutant_residual, gc1_residual, group_generated, FiniteGroup, GroupGenerated};
pub use perturb::{perturb_certificate, OvfPerturbMode, OvfPerturbReport, DEFAULT_SAMPLES};

use linops::{
    approx_eq, block_diag, hcat, inverse, max_abs, spectral_norm, tol, LinopsError, Matrix, MatrixJson, Vector, C64,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OvfError {
    #[error("frame operator is not invertible")]
    NotInvertible,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linops(LinopsError),
}

impl From<LinopsError> for OvfError {
    fn from(e: LinopsError) -> Self {
        match e {
            LinopsError::NotInvertible { .. } => OvfError::NotInvertible,
            other => OvfError::Linops(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, OvfError>;

/// Pair of operator families with `m` blocks of size `r×d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OvfPair {
    r: usize,
    theta_a: Matrix,
    theta_psi: Matrix,
}

impl OvfPair {
    /// Builds a pair from per-index blocks, each `r×d`.
    pub fn new(a: &[Matrix], psi: &[Matrix]) -> Result<Self> {
        if a.is_empty() {
            return Err(OvfError::InvalidInput("empty family".into()));
        }
        if a.len() != psi.len() {
            return Err(OvfError::ShapeMismatch(format!("{} A blocks vs {} Psi blocks", a.len(), psi.len())));
        }
        let (r, d) = a[0].shape();
        if r == 0 || d == 0 {
            return Err(OvfError::InvalidInput("blocks must be nonempty".into()));
        }
        for x in a.iter().chain(psi) {
            if x.shape() != (r, d) {
                return Err(OvfError::ShapeMismatch(format!(
                    "every block must be {r}x{d}, got {}x{}",
                    x.nrows(),
                    x.ncols()
                )));
            }
            linops::check_finite(x)?;
        }
        Ok(OvfPair { r, theta_a: stack(a), theta_psi: stack(psi) })
    }

    /// Builds a pair from stacked analysis operators `(m·r)×d`.
    pub fn from_stacked(r: usize, theta_a: Matrix, theta_psi: Matrix) -> Result<Self> {
        if r == 0 || theta_a.nrows() == 0 || theta_a.ncols() == 0 || theta_a.nrows() % r != 0 {
            return Err(OvfError::InvalidInput(format!(
                "stacked operator with {} rows is not a whole number of {r}-row blocks",
                theta_a.nrows()
            )));
        }
        if theta_psi.shape() != theta_a.shape() {
            return Err(OvfError::ShapeMismatch("theta_A and theta_Psi must have the same shape".into()));
        }
        linops::check_finite(&theta_a)?;
        linops::check_finite(&theta_psi)?;
        Ok(OvfPair { r, theta_a, theta_psi })
    }

    /// Dimension `d` of `H`.
    pub fn dim(&self) -> usize {
        self.theta_a.ncols()
    }

    /// Block size `r` (dimension of `H₀`).
    pub fn block(&self) -> usize {
        self.r
    }

    /// Number of blocks `m`.
    pub fn len(&self) -> usize {
        self.theta_a.nrows() / self.r
    }

    pub fn is_empty(&self) -> bool {
        self.theta_a.nrows() == 0
    }

    pub fn theta_a(&self) -> &Matrix {
        &self.theta_a
    }

    pub fn theta_psi(&self) -> &Matrix {
        &self.theta_psi
    }

    /// `A_n = L_n*θ_A`.
    pub fn a(&self, n: usize) -> Matrix {
        self.theta_a.rows(n * self.r, self.r).into_owned()
    }

    /// `Ψ_n = L_n*θ_Ψ`.
    pub fn psi(&self, n: usize) -> Matrix {
        self.theta_psi.rows(n * self.r, self.r).into_owned()
    }

    pub fn a_blocks(&self) -> Vec<Matrix> {
        (0..self.len()).map(|n| self.a(n)).collect()
    }

    pub fn psi_blocks(&self) -> Vec<Matrix> {
        (0..self.len()).map(|n| self.psi(n)).collect()
    }

    /// `S = θ_Ψ*θ_A`.
    pub fn frame_operator(&self) -> Matrix {
        self.theta_psi.adjoint() * &self.theta_a
    }

    /// `S = Σ Ψ_n*A_n`, accumulated block by block.
    pub fn frame_operator_blockwise(&self) -> Matrix {
        let d = self.dim();
        (0..self.len()).fold(Matrix::zeros(d, d), |acc, n| acc + self.psi(n).adjoint() * self.a(n))
    }

    pub fn frame_operator_inverse(&self) -> Result<Matrix> {
        Ok(inverse(&self.frame_operator())?)
    }

    /// `P = θ_A S⁻¹ θ_Ψ*`, an idempotent onto `θ_A(H)`.
    pub fn projection(&self) -> Result<Matrix> {
        Ok(&self.theta_a * self.frame_operator_inverse()? * self.theta_psi.adjoint())
    }

    pub fn is_parseval(&self) -> bool {
        let d = self.dim();
        approx_eq(&self.frame_operator(), &Matrix::identity(d, d), tol::PARSEVAL)
    }

    fn same_shape(&self, other: &OvfPair) -> Result<()> {
        if self.r != other.r || self.theta_a.shape() != other.theta_a.shape() {
            return Err(OvfError::ShapeMismatch(format!(
                "(m={}, r={}, d={}) vs (m={}, r={}, d={})",
                self.len(),
                self.r,
                self.dim(),
                other.len(),
                other.r,
                other.dim()
            )));
        }
        Ok(())
    }
}

fn stack(blocks: &[Matrix]) -> Matrix {
    let (r, d) = blocks[0].shape();
    let mut out = Matrix::zeros(r * blocks.len(), d);
    for (n, b) in blocks.iter().enumerate() {
        out.view_mut((n * r, 0), (r, d)).copy_from(b);
    }
    out
}

/// Block embedding `L_n: K^r → K^{m·r}`.
pub fn block_embedding(m: usize, r: usize, n: usize) -> Matrix {
    let mut l = Matrix::zeros(m * r, r);
    l.view_mut((n * r, 0), (r, r)).fill_with_identity();
    l
}

/// Result of [`check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckReport {
    pub is_ovf: bool,
    /// Always true at finite size.
    pub factorable: bool,
    /// Optimal lower bound `1/‖S⁻¹‖`, zero when `S` is singular.
    pub a: f64,
    /// Optimal upper bound `‖S‖`.
    pub b: f64,
}

pub fn check(p: &OvfPair) -> CheckReport {
    let s = p.frame_operator();
    let b = spectral_norm(&s);
    match inverse(&s) {
        Ok(si) => CheckReport { is_ovf: true, factorable: true, a: 1.0 / spectral_norm(&si), b },
        Err(_) => CheckReport { is_ovf: false, factorable: true, a: 0.0, b },
    }
}

/// `A_n = L_n*U`, `Ψ_n = L_n*V`, so that `S = V*U`.
pub fn from_factors(r: usize, u: Matrix, v: Matrix) -> Result<OvfPair> {
    let p = OvfPair::from_stacked(r, u, v)?;
    p.frame_operator_inverse()?;
    Ok(p)
}

/// Canonical dual `(A_nS⁻¹, Ψ_n(S⁻¹)*)`.
pub fn canonical_dual(p: &OvfPair) -> Result<OvfPair> {
    let si = p.frame_operator_inverse()?;
    OvfPair::from_stacked(p.r, &p.theta_a * &si, &p.theta_psi * si.adjoint())
}

/// `Σ Ψ_n*B_n = Σ Φ_n*A_n = I` within 1e-9.
pub fn duality_check(p: &OvfPair, q: &OvfPair) -> Result<bool> {
    p.same_shape(q)?;
    let id = Matrix::identity(p.dim(), p.dim());
    Ok(approx_eq(&(p.theta_psi.adjoint() * &q.theta_a), &id, tol::EQ)
        && approx_eq(&(q.theta_psi.adjoint() * &p.theta_a), &id, tol::EQ))
}

/// `Σ Ψ_n*B_n = Σ Φ_n*A_n = 0` within 1e-9, relative to the block sizes.
pub fn orthogonality_check(p: &OvfPair, q: &OvfPair) -> Result<bool> {
    p.same_shape(q)?;
    let scale = [&p.theta_a, &p.theta_psi, &q.theta_a, &q.theta_psi]
        .iter()
        .map(|x| spectral_norm(x))
        .fold(1.0, f64::max);
    let small = |x: &Matrix| max_abs(x) <= tol::EQ * scale * scale;
    Ok(small(&(p.theta_psi.adjoint() * &q.theta_a)) && small(&(q.theta_psi.adjoint() * &p.theta_a)))
}

/// Right multipliers with `B_n = A_nR_AB` and `Φ_n = Ψ_nR_ΨΦ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    pub r_ab: Matrix,
    pub r_psi_phi: Matrix,
    /// `max|P_{A,Ψ} − P_{B,Φ}|`.
    pub projection_residual: f64,
}

impl Similarity {
    /// `‖R_ΨΦ*R_AB − I‖`, zero exactly when a Parseval pair maps to a Parseval pair.
    pub fn parseval_residual(&self) -> f64 {
        linops::identity_residual(&(self.r_psi_phi.adjoint() * &self.r_ab))
    }
}

/// Returns `(S⁻¹θ_Ψ*θ_B, (S⁻¹)*θ_A*θ_Φ)` when the projections agree within 1e-8.
pub fn similarity(p: &OvfPair, q: &OvfPair) -> Result<Option<Similarity>> {
    p.same_shape(q)?;
    let pp = p.projection()?;
    let pq = match q.projection() {
        Ok(x) => x,
        Err(OvfError::NotInvertible) => return Ok(None),
        Err(e) => return Err(e),
    };
    let residual = max_abs(&(&pp - &pq));
    if !approx_eq(&pp, &pq, 1e-8) {
        return Ok(None);
    }
    let si = p.frame_operator_inverse()?;
    Ok(Some(Similarity {
        r_ab: &si * p.theta_psi.adjoint() * &q.theta_a,
        r_psi_phi: si.adjoint() * p.theta_a.adjoint() * &q.theta_psi,
        projection_residual: residual,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub riesz: bool,
    pub orthonormal: bool,
}

/// Riesz: `θ_AS⁻¹θ_Ψ* = I`. Orthonormal: Parseval and `A_nΨ_k* = δ_{nk}I`.
pub fn classify(p: &OvfPair) -> Result<Classification> {
    let proj = p.projection()?;
    let n = proj.nrows();
    let riesz = approx_eq(&proj, &Matrix::identity(n, n), tol::EQ);
    let cross = &p.theta_a * p.theta_psi.adjoint();
    let orthonormal = p.is_parseval() && approx_eq(&cross, &Matrix::identity(n, n), tol::EQ);
    Ok(Classification { riesz, orthonormal })
}

/// Individual hypothesis failures for [`interpolate`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct InterpolationViolations {
    pub first_not_parseval: bool,
    pub second_not_parseval: bool,
    pub not_orthogonal: bool,
    pub ce_plus_df_not_identity: bool,
}

/// `(A_nC + B_nD, Ψ_nE + Φ_nF)` for orthogonal Parseval pairs with `C*E + D*F = I`.
pub fn interpolate(p: &OvfPair, q: &OvfPair, c: &Matrix, d: &Matrix, e: &Matrix, f: &Matrix) -> Result<OvfPair> {
    p.same_shape(q)?;
    let n = p.dim();
    for x in [c, d, e, f] {
        linops::expect_shape(x, n, n)?;
    }
    let id = Matrix::identity(n, n);
    let v = InterpolationViolations {
        first_not_parseval: !p.is_parseval(),
        second_not_parseval: !q.is_parseval(),
        not_orthogonal: !orthogonality_check(p, q)?,
        ce_plus_df_not_identity: !approx_eq(&(c.adjoint() * e + d.adjoint() * f), &id, tol::EQ),
    };
    if v != InterpolationViolations::default() {
        return Err(OvfError::HypothesisViolated(format!("{v:?}")));
    }
    OvfPair::from_stacked(p.r, &p.theta_a * c + &q.theta_a * d, &p.theta_psi * e + &q.theta_psi * f)
}

/// Scalar form: `c̄e + d̄f = 1`.
pub fn interpolate_scalars(p: &OvfPair, q: &OvfPair, c: C64, d: C64, e: C64, f: C64) -> Result<OvfPair> {
    let n = p.dim();
    let id = Matrix::identity(n, n);
    interpolate(p, q, &(&id * c), &(&id * d), &(&id * e), &(&id * f))
}

/// `(A_n ⊕ B_n, Ψ_n ⊕ Φ_n)` on `H ⊕ H`; requires orthogonality.
pub fn direct_sum(p: &OvfPair, q: &OvfPair) -> Result<OvfPair> {
    p.same_shape(q)?;
    if !orthogonality_check(p, q)? {
        return Err(OvfError::HypothesisViolated("pairs are not orthogonal".into()));
    }
    OvfPair::from_stacked(p.r, hcat(&p.theta_a, &q.theta_a), hcat(&p.theta_psi, &q.theta_psi))
}

/// `S_P ⊕ S_Q`, the expected frame operator of [`direct_sum`].
pub fn direct_sum_expected(p: &OvfPair, q: &OvfPair) -> Matrix {
    block_diag(&p.frame_operator(), &q.frame_operator())
}

/// Both sides of the best-approximation identity for
/// `h = Σ A_n*y_n = Σ Ψ_n*z_n` with `y`, `z` stacked in `K^{m·r}`:
/// `Σ⟨y_n,z_n⟩` and `Σ⟨Ψ̃_nh,Ã_nh⟩ + Σ⟨y_n−Ψ̃_nh, z_n−Ã_nh⟩`.
pub fn best_approximation_sides(p: &OvfPair, y: &Vector, z: &Vector) -> Result<(C64, C64)> {
    let mr = p.theta_a.nrows();
    if y.len() != mr || z.len() != mr {
        return Err(OvfError::ShapeMismatch(format!("coefficient vectors must have length {mr}")));
    }
    let h = p.theta_a.adjoint() * y;
    let h2 = p.theta_psi.adjoint() * z;
    let scale = 1f64.max(h.norm());
    if (&h - &h2).norm() > tol::EQ * scale {
        return Err(OvfError::InvalidInput("y and z do not represent the same vector".into()));
    }
    let dual = canonical_dual(p)?;
    let ta = &dual.theta_a * &h;
    let tp = &dual.theta_psi * &h;
    let lhs = linops::inner(y, z);
    let rhs = linops::inner(&tp, &ta) + linops::inner(&(y - &tp), &(z - &ta));
    Ok((lhs, rhs))
}

/// Wire form: `{"d", "r", "A": [..], "Psi": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvfJson {
    pub d: usize,
    pub r: usize,
    #[serde(rename = "A")]
    pub a: Vec<MatrixJson>,
    #[serde(rename = "Psi")]
    pub psi: Vec<MatrixJson>,
}

impl OvfJson {
    pub fn to_pair(&self) -> Result<OvfPair> {
        let conv = |xs: &[MatrixJson]| -> Result<Vec<Matrix>> {
            xs.iter()
                .map(|m| {
                    let x = m.to_matrix()?;
                    linops::expect_shape(&x, self.r, self.d)?;
                    Ok(x)
                })
                .collect()
        };
        OvfPair::new(&conv(&self.a)?, &conv(&self.psi)?)
    }

    pub fn from_pair(p: &OvfPair) -> Self {
        OvfJson {
            d: p.dim(),
            r: p.block(),
            a: p.a_blocks().iter().map(MatrixJson::from_matrix).collect(),
            psi: p.psi_blocks().iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}
