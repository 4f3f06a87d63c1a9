//! Dense complex linear algebra shared by the frame crates.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Operator norms
//! for general `p` are reported as certified intervals, since computing them
//! exactly is intractable.

mod decomp;
mod json;
mod norms;
mod random;

pub use decomp::{
    complement_basis, hermitian_extremes, inv_sqrt_psd, inverse, is_hermitian, pinv, projector_range, range_basis,
    range_basis_tol, rank, rank_tol, singular_values, spectral_norm,
};
pub use json::MatrixJson;
pub use norms::{
    conjugate_exponent, opnorm_interval, opnorm_interval_pq, opnorm_interval_pq_seeded,
    opnorm_interval_seeded, pnorm, vec_pnorm, NormInterval, P_INF,
};
pub use random::{random_matrix, random_real_matrix, random_vector, seeded_rng, Rng64};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

/// Complex scalar used everywhere in the workspace.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type Matrix = DMatrix<C64>;
/// Dense complex column vector.
pub type Vector = DVector<C64>;

/// Default tolerances.
pub mod tol {
    /// Relative equality tolerance for matrix identities.
    pub const EQ: f64 = 1e-9;
    /// Invertibility threshold on `σmin / σmax`.
    pub const INV_RATIO: f64 = 1e-10;
    /// Relative singular value cutoff for rank decisions.
    pub const RANK: f64 = 1e-10;
    /// Admission test for Parseval-only statements.
    pub const PARSEVAL: f64 = 1e-8;
}

/// Errors raised by the kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinopsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not invertible (sigma_min/sigma_max = {ratio:e})")]
    NotInvertible { ratio: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
}

pub type Result<T> = std::result::Result<T, LinopsError>;

/// Shorthand for a real complex number.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Builds a complex matrix from real row-major rows.
pub fn from_real_rows(rows: &[&[f64]]) -> Matrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    Matrix::from_fn(r, c, |i, j| re(rows[i][j]))
}

/// Builds a complex column vector from real entries.
pub fn real_vector(xs: &[f64]) -> Vector {
    Vector::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
}

/// Largest entry modulus.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative entrywise comparison: `max|a-b| <= tol * max(1, max|a|, max|b|)`.
pub fn approx_eq(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = 1f64.max(max_abs(a)).max(max_abs(b));
    max_abs(&(a - b)) <= tol * scale
}

/// Spectral-norm distance of `a` from the identity.
pub fn identity_residual(a: &Matrix) -> f64 {
    let n = a.nrows();
    spectral_norm(&(a - Matrix::identity(n, a.ncols())))
}

/// Checks that every entry is finite.
pub fn check_finite(a: &Matrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinopsError::InvalidInput("matrix has non-finite entries".into()))
    }
}

/// Requires `a` to have the given shape.
pub fn expect_shape(a: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if a.shape() == (rows, cols) {
        Ok(())
    } else {
        Err(LinopsError::ShapeMismatch {
            expected: format!("{rows}x{cols}"),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        })
    }
}

/// Block diagonal matrix `diag(a, b)`.
pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = b.shape();
    let mut out = Matrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((r1, c1), (r2, c2)).copy_from(b);
    out
}

/// Horizontal concatenation `[a, b]`.
pub fn hcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.nrows(), b.nrows(), "hcat row mismatch");
    let mut out = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Vertical concatenation `[a; b]`.
pub fn vcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.ncols(), b.ncols(), "vcat column mismatch");
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Standard basis vector `e_k` of length `n`.
pub fn basis_vector(n: usize, k: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[k] = re(1.0);
    v
}

/// Hermitian inner product `<x, y> = Σ x_i conj(y_i)`.
pub fn inner(x: &Vector, y: &Vector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}
