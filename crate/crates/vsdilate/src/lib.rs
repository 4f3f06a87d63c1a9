//! Dilations of linear maps on finite-dimensional vector spaces.
//!
//! Block matrices are generic over a [`Field`]; the rational field gives
//! exact identities. Infinite sequence spaces are modelled by finitely
//! supported sequences on an explicit horizon, and each construction states
//! the range of powers on which its identity is exact.

mod field;
mod halmos;
mod sequence;

pub use field::{
    block, blocks, from_int_rows, identity, inverse, is_zero, mat_eq, max_abs, parse_matrix, pow, rank, ratio,
    require_square, to_string_rows, trace, zeros, Field, Mat, MatDebug, RationalMatrix, FLOAT_TOL,
};
pub use halmos::{halmos, n_dilation, non_similarity_witness, schur_halmos, NonSimilarityWitness, SchurCase};
pub use sequence::{
    ando_like, banded_sznagy, intertwine_lift, standard_dilation, AndoGrid, IntertwineLift, SzNagyWindow,
};

pub use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VsError {
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("power {n} is outside the verified horizon 1..={horizon}")]
    HorizonExceeded { n: usize, horizon: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, VsError>;

/// One row of a verification table: `P U^k I` against `I T^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCheck {
    pub k: usize,
    /// Largest entry of the difference.
    pub residual: f64,
    /// Exact zero in rational mode; within [`FLOAT_TOL`] in float mode.
    pub holds: bool,
}

impl PowerCheck {
    fn from_diff<F: Field>(k: usize, diff: &Mat<F>) -> Self {
        PowerCheck { k, residual: max_abs(diff), holds: is_zero(diff) }
    }
}

/// `(W, I, U, P)` on `W = V^blocks`, with `U⁻¹` when it is known in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationQuadruple<F: Field> {
    /// Human-readable description of `W`.
    pub space: String,
    /// Dimension of `V`.
    pub dim: usize,
    /// Number of copies of `V` in `W`.
    pub blocks: usize,
    /// Embedding `I: V → W`.
    pub embedding: Mat<F>,
    pub u: Mat<F>,
    pub u_inv: Option<Mat<F>>,
    /// Idempotent with range `I(V)`.
    pub p: Mat<F>,
    /// Powers `k` with `I T^k = P U^k I` certified; `None` means every power.
    pub horizon: Option<usize>,
}

impl<F: Field> DilationQuadruple<F> {
    /// `P U^k I − I T^k` for the given `T`.
    pub fn power_check(&self, t: &Mat<F>, k: usize) -> PowerCheck {
        let mut cur = self.embedding.clone();
        for _ in 0..k {
            cur = &self.u * cur;
        }
        let lhs = &self.p * cur;
        let rhs = &self.embedding * pow(t, k);
        PowerCheck::from_diff(k, &(lhs - rhs))
    }

    /// Power checks for `k = 1..=n`.
    pub fn table(&self, t: &Mat<F>, n: usize) -> Vec<PowerCheck> {
        (1..=n).map(|k| self.power_check(t, k)).collect()
    }

    /// `max(|UU⁻¹ − I|, |U⁻¹U − I|)`, when an inverse is stored.
    pub fn inverse_residual(&self) -> Option<f64> {
        let v = self.u_inv.as_ref()?;
        let id = identity::<F>(self.u.nrows());
        Some(max_abs(&(&self.u * v - &id)).max(max_abs(&(v * &self.u - &id))))
    }

    /// `UU⁻¹ = U⁻¹U = I` (exactly in rational mode).
    pub fn inverse_holds(&self) -> Option<bool> {
        let v = self.u_inv.as_ref()?;
        let id = identity::<F>(self.u.nrows());
        Some(mat_eq(&(&self.u * v), &id) && mat_eq(&(v * &self.u), &id))
    }

    /// `P² = P`.
    pub fn p_idempotent(&self) -> bool {
        mat_eq(&(&self.p * &self.p), &self.p)
    }

    /// `P(W) = I(V)`: equal ranks and `P I = I`.
    pub fn p_range_matches(&self) -> bool {
        rank(&self.p) == rank(&self.embedding) && mat_eq(&(&self.p * &self.embedding), &self.embedding)
    }
}

/// First-coordinate embedding `V → V^blocks`.
pub(crate) fn first_embedding<F: Field>(d: usize, nblocks: usize) -> Mat<F> {
    let mut e = zeros::<F>(d * nblocks, d);
    e.view_mut((0, 0), (d, d)).copy_from(&identity::<F>(d));
    e
}

/// First-coordinate projection on `V^blocks`.
pub(crate) fn first_projection<F: Field>(d: usize, nblocks: usize) -> Mat<F> {
    let mut p = zeros::<F>(d * nblocks, d * nblocks);
    p.view_mut((0, 0), (d, d)).copy_from(&identity::<F>(d));
    p
}
