//! Word algebra over two Cuntz isometries `u, v` with
//! `u*u = v*v = uu* + vv* = 1` and `u*v = v*u = 0`, the `A ≅ M_2(A)`
//! isomorphism, and matrices `D, X ∈ M_n(A)` with `[D, X]` close to `1`.
//!
//! Elements are finite tables of normal-form words `wσ*`. Products reduce
//! with `u*u = v*v = 1`, `u*v = v*u = 0`; the unit relation `uu* + vv* = 1`
//! is used only by [`CuntzElement::compress`], and the concrete
//! representation `u e_k = e_{2k}`, `v e_k = e_{2k+1}` on `ℓ²(Z≥0)` decides
//! equalities that need it. Norms are certified as intervals.

mod build;
pub mod free;
mod matrix;
mod solve;
mod word;

pub use build::{
    bounds_from, build_dx, build_dx_from, decay_ratios, finite_obstruction, lemma_dx, rescale_dx, verify_bounds,
    BoundsReport, DxBuild, RatioCheck, LO_DEPTH,
};
pub use matrix::{phi, psi, CuntzMatrix};
pub use solve::{
    apply_e, apply_f, apply_g, apply_l, apply_t, contraction_estimate, delta, neumann_terms, residual, solve_b,
    Solution, SolveDiagnostics, SolveOptions,
};
pub use word::{basis, CuntzElement, Letter, SparseVec, TermJson, Word, MAX_LO_DEPTH, PRUNE};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CuntzError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("fixed-point iteration did not converge ({}): {}", .0.stage, .0.message)]
    NotConverged(Box<SolveDiagnostics>),
    #[error(transparent)]
    Linops(#[from] linops::LinopsError),
}

pub type Result<T> = std::result::Result<T, CuntzError>;
