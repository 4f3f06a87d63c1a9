use crate::{OvfError, OvfPair, Result};
use linops::{approx_eq, complement_basis, hcat, max_abs, range_basis, spectral_norm, Matrix};
use serde::Serialize;

/// Tolerance for the dilation preconditions.
const DILATE_TOL: f64 = 1e-8;

/// Individual precondition failures for [`dilate`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DilateViolations {
    pub not_parseval: bool,
    /// `θ_A(H) ≠ θ_Ψ(H)`, measured by the sine of the largest principal angle.
    pub ranges_differ: bool,
    pub projection_not_hermitian: bool,
    pub projection_not_idempotent: bool,
}

/// Orthonormal dilation on `H₁ = K^d ⊕ θ_A(H)^⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct OvfDilation {
    pub pair: OvfPair,
    /// Isometry `h ↦ h ⊕ 0`, `(d+k)×d`.
    pub embedding: Matrix,
    /// Orthonormal basis `Q` of `θ_A(H)^⊥` used as coordinates on the second summand.
    pub complement: Matrix,
    /// `max_n max(‖B_n J − A_n‖, ‖Φ_n J − Ψ_n‖)`.
    pub restriction_residual: f64,
}

/// Sine of the largest principal angle between two column spaces, or 1 when
/// the dimensions differ.
pub fn principal_angle_gap(x: &Matrix, y: &Matrix) -> f64 {
    let qx = range_basis(x);
    let qy = range_basis(y);
    if qx.ncols() != qy.ncols() {
        return 1.0;
    }
    if qx.ncols() == 0 {
        return 0.0;
    }
    let n = qx.nrows();
    spectral_norm(&((Matrix::identity(n, n) - &qx * qx.adjoint()) * qy))
}

/// `B_n(h⊕g) = A_nh + L_n*P⊥g`, `Φ_n(h⊕g) = Ψ_nh + L_n*P⊥g`.
pub fn dilate(p: &OvfPair) -> Result<OvfDilation> {
    let mr = p.theta_a().nrows();
    let d = p.dim();
    let id = Matrix::identity(mr, mr);
    let mut v = DilateViolations { not_parseval: !p.is_parseval(), ..Default::default() };
    v.ranges_differ = principal_angle_gap(p.theta_a(), p.theta_psi()) > DILATE_TOL;
    let proj = p.theta_a() * p.theta_psi().adjoint();
    v.projection_not_hermitian = !approx_eq(&proj, &proj.adjoint(), DILATE_TOL);
    v.projection_not_idempotent = !approx_eq(&(&proj * &proj), &proj, DILATE_TOL);
    if v != DilateViolations::default() {
        return Err(OvfError::HypothesisViolated(format!("{v:?}")));
    }
    let q = complement_basis(&range_basis(p.theta_a()));
    let perp = (&id - &proj) * &q;
    let pair = OvfPair::from_stacked(p.block(), hcat(p.theta_a(), &perp), hcat(p.theta_psi(), &perp))?;
    let k = q.ncols();
    let mut embedding = Matrix::zeros(d + k, d);
    embedding.view_mut((0, 0), (d, d)).fill_with_identity();
    let restriction_residual = max_abs(&(pair.theta_a() * &embedding - p.theta_a()))
        .max(max_abs(&(pair.theta_psi() * &embedding - p.theta_psi())));
    Ok(OvfDilation { pair, embedding, complement: q, restriction_residual })
}
