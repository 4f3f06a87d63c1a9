//! Semi-inner product on `ℓ^p(K^d)` and the subset identities for p-ASFs
//! whose functionals are represented as `f_n = [·, ω_n]`.

use linops::{
    identity_residual, inverse, re, spectral_norm, LinopsError, Matrix, MatrixJson, Vector, C64,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SipError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("frame operator is not invertible")]
    NotInvertible,
    #[error("pair is not Parseval: ‖S − I‖ = {0:e}")]
    NotParseval(f64),
    #[error(transparent)]
    Linops(LinopsError),
}

impl From<LinopsError> for SipError {
    fn from(e: LinopsError) -> Self {
        match e {
            LinopsError::NotInvertible { .. } => SipError::NotInvertible,
            other => SipError::Linops(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, SipError>;

/// Parseval test tolerance on `‖S − I‖₂`.
pub const PARSEVAL_TOL: f64 = 1e-8;

/// The exponent `p > 1` of the ambient `ℓ^p` space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SipContext {
    p: f64,
}

impl SipContext {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(SipError::InvalidInput(format!("p must be finite and > 1, got {p}")));
        }
        Ok(SipContext { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `[x, y] = Σ x_n conj(y_n)|y_n|^{p−2} / ‖y‖_p^{p−2}`, and `[x, 0] = 0`.
    pub fn sip(&self, x: &Vector, y: &Vector) -> C64 {
        let p = self.p;
        let ny = linops::pnorm(y.iter(), p);
        if ny == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p == 2.0 {
            return x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum();
        }
        let s: C64 = x
            .iter()
            .zip(y.iter())
            .filter(|(_, b)| b.norm() != 0.0)
            .map(|(a, b)| a * b.conj() * b.norm().powf(p - 2.0))
            .sum();
        s / ny.powf(p - 2.0)
    }

    /// `‖x‖_p`, which equals `√[x, x]`.
    pub fn norm(&self, x: &Vector) -> f64 {
        linops::pnorm(x.iter(), self.p)
    }

    /// Row vector of the functional `[·, y]`.
    pub fn functional(&self, y: &Vector) -> Vec<C64> {
        let d = y.len();
        (0..d).map(|j| self.sip(&linops::basis_vector(d, j), y)).collect()
    }
}

/// `[x, y]` in `ℓ^p`.
pub fn sip(x: &Vector, y: &Vector, ctx: &SipContext) -> C64 {
    ctx.sip(x, y)
}

/// Pair `(ω_n, τ_n)` with functionals `f_n = [·, ω_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SipPasf {
    ctx: SipContext,
    omega: Matrix,
    tau: Matrix,
    f: Matrix,
}

impl SipPasf {
    /// `omega` and `tau` are d×m, column n holding `ω_n` and `τ_n`.
    pub fn new(p: f64, omega: Matrix, tau: Matrix) -> Result<Self> {
        let ctx = SipContext::new(p)?;
        if omega.shape() != tau.shape() {
            return Err(SipError::InvalidInput(format!(
                "ω is {}x{} but τ is {}x{}",
                omega.nrows(),
                omega.ncols(),
                tau.nrows(),
                tau.ncols()
            )));
        }
        if omega.is_empty() {
            return Err(SipError::InvalidInput("empty family".into()));
        }
        linops::check_finite(&omega)?;
        linops::check_finite(&tau)?;
        let (d, m) = omega.shape();
        let mut f = Matrix::zeros(m, d);
        for n in 0..m {
            let row = ctx.functional(&omega.column(n).into_owned());
            for (j, v) in row.into_iter().enumerate() {
                f[(n, j)] = v;
            }
        }
        Ok(SipPasf { ctx, omega, tau, f })
    }

    /// Replaces `τ` by `S₀⁻¹τ` where `S₀` is the frame operator of the seed, giving `S = I`.
    pub fn parseval_from_seed(p: f64, omega: Matrix, tau_seed: Matrix) -> Result<Self> {
        let seed = SipPasf::new(p, omega, tau_seed)?;
        let s0_inv = inverse(&seed.frame_operator())?;
        let tau = &s0_inv * &seed.tau;
        SipPasf::new(p, seed.omega, tau)
    }

    pub fn ctx(&self) -> &SipContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn len(&self) -> usize {
        self.omega.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.ncols() == 0
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    /// Analysis matrix: row n is `[·, ω_n]`.
    pub fn analysis(&self) -> &Matrix {
        &self.f
    }

    pub fn omega_n(&self, n: usize) -> Vector {
        self.omega.column(n).into_owned()
    }

    pub fn tau_n(&self, n: usize) -> Vector {
        self.tau.column(n).into_owned()
    }

    pub fn frame_operator(&self) -> Matrix {
        &self.tau * &self.f
    }

    /// `S_M x = Σ_{n∈M} [x, ω_n] τ_n`, assembled on the standard basis.
    pub fn partial_operator(&self, subset: &[usize]) -> Result<Matrix> {
        let d = self.dim();
        let mut s = Matrix::zeros(d, d);
        for &n in subset {
            self.check_index(n)?;
            s += self.tau.column(n) * self.f.row(n);
        }
        Ok(s)
    }

    pub fn parseval_residual_norm(&self) -> f64 {
        identity_residual(&self.frame_operator())
    }

    pub fn is_parseval(&self) -> bool {
        self.parseval_residual_norm() <= PARSEVAL_TOL
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.len() {
            return Err(SipError::InvalidInput(format!("index {n} out of range 0..{}", self.len())));
        }
        Ok(())
    }

    fn check_vector(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(SipError::InvalidInput(format!("vector has length {}, expected {}", x.len(), self.dim())));
        }
        Ok(())
    }

    fn require_parseval(&self) -> Result<()> {
        let r = self.parseval_residual_norm();
        if r > PARSEVAL_TOL {
            return Err(SipError::NotParseval(r));
        }
        Ok(())
    }

    /// Sorted subset and its complement, both 0-based.
    pub fn split(&self, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut inside = vec![false; self.len()];
        for &n in subset {
            self.check_index(n)?;
            inside[n] = true;
        }
        let ms = (0..self.len()).filter(|&n| inside[n]).collect();
        let mc = (0..self.len()).filter(|&n| !inside[n]).collect();
        Ok((ms, mc))
    }

    fn sip(&self, x: &Vector, y: &Vector) -> C64 {
        self.ctx.sip(x, y)
    }

    /// `Σ_{n∈M} [x, ω_n][τ_n, x]`.
    fn diagonal_sum(&self, idx: &[usize], x: &Vector) -> C64 {
        idx.iter().map(|&n| self.sip(x, &self.omega_n(n)) * self.sip(&self.tau_n(n), x)).sum()
    }

    /// `Σ_{n,k∈M} [x, ω_n][τ_n, ω_k][τ_k, x]`.
    fn double_sum(&self, idx: &[usize], x: &Vector) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for &n in idx {
            let a = self.sip(x, &self.omega_n(n));
            for &k in idx {
                s += a * self.sip(&self.tau_n(n), &self.omega_n(k)) * self.sip(&self.tau_n(k), x);
            }
        }
        s
    }
}

/// Both sides of the general subset identity.
///
/// `[S_M x, ω̃_n]` is evaluated as `[S⁻¹S_M x, ω_n]` and `[τ̃_n, S_M† x]` as
/// `[S_M S⁻¹τ_n, x]`, so no generalized adjoint is formed.
pub fn general_identity_sides(pf: &SipPasf, subset: &[usize], x: &Vector) -> Result<(C64, C64)> {
    pf.check_vector(x)?;
    let (ms, mc) = pf.split(subset)?;
    let s_inv = inverse(&pf.frame_operator())?;
    let side = |idx: &[usize]| -> Result<C64> {
        let sm = pf.partial_operator(idx)?;
        let u = &s_inv * (&sm * x);
        let mut dual_sum = C64::new(0.0, 0.0);
        for n in 0..pf.len() {
            let tilde_tau = &s_inv * pf.tau_n(n);
            dual_sum += pf.sip(&u, &pf.omega_n(n)) * pf.sip(&(&sm * tilde_tau), x);
        }
        Ok(pf.diagonal_sum(idx, x) - dual_sum)
    };
    Ok((side(&ms)?, side(&mc)?))
}

/// `|LHS − RHS|` of the general subset identity with the canonical dual.
pub fn general_identity_residual(pf: &SipPasf, subset: &[usize], x: &Vector) -> Result<f64> {
    let (l, r) = general_identity_sides(pf, subset, x)?;
    Ok((l - r).norm())
}

/// Both sides of the Parseval subset identity.
pub fn parseval_identity_sides(pf: &SipPasf, subset: &[usize], x: &Vector) -> Result<(C64, C64)> {
    pf.require_parseval()?;
    pf.check_vector(x)?;
    let (ms, mc) = pf.split(subset)?;
    let side = |idx: &[usize]| pf.diagonal_sum(idx, x) - pf.double_sum(idx, x);
    Ok((side(&ms), side(&mc)))
}

pub fn parseval_identity_residual(pf: &SipPasf, subset: &[usize], x: &Vector) -> Result<f64> {
    let (l, r) = parseval_identity_sides(pf, subset, x)?;
    Ok((l - r).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    /// `[(S_M − ½I)²x, x]`.
    pub condition_value: C64,
    /// Real part ≥ −1e−10 and imaginary part negligible.
    pub condition_holds: bool,
    /// Real part of `Σ_{M}[x,ω_n][τ_n,x] + Σ_{Mᶜ×Mᶜ}[x,ω_n][τ_n,ω_k][τ_k,x]`.
    pub value: f64,
    /// Imaginary part of the same expression.
    pub value_imag: f64,
    /// `0.75 ‖x‖_p²`.
    pub threshold: f64,
    pub passes: bool,
}

/// Subset lower bound `≥ (3/4)‖x‖²` for a Parseval pair, conditional on
/// `[(S_M − ½I)²x, x] ≥ 0`.
pub fn lower_bound_check(pf: &SipPasf, subset: &[usize], x: &Vector) -> Result<LowerBoundCheck> {
    pf.require_parseval()?;
    pf.check_vector(x)?;
    let (ms, mc) = pf.split(subset)?;
    let d = pf.dim();
    let shifted = pf.partial_operator(&ms)? - Matrix::identity(d, d) * re(0.5);
    let condition_value = pf.sip(&(&shifted * (&shifted * x)), x);
    let nx2 = pf.ctx.norm(x).powi(2);
    let condition_holds =
        condition_value.re >= -1e-10 && condition_value.im.abs() <= 1e-10 * nx2.max(1.0);
    let v = pf.diagonal_sum(&ms, x) + pf.double_sum(&mc, x);
    let threshold = 0.75 * nx2;
    let passes = !condition_holds || v.re >= threshold - 1e-9;
    Ok(LowerBoundCheck { condition_value, condition_holds, value: v.re, value_imag: v.im, threshold, passes })
}

/// `‖S_M + S_{Mᶜ}² − S_{Mᶜ} − S_M²‖₂` for a Parseval pair.
pub fn operator_identity_residual(pf: &SipPasf, subset: &[usize]) -> Result<f64> {
    pf.require_parseval()?;
    let (ms, mc) = pf.split(subset)?;
    let sm = pf.partial_operator(&ms)?;
    let smc = pf.partial_operator(&mc)?;
    Ok(spectral_norm(&(&sm + &smc * &smc - &smc - &sm * &sm)))
}

/// `‖(U − V) − (U² − V²)‖₂` for operators with `U + V = I`.
pub fn complementary_square_residual(u: &Matrix, v: &Matrix) -> Result<f64> {
    if !u.is_square() || u.shape() != v.shape() {
        return Err(SipError::InvalidInput("U and V must be square of equal size".into()));
    }
    if identity_residual(&(u + v)) > 1e-9 * spectral_norm(u).max(1.0) {
        return Err(SipError::InvalidInput("U + V is not the identity".into()));
    }
    Ok(spectral_norm(&((u - v) - (u * u - v * v))))
}

/// `{"p": .., "omega": Matrix, "tau": Matrix}` with d×m matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipJson {
    pub p: f64,
    pub omega: MatrixJson,
    pub tau: MatrixJson,
}

impl SipJson {
    pub fn to_pair(&self) -> Result<SipPasf> {
        SipPasf::new(self.p, self.omega.to_matrix()?, self.tau.to_matrix()?)
    }

    pub fn from_pair(pf: &SipPasf) -> Self {
        SipJson {
            p: pf.ctx.p(),
            omega: MatrixJson::from_matrix(&pf.omega),
            tau: MatrixJson::from_matrix(&pf.tau),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use linops::basis_vector;

    #[test]
    fn zero_second_slot() {
        let c = SipContext::new(1.5).unwrap();
        let x = basis_vector(3, 0);
        assert_eq!(c.sip(&x, &Vector::zeros(3)), C64::new(0.0, 0.0));
    }

    #[test]
    fn disjoint_support() {
        let c = SipContext::new(3.0).unwrap();
        assert_eq!(c.sip(&basis_vector(2, 0), &basis_vector(2, 1)), C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_p_at_most_one() {
        assert!(SipContext::new(1.0).is_err());
        assert!(SipContext::new(f64::NAN).is_err());
    }

    #[test]
    fn functional_of_basis_vector() {
        let c = SipContext::new(1.5).unwrap();
        let f = c.functional(&(basis_vector(3, 1) * re(2.0)));
        assert!((f[1] - C64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(f[0], C64::new(0.0, 0.0));
    }
}
