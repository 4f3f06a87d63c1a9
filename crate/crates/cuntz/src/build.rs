use crate::matrix::CuntzMatrix;
use crate::solve::{solve_b, Solution, SolveOptions};
use crate::word::CuntzElement;
use crate::{CuntzError, Result};
use linops::{expect_shape, spectral_norm, Matrix, NormInterval, C64};
use serde::Serialize;

/// Depth of the concrete restriction used for lower norm bounds of `D_μ`, `X_μ`.
pub const LO_DEPTH: u32 = 5;

/// `D` and `X` of the commutator lemma for given `b_1, …, b_n`, with `b_i u`
/// (no factor `δ`) in the last column of `D`.
pub fn lemma_dx(b: &[CuntzElement], delta: f64) -> Result<(CuntzMatrix, CuntzMatrix)> {
    let n = b.len();
    let mut d = CuntzMatrix::zeros(n)?;
    let mut x = CuntzMatrix::zeros(n)?;
    let (u, v) = (CuntzElement::u(), CuntzElement::v());
    for i in 0..n {
        d.set(i, i, v.scale_re(1.0 / delta));
        if i + 1 < n {
            d.set(i + 1, i, u.scale_re(1.0 / delta));
            d.set(i, i + 1, CuntzElement::scalar((i + 1) as f64));
            x.set(i + 1, i, CuntzElement::one());
        }
        let last = d.get(i, n - 1) + &(&b[i] * &u);
        d.set(i, n - 1, last);
        x.set(i, n - 1, b[i].scale_re(delta));
    }
    Ok((d, x))
}

/// `(μ⁻¹ S_μ D S_μ⁻¹, μ S_μ X S_μ⁻¹)` with `S_μ = diag(μ^{n−1}, …, μ, 1)`.
pub fn rescale_dx(d: &CuntzMatrix, x: &CuntzMatrix, mu: f64) -> (CuntzMatrix, CuntzMatrix) {
    let n = d.size();
    let s = |i: usize| mu.powi((n - 1 - i) as i32);
    let dm = d.map(|i, j, e| e.scale_re(s(i) / s(j) / mu));
    let xm = x.map(|i, j, e| e.scale_re(s(i) / s(j) * mu));
    (dm, xm)
}

/// `D_μ`, `X_μ` and the certified bound on `‖[D_μ, X_μ] − 1‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DxBuild {
    pub n: usize,
    pub mu: f64,
    pub delta: f64,
    pub d: CuntzMatrix,
    pub x: CuntzMatrix,
    /// `[D_μ, X_μ] − 1`, reduced.
    pub defect: CuntzMatrix,
    /// Words left outside the last column of the defect.
    pub off_column_words: usize,
    /// `μ^{n−1}·Σ|coeff|` of `[v, b_1] + δb_2 + δb_1[u, b_n]`.
    pub leading_hi: f64,
    /// Column norm bound of rows `2..n` of the defect (the fixed-point residual).
    pub residual_part: f64,
    /// `leading_hi + residual_part`.
    pub error_bound: f64,
    pub solution: Solution,
}

pub fn build_dx_from(sol: &Solution, mu: f64) -> Result<DxBuild> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(CuntzError::InvalidInput(format!("mu must be positive, got {mu}")));
    }
    let (n, delta, b) = (sol.n, sol.delta, &sol.b);
    let (d0, x0) = lemma_dx(b, delta)?;
    let (d, x) = rescale_dx(&d0, &x0, mu);
    let defect = d.commutator(&x).sub(&CuntzMatrix::identity(n)?).compress();
    let off_column_words = (0..n).flat_map(|i| (0..n - 1).map(move |j| (i, j))).map(|(i, j)| defect.get(i, j).len()).sum();
    let u = CuntzElement::u();
    let lead = &(&CuntzElement::v().commutator(&b[0]) + &b[1].scale_re(delta)) + &(&b[0] * &u.commutator(&b[n - 1])).scale_re(delta);
    let leading_hi = mu.powi(n as i32 - 1) * lead.compress().hi_bound();
    let residual_part = (1..n).map(|i| defect.get(i, n - 1).hi_bound().powi(2)).sum::<f64>().sqrt();
    Ok(DxBuild {
        n,
        mu,
        delta,
        d,
        x,
        defect,
        off_column_words,
        leading_hi,
        residual_part,
        error_bound: leading_hi + residual_part,
        solution: sol.clone(),
    })
}

/// Solves for `b` and assembles `D_μ`, `X_μ`.
pub fn build_dx(n: usize, mu: f64, opts: SolveOptions) -> Result<DxBuild> {
    build_dx_from(&solve_b(n, opts)?, mu)
}

/// Norm enclosures against the corollary's explicit bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub mu: f64,
    pub d_norm: NormInterval,
    pub x_norm: NormInterval,
    /// `1/(μ²δ) + 1/(μδ) + (n−1) + Σ μ^{n−i−1}‖b_i‖` with `‖b_i‖` replaced by
    /// coefficient sums; the last column of `D_μ` is `μ^{n−i−1} b_i u`.
    pub d_formula: f64,
    /// `1 + δ Σ μ^{n−i+1}‖b_i‖`, likewise.
    pub x_formula: f64,
    pub error_bound: f64,
    pub b_norm_hi: f64,
    pub b_bound: f64,
    pub residual_hi: f64,
    pub off_column_words: usize,
}

impl BoundsReport {
    pub fn d_within_formula(&self) -> bool {
        self.d_norm.hi <= self.d_formula * (1.0 + 1e-12)
    }

    pub fn x_within_formula(&self) -> bool {
        self.x_norm.hi <= self.x_formula * (1.0 + 1e-12)
    }
}

pub fn bounds_from(build: &DxBuild) -> BoundsReport {
    let (n, mu, delta) = (build.n, build.mu, build.delta);
    let sol = &build.solution;
    let sum = |e: i32| -> f64 { (1..=n).map(|i| mu.powi(n as i32 - i as i32 + e) * sol.b_hi[i - 1]).sum() };
    BoundsReport {
        n,
        mu,
        d_norm: build.d.norm_bounds(LO_DEPTH),
        x_norm: build.x.norm_bounds(LO_DEPTH),
        d_formula: 1.0 / (mu * mu * delta) + 1.0 / (mu * delta) + (n as f64 - 1.0) + sum(-1),
        x_formula: 1.0 + delta * sum(1),
        error_bound: build.error_bound,
        b_norm_hi: sol.b_norm_hi,
        b_bound: sol.b_bound,
        residual_hi: sol.residual_hi,
        off_column_words: build.off_column_words,
    }
}

pub fn verify_bounds(n: usize, mu: f64, opts: SolveOptions) -> Result<BoundsReport> {
    Ok(bounds_from(&build_dx(n, mu, opts)?))
}

/// Decay test between consecutive sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCheck {
    pub n1: usize,
    pub n2: usize,
    pub ratio: f64,
    /// `(n₂³/n₁³)·2^{−(n₂−n₁)}`.
    pub predicted: f64,
    pub holds: bool,
}

/// `bound(n₂)/bound(n₁) ≤ slack·(n₂³/n₁³)·2^{−(n₂−n₁)}` for consecutive pairs.
pub fn decay_ratios(bounds: &[(usize, f64)], slack: f64) -> Vec<RatioCheck> {
    bounds
        .windows(2)
        .map(|w| {
            let ((n1, e1), (n2, e2)) = (w[0], w[1]);
            let predicted = (n2 as f64 / n1 as f64).powi(3) * 2f64.powi(-(n2 as i32 - n1 as i32));
            let ratio = e2 / e1;
            RatioCheck { n1, n2, ratio, predicted, holds: ratio <= slack * predicted }
        })
        .collect()
}

/// `‖[D, X] − I‖₂` for scalar matrices; at least 1 because `tr[D, X] = 0`.
pub fn finite_obstruction(d: &Matrix, x: &Matrix) -> Result<f64> {
    let n = d.nrows();
    if n == 0 {
        return Err(CuntzError::InvalidInput("matrices must be nonempty".into()));
    }
    expect_shape(d, n, n)?;
    expect_shape(x, n, n)?;
    let c = d * x - x * d - Matrix::from_diagonal_element(n, n, C64::new(1.0, 0.0));
    Ok(spectral_norm(&c))
}
