//! Sequence-space dilations, truncated to a finite horizon.

use crate::{
    first_embedding, identity, mat_eq, max_abs, pow, rank, require_square, zeros, DilationQuadruple, Field, Mat,
    PowerCheck, Result, VsError,
};
use serde::Serialize;

fn shift_down<F: Field>(d: usize, nblocks: usize) -> Mat<F> {
    let mut u = zeros::<F>(d * nblocks, d * nblocks);
    let id = identity::<F>(d);
    for i in 0..nblocks.saturating_sub(1) {
        u.view_mut(((i + 1) * d, i * d), (d, d)).copy_from(&id);
    }
    u
}

/// Standard dilation on sequences `(x_0, …, x_K)`: `Ix = (x, 0, …)`, `U` the
/// right shift, `P(x_n) = Σ I T^n x_n`. Exact for powers `n ≤ K`.
pub fn standard_dilation<F: Field>(t: &Mat<F>, horizon: usize) -> Result<DilationQuadruple<F>> {
    let d = require_square(t, "T")?;
    if horizon == 0 {
        return Err(VsError::InvalidInput("horizon must be at least 1".into()));
    }
    let nb = horizon + 1;
    let mut p = zeros::<F>(d * nb, d * nb);
    let mut tn = identity::<F>(d);
    for n in 0..nb {
        p.view_mut((0, n * d), (d, d)).copy_from(&tn);
        tn = &tn * t;
    }
    Ok(DilationQuadruple {
        space: format!("finitely supported sequences (x_0..x_{horizon}) in V"),
        dim: d,
        blocks: nb,
        embedding: first_embedding(d, nb),
        u: shift_down(d, nb),
        u_inv: None,
        p,
        horizon: Some(horizon),
    })
}

impl<F: Field> DilationQuadruple<F> {
    /// Rank of `[I, UI, …, U^{blocks−1}I]`; equal to `dim·blocks` when the
    /// vectors `U^nIx` span the truncated space.
    pub fn krylov_rank(&self) -> usize {
        let (rows, d) = self.embedding.shape();
        let mut k = zeros::<F>(rows, d * self.blocks);
        let mut cur = self.embedding.clone();
        for n in 0..self.blocks {
            k.view_mut((0, n * d), (rows, d)).copy_from(&cur);
            cur = &self.u * cur;
        }
        rank(&k)
    }
}

/// Window `[−w, w]` of the doubly infinite banded operator with `T` at
/// `(0, 0)` and identities on the superdiagonal, with its inverse window.
#[derive(Debug, Clone, PartialEq)]
pub struct SzNagyWindow<F: Field> {
    pub w: usize,
    pub dim: usize,
    pub u: Mat<F>,
    /// Identities on the subdiagonal and `−T` at `(1, −1)`.
    pub v: Mat<F>,
    /// Largest power certified on this window, `w − 1`.
    pub horizon: usize,
}

pub fn banded_sznagy<F: Field>(t: &Mat<F>, w: usize) -> Result<SzNagyWindow<F>> {
    let d = require_square(t, "T")?;
    if w < 2 {
        return Err(VsError::InvalidInput(format!("window must be at least 2, got {w}")));
    }
    let nb = 2 * w + 1;
    let wi = w as isize;
    let at = |i: isize| ((i + wi) as usize) * d;
    let id = identity::<F>(d);
    let mut u = zeros::<F>(nb * d, nb * d);
    let mut v = zeros::<F>(nb * d, nb * d);
    u.view_mut((at(0), at(0)), (d, d)).copy_from(t);
    for n in -wi..wi {
        u.view_mut((at(n), at(n + 1)), (d, d)).copy_from(&id);
    }
    for n in -wi + 1..=wi {
        v.view_mut((at(n), at(n - 1)), (d, d)).copy_from(&id);
    }
    v.view_mut((at(1), at(-1)), (d, d)).copy_from(&(-t.clone()));
    Ok(SzNagyWindow { w, dim: d, u, v, horizon: w - 1 })
}

impl<F: Field> SzNagyWindow<F> {
    fn center(&self) -> usize {
        self.w * self.dim
    }

    /// `P U^n|_V − T^n`, refused outside `1..=w−1`.
    pub fn compression(&self, t: &Mat<F>, n: usize) -> Result<PowerCheck> {
        if n == 0 || n > self.horizon {
            return Err(VsError::HorizonExceeded { n, horizon: self.horizon });
        }
        let (c, d) = (self.center(), self.dim);
        let un = pow(&self.u, n);
        let diff = un.view((c, c), (d, d)).into_owned() - pow(t, n);
        Ok(PowerCheck { k: n, residual: max_abs(&diff), holds: crate::is_zero(&diff) })
    }

    /// `UV` and `VU` restricted to the interior indices `[−w+1, w−1]`,
    /// compared with the identity.
    pub fn interior_inverse(&self) -> (f64, bool) {
        let d = self.dim;
        let lo = d;
        let len = (2 * self.w - 1) * d;
        let id = identity::<F>(len);
        let uv = (&self.u * &self.v).view((lo, lo), (len, len)).into_owned();
        let vu = (&self.v * &self.u).view((lo, lo), (len, len)).into_owned();
        let res = max_abs(&(&uv - &id)).max(max_abs(&(&vu - &id)));
        (res, mat_eq(&uv, &id) && mat_eq(&vu, &id))
    }
}

/// Doubly indexed model `(x_{n,m})_{0 ≤ n, m ≤ H}` for a commuting pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AndoGrid<F: Field> {
    pub dim: usize,
    pub horizon: usize,
    pub embedding: Mat<F>,
    /// Shift in the first index.
    pub u: Mat<F>,
    /// Shift in the second index.
    pub v: Mat<F>,
    /// `P(x_{n,m}) = Σ I T^n S^m x_{n,m}`.
    pub p: Mat<F>,
}

/// One entry of the Ando grid: `P U^n V^m I − I T^n S^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub n: usize,
    pub m: usize,
    pub residual: f64,
    pub holds: bool,
}

pub fn ando_like<F: Field>(t: &Mat<F>, s: &Mat<F>, horizon: usize) -> Result<AndoGrid<F>> {
    let d = require_square(t, "T")?;
    if s.shape() != (d, d) {
        return Err(VsError::ShapeMismatch(format!("S must be {d}x{d}")));
    }
    if horizon == 0 {
        return Err(VsError::InvalidInput("horizon must be at least 1".into()));
    }
    if !mat_eq(&(t * s), &(s * t)) {
        return Err(VsError::HypothesisViolated("T and S do not commute".into()));
    }
    let side = horizon + 1;
    let nb = side * side;
    let idx = |n: usize, m: usize| (n * side + m) * d;
    let id = identity::<F>(d);
    let mut u = zeros::<F>(nb * d, nb * d);
    let mut v = zeros::<F>(nb * d, nb * d);
    let mut p = zeros::<F>(nb * d, nb * d);
    for n in 0..side {
        for m in 0..side {
            if n + 1 < side {
                u.view_mut((idx(n + 1, m), idx(n, m)), (d, d)).copy_from(&id);
            }
            if m + 1 < side {
                v.view_mut((idx(n, m + 1), idx(n, m)), (d, d)).copy_from(&id);
            }
            p.view_mut((0, idx(n, m)), (d, d)).copy_from(&(pow(t, n) * pow(s, m)));
        }
    }
    Ok(AndoGrid { dim: d, horizon, embedding: first_embedding(d, nb), u, v, p })
}

impl<F: Field> AndoGrid<F> {
    /// Every `(n, m)` with `n + m ≤ H`.
    pub fn verify(&self, t: &Mat<F>, s: &Mat<F>) -> Vec<GridCheck> {
        let mut out = Vec::new();
        let mut vm = self.embedding.clone();
        for m in 0..=self.horizon {
            let mut unvm = vm.clone();
            for n in 0..=self.horizon - m {
                let lhs = &self.p * &unvm;
                let rhs = &self.embedding * pow(t, n) * pow(s, m);
                let diff = lhs - rhs;
                out.push(GridCheck { n, m, residual: max_abs(&diff), holds: crate::is_zero(&diff) });
                unvm = &self.u * unvm;
            }
            vm = &self.v * vm;
        }
        out.sort_by_key(|c| (c.n, c.m));
        out
    }

    /// Prepending a zero column to `U` gives the same array as prepending a
    /// zero row to `V`; on the model this is `VU = UV`.
    pub fn structural_identity_holds(&self) -> bool {
        mat_eq(&(&self.v * &self.u), &(&self.u * &self.v))
    }

    pub fn p_idempotent(&self) -> bool {
        mat_eq(&(&self.p * &self.p), &self.p)
    }
}

/// Lift `R(x_n) = (Sx_n)` between standard dilations, with its three residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwineLift<F: Field> {
    pub r: Mat<F>,
    /// `|U₁R − RU₂|`.
    pub shift_residual: f64,
    /// `|RP₂ − P₁R|`.
    pub projection_residual: f64,
    /// `|RI₂ − I₁S|`.
    pub embedding_residual: f64,
    pub holds: bool,
}

/// Requires `T₁S = ST₂`, with `S: V₂ → V₁`.
pub fn intertwine_lift<F: Field>(t1: &Mat<F>, t2: &Mat<F>, s: &Mat<F>, horizon: usize) -> Result<IntertwineLift<F>> {
    let d1 = require_square(t1, "T1")?;
    let d2 = require_square(t2, "T2")?;
    if s.shape() != (d1, d2) {
        return Err(VsError::ShapeMismatch(format!("S must be {d1}x{d2}")));
    }
    if !mat_eq(&(t1 * s), &(s * t2)) {
        return Err(VsError::HypothesisViolated("T1 S != S T2".into()));
    }
    let q1 = standard_dilation(t1, horizon)?;
    let q2 = standard_dilation(t2, horizon)?;
    let nb = horizon + 1;
    let mut r = zeros::<F>(nb * d1, nb * d2);
    for n in 0..nb {
        r.view_mut((n * d1, n * d2), (d1, d2)).copy_from(s);
    }
    let a = &q1.u * &r - &r * &q2.u;
    let b = &r * &q2.p - &q1.p * &r;
    let c = &r * &q2.embedding - &q1.embedding * s;
    let holds = crate::is_zero(&a) && crate::is_zero(&b) && crate::is_zero(&c);
    Ok(IntertwineLift {
        shift_residual: max_abs(&a),
        projection_residual: max_abs(&b),
        embedding_residual: max_abs(&c),
        holds,
        r,
    })
}
