//! Fixed-point solution of `Tb = a + δF(b) + δG(b, b)` in the word algebra.

use crate::word::CuntzElement;
use crate::{CuntzError, Result};
use serde::Serialize;

/// Budgets and tolerances for [`solve_b`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Stop when successive iterates differ by less than this (coefficient sums).
    pub tol: f64,
    /// Word-count ceiling for any intermediate vector.
    pub max_words: usize,
    /// Ceiling on word products formed by a single multiplication.
    pub max_products: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iters: 60, tol: 1e-10, max_words: 200_000, max_products: 20_000_000 }
    }
}

/// `δ = 1/(2000 n⁵)`.
pub fn delta(n: usize) -> f64 {
    1.0 / (2000.0 * (n as f64).powi(5))
}

/// Smallest `k` with `q^k < tol·(1 − q)`, `q = 1 − 1/(8n²)`: the tail of the
/// Neumann series for `(1 − E)⁻¹` after `k` terms is then below `tol`.
pub fn neumann_terms(n: usize, tol: f64) -> usize {
    let gap = 1.0 / (8.0 * (n as f64).powi(2));
    ((tol * gap).ln() / (1.0 - gap).ln()).ceil().max(1.0) as usize
}

/// `δ(2‖F‖‖R‖ + 4r‖R‖²‖a‖)` with `‖F‖ ≤ n−1`, `‖R‖ ≤ 8√2n²`, `r = 2`, `‖a‖ = n`;
/// the fixed-point argument needs this below 1.
pub fn contraction_estimate(n: usize) -> f64 {
    let nf = n as f64;
    let r = 8.0 * 2f64.sqrt() * nf * nf;
    delta(n) * (2.0 * (nf - 1.0) * r + 4.0 * 2.0 * r * r * nf)
}

/// `T(b) = ([v, b_i] + [u, b_{i−1}])_{i=2..n}`; `b[k]` holds `b_{k+1}`.
pub fn apply_t(b: &[CuntzElement]) -> Vec<CuntzElement> {
    let (u, v) = (CuntzElement::u(), CuntzElement::v());
    (1..b.len()).map(|k| &v.commutator(&b[k]) + &u.commutator(&b[k - 1])).collect()
}

/// `L(x) = (−½x_i v* − ½x_{i+1}u*)_{i=1..n}` with `x_1 = x_{n+1} = 0`;
/// `x[k]` holds `x_{k+2}`.
pub fn apply_l(x: &[CuntzElement]) -> Vec<CuntzElement> {
    let n = x.len() + 1;
    let (us, vs) = (CuntzElement::u_star(), CuntzElement::v_star());
    let get = |i: usize| if (2..=n).contains(&i) { Some(&x[i - 2]) } else { None };
    (1..=n)
        .map(|i| {
            let mut e = CuntzElement::zero();
            if let Some(xi) = get(i) {
                e = &e - &(xi * &vs).scale_re(0.5);
            }
            if let Some(xn) = get(i + 1) {
                e = &e - &(xn * &us).scale_re(0.5);
            }
            e.compress()
        })
        .collect()
}

/// `E(x)_i = ½(v x_i v* + v x_{i+1} u* + u x_{i−1} v* + u x_i u*)`.
pub fn apply_e(x: &[CuntzElement]) -> Vec<CuntzElement> {
    let n = x.len() + 1;
    let (u, v) = (CuntzElement::u(), CuntzElement::v());
    let (us, vs) = (u.adjoint(), v.adjoint());
    let get = |i: usize| if (2..=n).contains(&i) { Some(&x[i - 2]) } else { None };
    let sand = |l: &CuntzElement, m: &CuntzElement, r: &CuntzElement| &(l * m) * r;
    (2..=n)
        .map(|i| {
            let mut e = CuntzElement::zero();
            let xi = &x[i - 2];
            e = &e + &sand(&v, xi, &vs);
            e = &e + &sand(&u, xi, &us);
            if let Some(xn) = get(i + 1) {
                e = &e + &sand(&v, xn, &us);
            }
            if let Some(xp) = get(i - 1) {
                e = &e + &sand(&u, xp, &vs);
            }
            e.scale_re(0.5).compress()
        })
        .collect()
}

/// `F(b) = (−2b_3, …, −(n−1)b_n, 0)`.
pub fn apply_f(b: &[CuntzElement]) -> Vec<CuntzElement> {
    let n = b.len();
    (2..=n).map(|i| if i < n { b[i].scale_re(-(i as f64)) } else { CuntzElement::zero() }).collect()
}

/// `G(b, c) = (−b_i[u, c_n])_{i=2..n}`.
pub fn apply_g(b: &[CuntzElement], c: &[CuntzElement]) -> Vec<CuntzElement> {
    let n = b.len();
    let k = CuntzElement::u().commutator(&c[n - 1]);
    (2..=n).map(|i| -&(&b[i - 1] * &k)).collect()
}

fn words(x: &[CuntzElement]) -> usize {
    x.iter().map(CuntzElement::len).sum()
}

fn sup_hi(x: &[CuntzElement]) -> f64 {
    x.iter().map(CuntzElement::hi_bound).fold(0.0, f64::max)
}

fn add_vec(a: &[CuntzElement], b: &[CuntzElement], s: f64) -> Vec<CuntzElement> {
    a.iter().zip(b).map(|(x, y)| x + &y.scale_re(s)).collect()
}

/// Why [`solve_b`] stopped without a certified solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveDiagnostics {
    pub n: usize,
    /// `"neumann"`, `"product"` or `"iteration"`.
    pub stage: String,
    pub message: String,
    pub iterations: usize,
    pub neumann_terms_required: usize,
    pub neumann_terms_applied: usize,
    pub words: usize,
    pub last_step_hi: Option<f64>,
    pub contraction_estimate: f64,
}

/// Certified fixed point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub n: usize,
    pub delta: f64,
    /// `b_1, …, b_n`.
    pub b: Vec<CuntzElement>,
    pub iterations: usize,
    pub neumann_terms: usize,
    pub last_step_hi: f64,
    /// Coefficient sums of `Tb − a − δF(b) − δG(b, b)`, equations `i = 2..n`.
    pub residual_per_equation: Vec<f64>,
    pub residual_hi: f64,
    pub b_hi: Vec<f64>,
    /// `max_i Σ|coefficients of b_i|`.
    pub b_norm_hi: f64,
    /// Same for the first iterate `R(a)`.
    pub b0_norm_hi: f64,
    /// `8√2 n³`.
    pub b0_bound: f64,
    /// `16√2 n³`.
    pub b_bound: f64,
    pub contraction_estimate: f64,
    pub words: usize,
}

impl Solution {
    pub fn within_bounds(&self) -> bool {
        self.b_norm_hi <= self.b_bound && self.b0_norm_hi <= self.b0_bound
    }
}

struct Ctx {
    n: usize,
    opts: SolveOptions,
    terms: usize,
    iterations: usize,
    last_step: Option<f64>,
}

impl Ctx {
    fn fail(&self, stage: &str, message: String, applied: usize, words: usize) -> CuntzError {
        CuntzError::NotConverged(Box::new(SolveDiagnostics {
            n: self.n,
            stage: stage.into(),
            message,
            iterations: self.iterations,
            neumann_terms_required: self.terms,
            neumann_terms_applied: applied,
            words,
            last_step_hi: self.last_step,
            contraction_estimate: contraction_estimate(self.n),
        }))
    }

    /// `L` applied to the truncated Neumann series `Σ_{j<K} E^j y`.
    fn right_inverse(&self, y: &[CuntzElement]) -> Result<Vec<CuntzElement>> {
        let mut term: Vec<CuntzElement> = y.iter().map(CuntzElement::compress).collect();
        let mut sum = term.clone();
        for j in 1..self.terms {
            if term.iter().all(CuntzElement::is_zero) {
                break;
            }
            term = apply_e(&term);
            sum = add_vec(&sum, &term, 1.0).iter().map(CuntzElement::compress).collect();
            let w = words(&term).max(words(&sum));
            if w > self.opts.max_words {
                return Err(self.fail(
                    "neumann",
                    format!("word budget {} exceeded after {j} of {} Neumann terms", self.opts.max_words, self.terms),
                    j,
                    w,
                ));
            }
        }
        Ok(apply_l(&sum))
    }

    fn rhs(&self, b: &[CuntzElement]) -> Result<Vec<CuntzElement>> {
        let n = self.n;
        let mut a = vec![CuntzElement::zero(); n - 1];
        a[n - 2] = CuntzElement::scalar(n as f64);
        let cost = b.iter().map(|x| x.product_cost(&b[n - 1]).saturating_mul(2)).max().unwrap_or(0);
        if cost > self.opts.max_products {
            return Err(self.fail(
                "product",
                format!("G(b, b) needs {cost} word products, budget {}", self.opts.max_products),
                self.terms,
                words(b),
            ));
        }
        let d = delta(n);
        let with_f = add_vec(&a, &apply_f(b), d);
        Ok(add_vec(&with_f, &apply_g(b, b), d).iter().map(CuntzElement::compress).collect())
    }
}

/// `Tb − a − δF(b) − δG(b, b)`, reduced.
pub fn residual(b: &[CuntzElement]) -> Vec<CuntzElement> {
    let n = b.len();
    let d = delta(n);
    let tb = apply_t(b);
    let f = apply_f(b);
    let g = apply_g(b, b);
    (0..n - 1)
        .map(|k| {
            let mut r = &(&tb[k] - &f[k].scale_re(d)) - &g[k].scale_re(d);
            if k == n - 2 {
                r = &r - &CuntzElement::scalar(n as f64);
            }
            r.compress()
        })
        .collect()
}

/// Iterates `b ← R(a + δF(b) + δG(b, b))` from `b = 0`, with
/// `R = L(1 − E)⁻¹` realised by a truncated Neumann series.
pub fn solve_b(n: usize, opts: SolveOptions) -> Result<Solution> {
    if n < 2 {
        return Err(CuntzError::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if !(opts.tol > 0.0) || opts.max_iters == 0 {
        return Err(CuntzError::InvalidInput("tol must be positive and max_iters nonzero".into()));
    }
    let mut ctx = Ctx { n, opts, terms: neumann_terms(n, opts.tol), iterations: 0, last_step: None };
    let mut b = vec![CuntzElement::zero(); n];
    let mut b0_hi = 0.0;
    loop {
        if ctx.iterations == opts.max_iters {
            return Err(ctx.fail(
                "iteration",
                format!("no convergence within {} iterations", opts.max_iters),
                ctx.terms,
                words(&b),
            ));
        }
        let rhs = ctx.rhs(&b)?;
        let next = ctx.right_inverse(&rhs)?;
        ctx.iterations += 1;
        let step = sup_hi(&next.iter().zip(&b).map(|(x, y)| (x - y).compress()).collect::<Vec<_>>());
        ctx.last_step = Some(step);
        if ctx.iterations == 1 {
            b0_hi = sup_hi(&next);
        }
        b = next;
        if step < opts.tol {
            break;
        }
    }
    let res = residual(&b);
    let residual_per_equation: Vec<f64> = res.iter().map(CuntzElement::hi_bound).collect();
    let b_hi: Vec<f64> = b.iter().map(CuntzElement::hi_bound).collect();
    let nf = n as f64;
    Ok(Solution {
        n,
        delta: delta(n),
        iterations: ctx.iterations,
        neumann_terms: ctx.terms,
        last_step_hi: ctx.last_step.unwrap_or(0.0),
        residual_hi: residual_per_equation.iter().copied().fold(0.0, f64::max),
        residual_per_equation,
        b_norm_hi: b_hi.iter().copied().fold(0.0, f64::max),
        b_hi,
        b0_norm_hi: b0_hi,
        b0_bound: 8.0 * 2f64.sqrt() * nf.powi(3),
        b_bound: 16.0 * 2f64.sqrt() * nf.powi(3),
        contraction_estimate: contraction_estimate(n),
        words: words(&b),
        b,
    })
}
