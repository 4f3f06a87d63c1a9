//! Free noncommutative polynomials in `u`, `v`, `b_1, …, b_n` with exact
//! rational coefficients, for checking the commutator identity symbolically.

use crate::{CuntzError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    U,
    V,
    /// `b_i`, one-based.
    B(usize),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FreePoly {
    terms: BTreeMap<Vec<Sym>, BigRational>,
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

impl FreePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(vec![], c)
    }

    pub fn monomial(word: Vec<Sym>, c: BigRational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(word, c);
        }
        p
    }

    pub fn sym(s: Sym) -> Self {
        Self::monomial(vec![s], BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let x = out.terms.remove(w).unwrap_or_else(BigRational::zero) + c;
            if !x.is_zero() {
                out.terms.insert(w.clone(), x);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FreePoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out = out.add(&Self::monomial(w, c1 * c2));
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Square matrix of free polynomials, zero-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeMatrix {
    pub n: usize,
    pub entries: Vec<FreePoly>,
}

impl FreeMatrix {
    pub fn zeros(n: usize) -> Self {
        FreeMatrix { n, entries: vec![FreePoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, FreePoly::constant(BigRational::one()));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &FreePoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: FreePoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FreePoly::zero();
                for k in 0..n {
                    if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                        acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        FreeMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entry `(i, j)` multiplied by `f(i, j)`.
    pub fn scaled(&self, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let n = self.n;
        FreeMatrix { n, entries: (0..n * n).map(|k| self.entries[k].scale(&f(k / n, k % n))).collect() }
    }
}

/// `D` and `X` of the commutator lemma with symbolic `b_i`. The last column
/// of `D` carries `b_i u`; with `δ b_i u` there the identity fails.
pub fn lemma_matrices(n: usize, delta: &BigRational) -> Result<(FreeMatrix, FreeMatrix)> {
    if n < 2 {
        return Err(CuntzError::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if !(delta > &BigRational::zero()) {
        return Err(CuntzError::InvalidInput("delta must be positive".into()));
    }
    let (u, v) = (FreePoly::sym(Sym::U), FreePoly::sym(Sym::V));
    let inv = delta.recip();
    let mut d = FreeMatrix::zeros(n);
    let mut x = FreeMatrix::zeros(n);
    for i in 0..n {
        d.set(i, i, v.scale(&inv));
        if i + 1 < n {
            d.set(i + 1, i, u.scale(&inv));
            x.set(i + 1, i, FreePoly::constant(BigRational::one()));
            d.set(i, i + 1, FreePoly::constant(int(i as i64 + 1)));
        }
        let b = FreePoly::sym(Sym::B(i + 1));
        let last = d.get(i, n - 1).add(&b.mul(&u));
        d.set(i, n - 1, last);
        x.set(i, n - 1, b.scale(delta));
    }
    Ok((d, x))
}

/// Last column of `[D, X] − 1` as displayed in the lemma (rows `1..=n`).
pub fn lemma_last_column(n: usize, delta: &BigRational) -> Vec<FreePoly> {
    let (u, v) = (FreePoly::sym(Sym::U), FreePoly::sym(Sym::V));
    let b = |i: usize| if (1..=n).contains(&i) { FreePoly::sym(Sym::B(i)) } else { FreePoly::zero() };
    let ubn = u.commutator(&b(n));
    (1..=n)
        .map(|i| {
            let mut e = v.commutator(&b(i)).add(&u.commutator(&b(i - 1)));
            e = e.add(&b(i + 1).scale(&(int(i as i64) * delta)));
            e = e.add(&b(i).mul(&ubn).scale(delta));
            if i == n {
                e = e.sub(&FreePoly::constant(int(n as i64)));
            }
            e
        })
        .collect()
}

/// `S_μ = diag(μ^{n−1}, …, μ, 1)`; returns `(D_μ, X_μ) = (μ⁻¹ S D S⁻¹, μ S X S⁻¹)`.
pub fn rescale(d: &FreeMatrix, x: &FreeMatrix, mu: &BigRational) -> (FreeMatrix, FreeMatrix) {
    let n = d.n;
    let s = |i: usize| num_traits::pow(mu.clone(), n - 1 - i);
    let dm = d.scaled(|i, j| s(i) / s(j) / mu);
    let xm = x.scaled(|i, j| s(i) / s(j) * mu);
    (dm, xm)
}

/// Outcome of the symbolic check of `[D, X] − 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    /// Nonzero entries of `[D, X] − 1` outside the last column.
    pub off_column_nonzero: usize,
    /// Last column equals the displayed expressions term by term.
    pub last_column_matches: bool,
    /// `[D_μ, X_μ] − 1` is the last column scaled row-wise by `μ^{n−i}`.
    pub rescaled_matches: bool,
    /// Monomials in the last column of `[D, X] − 1`.
    pub last_column_terms: usize,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.off_column_nonzero == 0 && self.last_column_matches && self.rescaled_matches
    }
}

/// Coefficient-exact check of the commutator lemma and its rescaling.
pub fn structure_check(n: usize, delta: &BigRational, mu: &BigRational) -> Result<StructureReport> {
    if !(mu > &BigRational::zero()) {
        return Err(CuntzError::InvalidInput("mu must be positive".into()));
    }
    let (d, x) = lemma_matrices(n, delta)?;
    let id = FreeMatrix::identity(n);
    let defect = d.commutator(&x).sub(&id);
    let mut off = 0;
    for i in 0..n {
        for j in 0..n - 1 {
            if !defect.get(i, j).is_zero() {
                off += 1;
            }
        }
    }
    let expected = lemma_last_column(n, delta);
    let last_column_matches = (0..n).all(|i| defect.get(i, n - 1) == &expected[i]);
    let (dm, xm) = rescale(&d, &x, mu);
    let dmu = dm.commutator(&xm).sub(&id);
    let rescaled_matches = (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if j == n - 1 { expected[i].scale(&num_traits::pow(mu.clone(), n - 1 - i)) } else { FreePoly::zero() };
            dmu.get(i, j) == &want
        })
    });
    Ok(StructureReport {
        n,
        off_column_nonzero: off,
        last_column_matches,
        rescaled_matches,
        last_column_terms: (0..n).map(|i| defect.get(i, n - 1).len()).sum(),
    })
}

/// `1/(2000 n⁵)` as an exact rational.
pub fn delta_exact(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2000) * num_traits::pow(BigInt::from(n), 5))
}
