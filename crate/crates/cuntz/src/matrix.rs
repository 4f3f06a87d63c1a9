use crate::word::{basis, CuntzElement};
use crate::{CuntzError, Result};
use linops::{spectral_norm, Matrix, NormInterval, C64};
use serde::{Deserialize, Serialize};

/// `n×n` matrix over the word algebra, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuntzMatrix {
    n: usize,
    entries: Vec<CuntzElement>,
}

impl CuntzMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CuntzError::InvalidInput(format!("matrix size must be at least 2, got {n}")));
        }
        Ok(CuntzMatrix { n, entries: vec![CuntzElement::zero(); n * n] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, CuntzElement::one());
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> &CuntzElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: CuntzElement) {
        self.entries[i * self.n + j] = e;
    }

    pub fn map(&self, f: impl Fn(usize, usize, &CuntzElement) -> CuntzElement) -> Self {
        let n = self.n;
        CuntzMatrix { n, entries: (0..n * n).map(|k| f(k / n, k % n, &self.entries[k])).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.map(|i, j, e| e + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.map(|i, j, e| e - other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        self.map(|i, j, _| {
            let mut acc = CuntzElement::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn compress(&self) -> Self {
        self.map(|_, _, e| e.compress())
    }

    /// Spectral norm of the matrix of entry coefficient sums; bounds the norm
    /// in `M_n(A)` from above.
    pub fn hi_bound(&self) -> f64 {
        let n = self.n;
        spectral_norm(&Matrix::from_fn(n, n, |i, j| C64::new(self.get(i, j).hi_bound(), 0.0)))
    }

    /// Norm of the compression to `(span{e_0, …, e_{2^depth−1}})^n`, a lower bound.
    pub fn lo_bound(&self, depth: u32) -> f64 {
        let (n, b) = (self.n, 1usize << depth);
        let mut m = Matrix::zeros(n * b, n * b);
        for j in 0..n {
            for k in 0..b {
                for i in 0..n {
                    for (row, c) in self.get(i, j).apply(&basis(k as u128)) {
                        if row < b as u128 {
                            m[(i * b + row as usize, j * b + k)] += c;
                        }
                    }
                }
            }
        }
        spectral_norm(&m)
    }

    pub fn norm_bounds(&self, depth: u32) -> NormInterval {
        let hi = self.hi_bound();
        NormInterval { lo: self.lo_bound(depth).min(hi), hi }
    }

    /// Words with nonzero coefficient summed over all entries.
    pub fn word_count(&self) -> usize {
        self.entries.iter().map(CuntzElement::len).sum()
    }
}

/// `φ(x) = [[u*xu, u*xv], [v*xu, v*xv]]`.
pub fn phi(x: &CuntzElement) -> CuntzMatrix {
    let (u, v) = (CuntzElement::u(), CuntzElement::v());
    let (us, vs) = (u.adjoint(), v.adjoint());
    let mut m = CuntzMatrix::zeros(2).expect("size 2");
    m.set(0, 0, &(&us * x) * &u);
    m.set(0, 1, &(&us * x) * &v);
    m.set(1, 0, &(&vs * x) * &u);
    m.set(1, 1, &(&vs * x) * &v);
    m
}

/// `ψ([[a, b], [c, d]]) = uau* + ubv* + vcu* + vdv*`.
pub fn psi(m: &CuntzMatrix) -> Result<CuntzElement> {
    if m.size() != 2 {
        return Err(CuntzError::InvalidInput(format!("psi needs a 2x2 matrix, got {0}x{0}", m.size())));
    }
    let (u, v) = (CuntzElement::u(), CuntzElement::v());
    let (us, vs) = (u.adjoint(), v.adjoint());
    let t = |l: &CuntzElement, x: &CuntzElement, r: &CuntzElement| &(l * x) * r;
    Ok(t(&u, m.get(0, 0), &us) + t(&u, m.get(0, 1), &vs) + t(&v, m.get(1, 0), &us) + t(&v, m.get(1, 1), &vs))
}
