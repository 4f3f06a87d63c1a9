use crate::{CuntzError, Result};
use linops::{spectral_norm, Matrix, NormInterval, C64};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients at or below this modulus are dropped.
pub const PRUNE: f64 = 1e-14;

/// Largest `depth` accepted by [`CuntzElement::norm_bounds`]; the restriction
/// matrix has `2^depth` columns.
pub const MAX_LO_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    U,
    V,
}

impl Letter {
    fn as_char(self) -> char {
        match self {
            Letter::U => 'u',
            Letter::V => 'v',
        }
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| match c {
            'u' => Ok(Letter::U),
            'v' => Ok(Letter::V),
            _ => Err(CuntzError::InvalidInput(format!("unknown letter '{c}' in word '{s}'"))),
        })
        .collect()
}

fn letters_str(ls: &[Letter]) -> String {
    ls.iter().map(|l| l.as_char()).collect()
}

/// Normal-form word `w σ*`: all unstarred letters precede the starred ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

impl Word {
    pub fn one() -> Self {
        Word { left: vec![], right: vec![] }
    }

    /// `Word::parse("uv", "u")` is `uv·u*`.
    pub fn parse(left: &str, right: &str) -> Result<Self> {
        Ok(Word { left: parse_letters(left)?, right: parse_letters(right)? })
    }

    pub fn len(&self) -> usize {
        self.left.len().max(self.right.len())
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn adjoint(&self) -> Word {
        Word { left: self.right.clone(), right: self.left.clone() }
    }

    /// `(w₁σ₁*)(w₂σ₂*)` reduced by `u*u = v*v = 1`, `u*v = v*u = 0`.
    pub fn mul(&self, other: &Word) -> Option<Word> {
        let (s1, w2) = (&self.right, &other.left);
        let k = s1.len().min(w2.len());
        if s1[..k] != w2[..k] {
            return None;
        }
        if s1.len() <= w2.len() {
            let mut left = self.left.clone();
            left.extend_from_slice(&w2[k..]);
            Some(Word { left, right: other.right.clone() })
        } else {
            let mut right = other.right.clone();
            right.extend_from_slice(&s1[k..]);
            Some(Word { left: self.left.clone(), right })
        }
    }

    /// Image of `e_k` in the representation `u e_k = e_{2k}`, `v e_k = e_{2k+1}`.
    pub fn apply_index(&self, k: u128) -> Option<u128> {
        let mut k = k;
        for l in &self.right {
            match (l, k % 2) {
                (Letter::U, 0) => k /= 2,
                (Letter::V, 1) => k = (k - 1) / 2,
                _ => return None,
            }
        }
        for l in self.left.iter().rev() {
            let bit = match l {
                Letter::U => 0,
                Letter::V => 1,
            };
            k = k.checked_mul(2).and_then(|x| x.checked_add(bit)).expect("basis index overflow");
        }
        Some(k)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", letters_str(&self.left))?;
        match self.right.len() {
            0 => Ok(()),
            1 => write!(f, "{}*", letters_str(&self.right)),
            _ => write!(f, "({})*", letters_str(&self.right)),
        }
    }
}

/// Finitely supported vector over `ℓ²(Z≥0)`.
pub type SparseVec = BTreeMap<u128, C64>;

pub fn basis(k: u128) -> SparseVec {
    SparseVec::from([(k, C64::new(1.0, 0.0))])
}

/// Finite linear combination of normal-form words.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<TermJson>", try_from = "Vec<TermJson>")]
pub struct CuntzElement {
    terms: BTreeMap<Word, C64>,
}

/// One row of the JSON word table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub left: String,
    pub right: String,
    pub re: f64,
    pub im: f64,
}

impl From<CuntzElement> for Vec<TermJson> {
    fn from(e: CuntzElement) -> Self {
        e.terms
            .iter()
            .map(|(w, c)| TermJson { left: letters_str(&w.left), right: letters_str(&w.right), re: c.re, im: c.im })
            .collect()
    }
}

impl TryFrom<Vec<TermJson>> for CuntzElement {
    type Error = CuntzError;
    fn try_from(rows: Vec<TermJson>) -> Result<Self> {
        let mut e = CuntzElement::zero();
        for t in rows {
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(CuntzError::InvalidInput("non-finite coefficient".into()));
            }
            e.add_term(Word::parse(&t.left, &t.right)?, C64::new(t.re, t.im));
        }
        Ok(e)
    }
}

impl CuntzElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: f64) -> Self {
        Self::term(Word::one(), C64::new(c, 0.0))
    }

    pub fn one() -> Self {
        Self::scalar(1.0)
    }

    pub fn term(w: Word, c: C64) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    /// Single word with coefficient 1, e.g. `word("u", "v")` for `uv*`.
    pub fn word(left: &str, right: &str) -> Result<Self> {
        Ok(Self::term(Word::parse(left, right)?, C64::new(1.0, 0.0)))
    }

    pub fn u() -> Self {
        Self::term(Word { left: vec![Letter::U], right: vec![] }, C64::new(1.0, 0.0))
    }

    pub fn v() -> Self {
        Self::term(Word { left: vec![Letter::V], right: vec![] }, C64::new(1.0, 0.0))
    }

    pub fn u_star() -> Self {
        Self::u().adjoint()
    }

    pub fn v_star() -> Self {
        Self::v().adjoint()
    }

    pub fn add_term(&mut self, w: Word, c: C64) {
        let x = self.coeff(&w) + c;
        self.set_term(w, x);
    }

    fn set_term(&mut self, w: Word, c: C64) {
        if c.norm() <= PRUNE {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.terms.get(w).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Number of words with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.set_term(w.clone(), x * c);
        }
        out
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        CuntzElement { terms: self.terms.iter().map(|(w, c)| (w.adjoint(), c.conj())).collect() }
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Number of word products `self * other` would form.
    pub fn product_cost(&self, other: &Self) -> usize {
        self.len().saturating_mul(other.len())
    }

    /// Coefficient sum: each normal-form word is a partial isometry, so this
    /// bounds the norm from above.
    pub fn hi_bound(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c.norm())
    }

    /// Rewrites `c₁·wu(σu)* + c₂·wv(σv)*` as `c·wσ* + (c₁−c)·wu(σu)* + (c₂−c)·wv(σv)*`
    /// using `uu* + vv* = 1`, whenever that lowers the coefficient sum.
    /// The element is unchanged as an operator.
    pub fn compress(&self) -> Self {
        let mut out = self.clone();
        loop {
            let mut keys: Vec<Word> = out
                .terms
                .keys()
                .filter(|w| w.left.last() == Some(&Letter::U) && w.right.last() == Some(&Letter::U))
                .cloned()
                .collect();
            keys.sort_by_key(|w| Reverse(w.left.len() + w.right.len()));
            let mut changed = false;
            for k in keys {
                let Some(&c1) = out.terms.get(&k) else { continue };
                let mut partner = k.clone();
                *partner.left.last_mut().unwrap() = Letter::V;
                *partner.right.last_mut().unwrap() = Letter::V;
                let Some(&c2) = out.terms.get(&partner) else { continue };
                if (c2 - c1).norm() >= c1.norm().max(c2.norm()) {
                    continue;
                }
                let c = if c1.norm() <= c2.norm() { c1 } else { c2 };
                let mut base = k.clone();
                base.left.pop();
                base.right.pop();
                out.set_term(k, c1 - c);
                out.set_term(partner, c2 - c);
                let b = out.coeff(&base) + c;
                out.set_term(base, b);
                changed = true;
            }
            if !changed {
                return out;
            }
        }
    }

    /// Exact image of a finitely supported vector.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (w, c) in &self.terms {
            for (&k, xk) in x {
                if let Some(m) = w.apply_index(k) {
                    *out.entry(m).or_insert(C64::new(0.0, 0.0)) += c * xk;
                }
            }
        }
        out.retain(|_, c| c.norm() > 0.0);
        out
    }

    /// Compression to `span{e_0, …, e_{N−1}}`, `N = 2^depth`.
    pub fn restriction(&self, depth: u32) -> Matrix {
        let n = 1usize << depth;
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            for (row, c) in self.apply(&basis(k as u128)) {
                if row < n as u128 {
                    m[(row as usize, k)] += c;
                }
            }
        }
        m
    }

    /// `[‖P e P‖, Σ|c|]` with `P` the projection onto the first `2^depth`
    /// basis vectors. The lower end is nondecreasing in `depth`.
    pub fn norm_bounds(&self, depth: u32) -> Result<NormInterval> {
        if (depth as usize) < self.max_word_len() {
            return Err(CuntzError::InvalidInput(format!(
                "depth {depth} is below the longest word length {}",
                self.max_word_len()
            )));
        }
        if depth > MAX_LO_DEPTH {
            return Err(CuntzError::InvalidInput(format!("depth {depth} exceeds {MAX_LO_DEPTH}")));
        }
        let lo = spectral_norm(&self.restriction(depth));
        let hi = self.hi_bound();
        Ok(NormInterval { lo: lo.min(hi), hi })
    }
}

impl fmt::Display for CuntzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}·{w}", c.re)?;
            } else {
                write!(f, "({}{:+}i)·{w}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

impl Add for &CuntzElement {
    type Output = CuntzElement;
    fn add(self, rhs: &CuntzElement) -> CuntzElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            let x = out.coeff(w) + c;
            out.set_term(w.clone(), x);
        }
        out
    }
}

impl Sub for &CuntzElement {
    type Output = CuntzElement;
    fn sub(self, rhs: &CuntzElement) -> CuntzElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            let x = out.coeff(w) - c;
            out.set_term(w.clone(), x);
        }
        out
    }
}

impl Neg for &CuntzElement {
    type Output = CuntzElement;
    fn neg(self) -> CuntzElement {
        self.scale_re(-1.0)
    }
}

impl Mul for &CuntzElement {
    type Output = CuntzElement;
    fn mul(self, rhs: &CuntzElement) -> CuntzElement {
        let mut acc: BTreeMap<Word, C64> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                if let Some(w) = w1.mul(w2) {
                    *acc.entry(w).or_insert(C64::new(0.0, 0.0)) += c1 * c2;
                }
            }
        }
        acc.retain(|_, c| c.norm() > PRUNE);
        CuntzElement { terms: acc }
    }
}

impl Add for CuntzElement {
    type Output = CuntzElement;
    fn add(self, rhs: CuntzElement) -> CuntzElement {
        &self + &rhs
    }
}

impl Sub for CuntzElement {
    type Output = CuntzElement;
    fn sub(self, rhs: CuntzElement) -> CuntzElement {
        &self - &rhs
    }
}

impl Mul for CuntzElement {
    type Output = CuntzElement;
    fn mul(self, rhs: CuntzElement) -> CuntzElement {
        &self * &rhs
    }
}
