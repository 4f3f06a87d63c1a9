use crate::{Result, VsError};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Scalar field for block matrices. Rational arithmetic is exact; `f64`
/// compares against a small absolute tolerance.
pub trait Field:
    nalgebra::Scalar
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// `true` for exact arithmetic.
    const EXACT: bool;
    fn from_i64(x: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Treated as zero for pivoting and equality tests.
    fn is_negligible(&self) -> bool;
    /// Parses `"3"`, `"-2/5"` or `"0.25"`.
    fn parse(s: &str) -> Result<Self>;
}

/// Absolute tolerance for `f64` entries.
pub const FLOAT_TOL: f64 = 1e-12;

impl Field for f64 {
    const EXACT: bool = false;
    fn from_i64(x: i64) -> Self {
        x as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let (a, b): (f64, f64) = (parse_f64(a)?, parse_f64(b)?);
            if b == 0.0 {
                return Err(VsError::Parse(format!("zero denominator in '{s}'")));
            }
            return Ok(a / b);
        }
        parse_f64(s)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let x: f64 = s.trim().parse().map_err(|_| VsError::Parse(format!("not a number: '{s}'")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(VsError::Parse(format!("non-finite entry '{s}'")))
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || VsError::Parse(format!("not a rational: '{s}'"));
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(VsError::Parse(format!("zero denominator in '{s}'")));
            }
            return Ok(BigRational::new(a, b));
        }
        // decimal literal, read exactly
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let x = BigRational::new(digits, den);
        Ok(if neg { -x } else { x })
    }
}

/// Dense matrix over a [`Field`].
pub type Mat<F> = DMatrix<F>;
/// Exact rational matrix, the default mode.
pub type RationalMatrix = Mat<BigRational>;

pub fn identity<F: Field>(n: usize) -> Mat<F> {
    Mat::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
}

pub fn zeros<F: Field>(r: usize, c: usize) -> Mat<F> {
    Mat::from_fn(r, c, |_, _| F::zero())
}

/// Integer entries, row-major.
pub fn from_int_rows<F: Field>(rows: &[&[i64]]) -> Mat<F> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    Mat::from_fn(r, c, |i, j| F::from_i64(rows[i][j]))
}

/// Parses a row-major table of strings.
pub fn parse_matrix<F: Field>(rows: &[Vec<String>]) -> Result<Mat<F>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
        return Err(VsError::InvalidInput("matrix rows must be nonempty and of equal length".into()));
    }
    let mut out = zeros::<F>(r, c);
    for i in 0..r {
        for j in 0..c {
            out[(i, j)] = F::parse(&rows[i][j])?;
        }
    }
    Ok(out)
}

/// Renders entries as strings (`"p/q"` in rational mode).
pub fn to_string_rows<F: Field>(a: &Mat<F>) -> Vec<Vec<String>> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)].to_string()).collect()).collect()
}

pub fn is_zero<F: Field>(a: &Mat<F>) -> bool {
    a.iter().all(|x| x.is_negligible())
}

/// Largest entry modulus as `f64`, used for reporting.
pub fn max_abs<F: Field>(a: &Mat<F>) -> f64 {
    a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

pub fn require_square<F: Field>(a: &Mat<F>, name: &str) -> Result<usize> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(VsError::NotSquare(format!("{name} is {}x{}", a.nrows(), a.ncols())));
    }
    Ok(a.nrows())
}

pub fn trace<F: Field>(a: &Mat<F>) -> F {
    (0..a.nrows().min(a.ncols())).fold(F::zero(), |acc, i| acc + a[(i, i)].clone())
}

pub fn pow<F: Field>(a: &Mat<F>, k: usize) -> Mat<F> {
    let mut out = identity::<F>(a.nrows());
    for _ in 0..k {
        out = &out * a;
    }
    out
}

/// Gauss–Jordan inverse; `None` when singular. Partial pivoting by
/// magnitude in float mode, first nonzero pivot in rational mode.
pub fn inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.nrows();
    if n != a.ncols() {
        return None;
    }
    let mut m = a.clone();
    let mut inv = identity::<F>(n);
    for col in 0..n {
        let candidates = (col..n).filter(|&r| !m[(r, col)].is_negligible());
        let pivot = if F::EXACT {
            candidates.min()
        } else {
            candidates.max_by(|&x, &y| m[(x, col)].to_f64().abs().total_cmp(&m[(y, col)].to_f64().abs()))
        }?;
        m.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let pv = m[(col, col)].clone();
        for j in 0..n {
            m[(col, j)] = m[(col, j)].clone() / pv.clone();
            inv[(col, j)] = inv[(col, j)].clone() / pv.clone();
        }
        for r in 0..n {
            if r == col || m[(r, col)].is_zero() {
                continue;
            }
            let f = m[(r, col)].clone();
            for j in 0..n {
                let mj = m[(col, j)].clone();
                let ij = inv[(col, j)].clone();
                m[(r, j)] -= f.clone() * mj;
                inv[(r, j)] -= f.clone() * ij;
            }
        }
    }
    Some(inv)
}

/// Rank by row reduction.
pub fn rank<F: Field>(a: &Mat<F>) -> usize {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).max_by(|&x, &y| m[(x, c)].to_f64().abs().total_cmp(&m[(y, c)].to_f64().abs()))
        else {
            break;
        };
        let p = if F::EXACT { (r..rows).find(|&i| !m[(i, c)].is_zero()).unwrap_or(p) } else { p };
        if m[(p, c)].is_negligible() {
            continue;
        }
        m.swap_rows(r, p);
        let pv = m[(r, c)].clone();
        for i in r + 1..rows {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone() / pv.clone();
            for j in c..cols {
                let x = m[(r, j)].clone();
                m[(i, j)] -= f.clone() * x;
            }
        }
        r += 1;
    }
    r
}

/// Assembles a block matrix from a grid of optional `d×d` blocks (`None` = 0).
pub fn blocks<F: Field>(grid: &[Vec<Option<Mat<F>>>], d: usize) -> Mat<F> {
    let (br, bc) = (grid.len(), grid.first().map_or(0, |x| x.len()));
    let mut out = zeros::<F>(br * d, bc * d);
    for (i, row) in grid.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if let Some(b) = b {
                out.view_mut((i * d, j * d), (d, d)).copy_from(b);
            }
        }
    }
    out
}

/// Block `(i, j)` of size `r×c`.
pub fn block<F: Field>(a: &Mat<F>, i: usize, j: usize, r: usize, c: usize) -> Mat<F> {
    a.view((i * r, j * c), (r, c)).into_owned()
}

/// Exact-or-tolerant entrywise equality.
pub fn mat_eq<F: Field>(a: &Mat<F>, b: &Mat<F>) -> bool {
    a.shape() == b.shape() && is_zero(&(a - b))
}

/// Small helper for tests and fixtures: `p/q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl<F: Field> From<&Mat<F>> for MatDebug {
    fn from(a: &Mat<F>) -> Self {
        MatDebug(to_string_rows(a))
    }
}

/// String rendering of a matrix, for reports.
#[derive(Clone, PartialEq, Eq, serde::Serialize)]
pub struct MatDebug(pub Vec<Vec<String>>);

impl Debug for MatDebug {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_is_exact() {
        assert_eq!(BigRational::parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(BigRational::parse("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(BigRational::parse("7").unwrap(), ratio(7, 1));
        assert!(BigRational::parse("1/0").is_err());
        assert!(BigRational::parse("x").is_err());
        assert!(BigRational::parse(".").is_err());
    }

    #[test]
    fn inverse_and_rank() {
        let a: RationalMatrix = from_int_rows(&[&[0, 1], &[2, 3]]);
        let ai = inverse(&a).unwrap();
        assert_eq!(&a * &ai, identity(2));
        let s: RationalMatrix = from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&s).is_none());
        assert_eq!(rank(&s), 1);
        let f: Mat<f64> = from_int_rows(&[&[0, 1], &[2, 3]]);
        assert!(mat_eq(&(&f * inverse(&f).unwrap()), &identity(2)));
    }
}
