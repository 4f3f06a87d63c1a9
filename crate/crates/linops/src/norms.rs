use crate::{random, spectral_norm, LinopsError, Matrix, Result, Vector, C64};
use serde::{Deserialize, Serialize};

/// Marker for the sup norm.
pub const P_INF: f64 = f64::INFINITY;

const ASCENT_ITERS: usize = 200;
const RANDOM_STARTS: usize = 6;

/// Certified enclosure `[lo, hi]` of a nonnegative quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormInterval {
    pub lo: f64,
    pub hi: f64,
}

impl NormInterval {
    pub fn exact(v: f64) -> Self {
        NormInterval { lo: v, hi: v }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi * (1.0 + 1e-12) + 1e-300);
        NormInterval { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Whether `x` lies in the interval widened by a relative `tol`.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        let s = tol * 1f64.max(self.hi.abs());
        x >= self.lo - s && x <= self.hi + s
    }

    /// Enclosure of `1/x` for `x` in the interval. A zero lower end gives `hi = ∞`.
    pub fn recip(&self) -> Self {
        let hi = if self.lo > 0.0 { 1.0 / self.lo } else { f64::INFINITY };
        NormInterval { lo: 1.0 / self.hi, hi }
    }

    /// Enclosure of a product of two nonnegative intervals.
    pub fn mul(&self, other: &NormInterval) -> Self {
        NormInterval { lo: self.lo * other.lo, hi: self.hi * other.hi }
    }

    pub fn scale(&self, s: f64) -> Self {
        let s = s.abs();
        NormInterval { lo: self.lo * s, hi: self.hi * s }
    }

    pub fn intersects(&self, other: &NormInterval, tol: f64) -> bool {
        let s = tol * 1f64.max(self.hi.max(other.hi));
        self.lo <= other.hi + s && other.lo <= self.hi + s
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        P_INF
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(LinopsError::InvalidParameter(format!("p must satisfy p >= 1, got {p}")))
    } else {
        Ok(())
    }
}

/// Unchecked `ℓ^p` norm of an iterator of scalars.
pub fn pnorm<'a>(x: impl IntoIterator<Item = &'a C64>, p: f64) -> f64 {
    if p.is_infinite() {
        return x.into_iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    if p == 1.0 {
        return x.into_iter().map(|z| z.norm()).sum();
    }
    if p == 2.0 {
        return x.into_iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    // scale by the max modulus to avoid overflow in |x|^p
    let v: Vec<f64> = x.into_iter().map(|z| z.norm()).collect();
    let m = v.iter().copied().fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    m * v.iter().map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `ℓ^p` norm of a vector; `p = ∞` allowed.
pub fn vec_pnorm(x: &[C64], p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(pnorm(x, p))
}

fn sgn(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        z / r
    }
}

/// Norming vector: `w` with `‖w‖_{p'} = 1` and `Σ conj(w_i) y_i = ‖y‖_p`.
fn norming(y: &Vector, p: f64) -> Vector {
    let ny = pnorm(y.iter(), p);
    if ny == 0.0 {
        return Vector::zeros(y.len());
    }
    if p.is_infinite() {
        let (k, _) = y
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bk, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bk, bv) });
        let mut w = Vector::zeros(y.len());
        w[k] = sgn(y[k]);
        return w;
    }
    if p == 1.0 {
        return y.map(sgn);
    }
    y.map(|z| sgn(z) * (z.norm() / ny).powf(p - 1.0))
}

/// One ascent run for `max ‖Bx‖_s / ‖x‖_r` from start `x`.
fn ascent(b: &Matrix, bh: &Matrix, mut x: Vector, r: f64, s: f64) -> f64 {
    let nx = pnorm(x.iter(), r);
    if nx == 0.0 {
        return 0.0;
    }
    x /= C64::new(nx, 0.0);
    let rq = conjugate_exponent(r);
    let mut best = pnorm((b * &x).iter(), s);
    for _ in 0..ASCENT_ITERS {
        let y = b * &x;
        let w = norming(&y, s);
        let z = bh * &w;
        let zq = pnorm(z.iter(), rq);
        let zx: f64 = z.iter().zip(x.iter()).map(|(a, c)| (a.conj() * c).re).sum();
        if zq <= zx * (1.0 + 1e-13) {
            break;
        }
        let xn = norming(&z, rq);
        let val = pnorm((b * &xn).iter(), s);
        x = xn;
        if val <= best * (1.0 + 1e-15) {
            best = best.max(val);
            break;
        }
        best = val;
    }
    best
}

fn ascent_lower(b: &Matrix, r: f64, s: f64, seed: u64) -> f64 {
    let n = b.ncols();
    let bh = b.adjoint();
    let mut best: f64 = 0.0;
    for j in 0..n {
        best = best.max(ascent(b, &bh, crate::basis_vector(n, j), r, s));
    }
    best = best.max(ascent(b, &bh, Vector::from_element(n, C64::new(1.0, 0.0)), r, s));
    let mut rng = random::seeded_rng(seed);
    for _ in 0..RANDOM_STARTS {
        let x = random::random_vector(&mut rng, n);
        best = best.max(ascent(b, &bh, x, r, s));
    }
    best
}

fn max_col_norm(a: &Matrix, s: f64) -> f64 {
    a.column_iter().map(|c| pnorm(c.iter(), s)).fold(0.0, f64::max)
}

fn max_row_norm(a: &Matrix, r: f64) -> f64 {
    a.row_iter().map(|row| pnorm(row.iter(), r)).fold(0.0, f64::max)
}

/// Operator norm interval of `A : ℓ^p → ℓ^p` with the default seed.
pub fn opnorm_interval(a: &Matrix, p: f64) -> Result<NormInterval> {
    opnorm_interval_seeded(a, p, 0)
}

/// Operator norm interval of `A : ℓ^p → ℓ^p`.
///
/// Exact for `p ∈ {1, 2, ∞}`. Otherwise `lo` comes from a multi-start
/// ascent and `hi` is the Riesz–Thorin bound `‖A‖₁^{1/p}‖A‖_∞^{1-1/p}`.
pub fn opnorm_interval_seeded(a: &Matrix, p: f64, seed: u64) -> Result<NormInterval> {
    check_p(p)?;
    if a.is_empty() {
        return Err(LinopsError::InvalidInput("empty matrix".into()));
    }
    if p == 1.0 {
        return Ok(NormInterval::exact(max_col_norm(a, 1.0)));
    }
    if p.is_infinite() {
        return Ok(NormInterval::exact(max_row_norm(a, 1.0)));
    }
    if p == 2.0 {
        return Ok(NormInterval::exact(spectral_norm(a)));
    }
    let n1 = max_col_norm(a, 1.0);
    let ninf = max_row_norm(a, 1.0);
    let hi = n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p);
    let lo = ascent_lower(a, p, p, seed).max(max_col_norm(a, p)).min(hi);
    Ok(NormInterval::new(lo, hi))
}

/// Mixed norm interval of `A : ℓ^r → ℓ^s` with the default seed.
pub fn opnorm_interval_pq(a: &Matrix, r: f64, s: f64) -> Result<NormInterval> {
    opnorm_interval_pq_seeded(a, r, s, 0)
}

/// Mixed norm interval of `A : ℓ^r → ℓ^s`.
///
/// Exact when `r = 1` (largest column `s`-norm), when `s = ∞` (largest row
/// `r'`-norm), and when `r = s = 2`. Otherwise `hi` is the smaller of the
/// spectral bound with dimension factors and the row-wise Hölder bound.
pub fn opnorm_interval_pq_seeded(a: &Matrix, r: f64, s: f64, seed: u64) -> Result<NormInterval> {
    check_p(r)?;
    check_p(s)?;
    if a.is_empty() {
        return Err(LinopsError::InvalidInput("empty matrix".into()));
    }
    if r == s {
        return opnorm_interval_seeded(a, r, seed);
    }
    let rq = conjugate_exponent(r);
    if r == 1.0 {
        return Ok(NormInterval::exact(max_col_norm(a, s)));
    }
    if s.is_infinite() {
        return Ok(NormInterval::exact(max_row_norm(a, rq)));
    }
    let (m, n) = a.shape();
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    // ‖x‖₂ ≤ n^{max(0, 1/2 − 1/r)} ‖x‖_r and ‖y‖_s ≤ m^{max(0, 1/s − 1/2)} ‖y‖₂
    let cin = (n as f64).powf((0.5 - inv(r)).max(0.0));
    let cout = (m as f64).powf((inv(s) - 0.5).max(0.0));
    let via2 = spectral_norm(a) * cin * cout;
    let rows: Vec<C64> = a.row_iter().map(|row| C64::new(pnorm(row.iter(), rq), 0.0)).collect();
    let holder = pnorm(rows.iter(), s);
    let hi = via2.min(holder);
    let lo = ascent_lower(a, r, s, seed).max(max_col_norm(a, s)).min(hi);
    Ok(NormInterval::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{from_real_rows, re};

    #[test]
    fn pnorm_basic() {
        assert_eq!(vec_pnorm(&[re(3.0), re(4.0)], 2.0).unwrap(), 5.0);
        assert_eq!(vec_pnorm(&[re(1.0); 3], 1.0).unwrap(), 3.0);
        assert_eq!(vec_pnorm(&[re(1.0), re(-7.0)], P_INF).unwrap(), 7.0);
        assert!(vec_pnorm(&[re(1.0)], 0.5).is_err());
    }

    #[test]
    fn exact_cases() {
        let a = from_real_rows(&[&[1.0, -2.0], &[3.0, 4.0]]);
        assert_eq!(opnorm_interval(&a, 1.0).unwrap(), NormInterval::exact(6.0));
        assert_eq!(opnorm_interval(&a, P_INF).unwrap(), NormInterval::exact(7.0));
    }

    #[test]
    fn norming_vector_attains() {
        let y = Vector::from_vec(vec![C64::new(1.0, 2.0), re(-0.5), re(0.0)]);
        for p in [1.0, 1.5, 2.0, 3.0, P_INF] {
            let w = norming(&y, p);
            let q = conjugate_exponent(p);
            assert!((pnorm(w.iter(), q) - 1.0).abs() < 1e-12);
            let pair: C64 = w.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!((pair.re - pnorm(y.iter(), p)).abs() < 1e-12);
        }
    }
}
