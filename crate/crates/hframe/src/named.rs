use crate::{HframeError, HilbertFrame, Result};
use linops::{Matrix, C64};
use std::f64::consts::PI;

/// Frames with closed-form constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedFrame {
    /// Three unit vectors at 120° in `R²`; tight with bound 3/2.
    Mercedes,
    /// `η_k = m^{-1/2}(ω_1^k, …, ω_n^k)` over the m-th roots of unity; Parseval for `C^n`.
    Harmonic { n: usize, m: usize },
    /// `n` equally spaced lines `(cos πj/n, sin πj/n)` in `R²`.
    Lines(usize),
    /// `{e_1} ∪ {e_1, …, e_d}`; bounds 1 and 2 when `d ≥ 2`.
    BasisPlusFirst(usize),
}

pub fn make_named_frame(name: NamedFrame) -> Result<HilbertFrame> {
    match name {
        NamedFrame::Mercedes => {
            let h = 3f64.sqrt() / 2.0;
            HilbertFrame::new(linops::from_real_rows(&[&[0.0, -h, h], &[1.0, -0.5, -0.5]]))
        }
        NamedFrame::Harmonic { n, m } => {
            if n == 0 || n > m {
                return Err(HframeError::InvalidSize(format!("harmonic frame needs 1 <= n <= m, got n={n}, m={m}")));
            }
            let s = 1.0 / (m as f64).sqrt();
            // ω_j = e^{2πi j/m}, j = 1..n; column k holds (ω_1^k, …, ω_n^k)
            HilbertFrame::new(Matrix::from_fn(n, m, |j, k| {
                C64::from_polar(s, 2.0 * PI * ((j + 1) * (k + 1)) as f64 / m as f64)
            }))
        }
        NamedFrame::Lines(n) => {
            if n < 2 {
                return Err(HframeError::InvalidSize("lines(n) needs n >= 2".into()));
            }
            HilbertFrame::new(Matrix::from_fn(2, n, |i, j| {
                let t = PI * j as f64 / n as f64;
                C64::new(if i == 0 { t.cos() } else { t.sin() }, 0.0)
            }))
        }
        NamedFrame::BasisPlusFirst(d) => {
            if d == 0 {
                return Err(HframeError::InvalidSize("dimension must be positive".into()));
            }
            HilbertFrame::new(Matrix::from_fn(d, d + 1, |i, j| {
                let hit = if j == 0 { i == 0 } else { i == j - 1 };
                C64::new(if hit { 1.0 } else { 0.0 }, 0.0)
            }))
        }
    }
}

impl std::str::FromStr for NamedFrame {
    type Err = HframeError;

    /// Parses `mercedes`, `harmonic(n,m)`, `lines(n)` or `basis-plus-first(d)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let args = |body: &str| -> Result<Vec<usize>> {
            body.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| HframeError::InvalidInput(format!("{s}: {e}"))))
                .collect()
        };
        if s == "mercedes" {
            return Ok(NamedFrame::Mercedes);
        }
        let (head, rest) = s
            .split_once('(')
            .ok_or_else(|| HframeError::InvalidInput(format!("unknown frame name '{s}'")))?;
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| HframeError::InvalidInput(format!("missing ')' in '{s}'")))?;
        let a = args(body)?;
        match (head, a.as_slice()) {
            ("harmonic", [n, m]) => Ok(NamedFrame::Harmonic { n: *n, m: *m }),
            ("lines", [n]) => Ok(NamedFrame::Lines(*n)),
            ("basis-plus-first", [d]) => Ok(NamedFrame::BasisPlusFirst(*d)),
            _ => Err(HframeError::InvalidInput(format!("unknown frame name '{s}'"))),
        }
    }
}
