//! Lipschitz multipliers `M x = Σ λ_n f_n(x) τ_n` from a sampled pointed
//! metric space into `K^d`.

use linops::{conjugate_exponent, opnorm_interval_pq, pnorm, LinopsError, Matrix, MatrixJson, NormInterval, Vector, C64};
use metricframe::{metric_frame_bounds, LipschitzFamily, MetricError, MetricSample};
use serde::{Deserialize, Serialize};

/// Slack used by the bound checks.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MultiplierError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown point {0}")]
    UnknownPoint(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Linops(#[from] LinopsError),
}

pub type Result<T> = std::result::Result<T, MultiplierError>;

/// Where a Bessel constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantSource {
    Measured,
    Supplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    sample: MetricSample,
    family: LipschitzFamily,
    symbol: Vec<C64>,
    /// d×m, column n is `τ_n`.
    tau: Matrix,
    p: f64,
    /// Exponent of the norm on `K^d`.
    out_norm: f64,
    b: f64,
    b_source: ConstantSource,
    d: NormInterval,
    d_source: ConstantSource,
}

impl Multiplier {
    /// Builds a multiplier and measures `b` and `d` on the sample unless supplied.
    ///
    /// The sample must be pointed and every `f_n` must vanish at the base point.
    pub fn new(
        sample: MetricSample,
        family: LipschitzFamily,
        symbol: Vec<C64>,
        tau: Matrix,
        p: f64,
    ) -> Result<Self> {
        Multiplier::with_options(sample, family, symbol, tau, p, 2.0, None, None)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_options(
        sample: MetricSample,
        family: LipschitzFamily,
        symbol: Vec<C64>,
        tau: Matrix,
        p: f64,
        out_norm: f64,
        b: Option<f64>,
        d: Option<f64>,
    ) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(MultiplierError::InvalidInput(format!("p must be finite and >= 1, got {p}")));
        }
        if !(out_norm >= 1.0) {
            return Err(MultiplierError::InvalidInput(format!("output norm exponent must be >= 1, got {out_norm}")));
        }
        sample.validate()?;
        family.validate()?;
        let m = family.len();
        if m == 0 {
            return Err(MultiplierError::InvalidInput("empty family".into()));
        }
        if family.npoints() != sample.len() {
            return Err(MultiplierError::ShapeMismatch(format!(
                "family has {} points, sample has {}",
                family.npoints(),
                sample.len()
            )));
        }
        if symbol.len() != m || tau.ncols() != m {
            return Err(MultiplierError::ShapeMismatch(format!(
                "family has {m} terms, symbol {} and vectors {}",
                symbol.len(),
                tau.ncols()
            )));
        }
        if symbol.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MultiplierError::InvalidInput("symbol must be finite".into()));
        }
        linops::check_finite(&tau)?;
        let base = sample
            .base
            .ok_or_else(|| MultiplierError::InvalidInput("sample needs a base point".into()))?;
        if let Some(n) = family.values.iter().position(|r| r[base] != 0.0) {
            return Err(MultiplierError::InvalidInput(format!("f_{n} does not vanish at the base point")));
        }
        let (b, b_source) = match b {
            Some(v) if v >= 0.0 => (v, ConstantSource::Supplied),
            Some(v) => return Err(MultiplierError::InvalidInput(format!("b must be >= 0, got {v}"))),
            None => (metric_frame_bounds(&sample, &family, p)?.b, ConstantSource::Measured),
        };
        let (d, d_source) = match d {
            Some(v) if v >= 0.0 => (NormInterval::exact(v), ConstantSource::Supplied),
            Some(v) => return Err(MultiplierError::InvalidInput(format!("d must be >= 0, got {v}"))),
            None => (vector_bessel_constant(&tau, p, out_norm)?, ConstantSource::Measured),
        };
        Ok(Multiplier { sample, family, symbol, tau, p, out_norm, b, b_source, d, d_source })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        conjugate_exponent(self.p)
    }

    pub fn sample(&self) -> &MetricSample {
        &self.sample
    }

    pub fn family(&self) -> &LipschitzFamily {
        &self.family
    }

    pub fn symbol(&self) -> &[C64] {
        &self.symbol
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn b(&self) -> (f64, ConstantSource) {
        (self.b, self.b_source)
    }

    pub fn d(&self) -> (NormInterval, ConstantSource) {
        (self.d, self.d_source)
    }

    /// Same family, vectors and constants with another symbol.
    pub fn with_symbol(&self, symbol: Vec<C64>) -> Result<Self> {
        if symbol.len() != self.symbol.len() {
            return Err(MultiplierError::ShapeMismatch("symbol length differs".into()));
        }
        Ok(Multiplier { symbol, ..self.clone() })
    }

    fn out(&self, v: &Vector) -> f64 {
        pnorm(v.iter(), self.out_norm)
    }

    /// `Σ_n λ_n f_n(x_j) τ_n`.
    pub fn apply(&self, j: usize) -> Result<Vector> {
        if j >= self.sample.len() {
            return Err(MultiplierError::UnknownPoint(j));
        }
        Ok(self.apply_with(&self.symbol, &self.tau, j, 0))
    }

    fn apply_with(&self, symbol: &[C64], tau: &Matrix, j: usize, from: usize) -> Vector {
        let mut v = Vector::zeros(tau.nrows());
        for n in from..symbol.len() {
            let c = symbol[n] * self.family.values[n][j];
            if c != C64::new(0.0, 0.0) {
                v += tau.column(n) * c;
            }
        }
        v
    }

    /// Lipschitz number over the sample of `x ↦ Σ_{n ≥ from} λ_n f_n(x) τ_n`.
    fn lip_of(&self, symbol: &[C64], tau: &Matrix, from: usize) -> f64 {
        let pts: Vec<Vector> = (0..self.sample.len()).map(|j| self.apply_with(symbol, tau, j, from)).collect();
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let dij = self.sample.d(i, j);
                if dij > 0.0 {
                    best = best.max(self.out(&(&pts[i] - &pts[j])) / dij);
                }
            }
        }
        best
    }

    /// `max ‖Mx − My‖ / d(x, y)` over the sample.
    pub fn lipschitz_number(&self) -> f64 {
        self.lip_of(&self.symbol, &self.tau, 0)
    }
}

/// `d = sup_{‖φ‖ ≤ 1} (Σ|φ(τ_n)|^q)^{1/q}` with `φ` in the dual of `ℓ^r(K^d)`,
/// i.e. the `r' → q` norm of `Tᵀ`.
pub fn vector_bessel_constant(tau: &Matrix, p: f64, out_norm: f64) -> Result<NormInterval> {
    let q = conjugate_exponent(p);
    let r_dual = conjugate_exponent(out_norm);
    Ok(opnorm_interval_pq(&tau.transpose(), r_dual, q)?)
}

/// Measured value against a certified bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(measured: f64, bound: f64) -> Self {
        BoundCheck { measured, bound, holds: measured <= bound + SLACK }
    }
}

/// `Lip(M) ≤ b·d·‖λ‖_∞`.
pub fn lip_bound_check(m: &Multiplier) -> Result<BoundCheck> {
    let sup = m.symbol.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(BoundCheck::new(m.lipschitz_number(), m.b * m.d.hi * sup))
}

/// `Lip(M − M_cut) ≤ b·d·max_{n ≥ cut}|λ_n|`, where `M_cut` keeps the first `cut` terms.
pub fn tail_decay(m: &Multiplier, cut: usize) -> Result<BoundCheck> {
    if cut >= m.symbol.len() {
        return Err(MultiplierError::InvalidInput(format!("cut {cut} must be below {}", m.symbol.len())));
    }
    let sup = m.symbol[cut..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(BoundCheck::new(m.lip_of(&m.symbol, &m.tau, cut), m.b * m.d.hi * sup))
}

/// Replacement data for [`continuity`].
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// New symbol; bound `b·d·‖λ' − λ‖_p`.
    Symbol(Vec<C64>),
    /// New vectors; bound `b·‖λ‖_p·(Σ‖τ'_n − τ_n‖^q)^{1/q}`.
    Vectors(Matrix),
}

/// Lipschitz distance between `M` and the multiplier with replaced data.
pub fn continuity(m: &Multiplier, variant: &Variant) -> Result<BoundCheck> {
    let q = m.q();
    match variant {
        Variant::Symbol(l2) => {
            if l2.len() != m.symbol.len() {
                return Err(MultiplierError::ShapeMismatch("symbol length differs".into()));
            }
            let diff: Vec<C64> = l2.iter().zip(&m.symbol).map(|(a, b)| a - b).collect();
            let measured = m.lip_of(&diff, &m.tau, 0);
            Ok(BoundCheck::new(measured, m.b * m.d.hi * pnorm(diff.iter(), m.p)))
        }
        Variant::Vectors(t2) => {
            if t2.shape() != m.tau.shape() {
                return Err(MultiplierError::ShapeMismatch("vector family shape differs".into()));
            }
            let dt = t2 - &m.tau;
            let measured = m.lip_of(&m.symbol, &dt, 0);
            let col_norms: Vec<C64> =
                dt.column_iter().map(|c| C64::new(m.out(&c.into_owned()), 0.0)).collect();
            let bound = m.b * pnorm(m.symbol.iter(), m.p) * pnorm(col_norms.iter(), q);
            Ok(BoundCheck::new(measured, bound))
        }
    }
}

/// Multiplier file: sample, family, symbol and vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierJson {
    pub p: f64,
    pub sample: MetricSample,
    pub family: LipschitzFamily,
    pub symbol: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_im: Option<Vec<f64>>,
    pub tau: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

impl MultiplierJson {
    pub fn to_multiplier(&self) -> Result<Multiplier> {
        let symbol = match &self.symbol_im {
            None => self.symbol.iter().map(|&r| C64::new(r, 0.0)).collect(),
            Some(im) if im.len() == self.symbol.len() => {
                self.symbol.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect()
            }
            Some(_) => return Err(MultiplierError::ShapeMismatch("symbol_im length differs".into())),
        };
        Multiplier::with_options(
            self.sample.clone(),
            self.family.clone(),
            symbol,
            self.tau.to_matrix()?,
            self.p,
            self.out_norm.unwrap_or(2.0),
            self.b,
            self.d,
        )
    }
}
