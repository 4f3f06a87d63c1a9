//! Metric p-frames for finite samples of a metric space.
//!
//! Every pairwise quantity is an exhaustive scan over the sample, so bounds
//! and hypothesis checks are exact for the sample. They estimate the
//! corresponding quantities of the full space.

mod named;

pub use named::{make_named_family, NamedFamily};

use serde::{Deserialize, Serialize};

/// Slack for the triangle-inequality validation.
pub const TRIANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("point {0} lies outside the domain of the family")]
    OutOfDomain(String),
}

pub type Result<T> = std::result::Result<T, MetricError>;

/// `(Σ|v_n|^p)^{1/p}` for real entries, `p ≥ 1` or `p = ∞`.
pub fn lp_norm(v: impl IntoIterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return v.into_iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    if p == 1.0 {
        return v.into_iter().map(f64::abs).sum();
    }
    let xs: Vec<f64> = v.into_iter().map(f64::abs).collect();
    let top = xs.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    top * xs.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(MetricError::InvalidInput(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}

/// Finite metric space given by its distance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub points: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
    /// Real coordinates of the points when the sample lives on the line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
}

impl MetricSample {
    /// Validates symmetry, zero diagonal, nonnegativity and the triangle inequality.
    pub fn new(points: Vec<String>, dist: Vec<Vec<f64>>, base: Option<usize>) -> Result<Self> {
        let s = MetricSample { points, dist, base, positions: None };
        s.validate()?;
        Ok(s)
    }

    /// Points of the real line with `d(x, y) = |x − y|`.
    pub fn line(xs: &[f64], base: Option<usize>) -> Result<Self> {
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(MetricError::InvalidInput("non-finite coordinate".into()));
        }
        let dist = xs.iter().map(|x| xs.iter().map(|y| (x - y).abs()).collect()).collect();
        let s = MetricSample {
            points: xs.iter().map(|x| format!("{x}")).collect(),
            dist,
            base,
            positions: Some(xs.to_vec()),
        };
        s.validate()?;
        Ok(s)
    }

    /// `n` equally spaced points of `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(MetricError::InvalidInput("need n >= 2 and lo < hi".into()));
        }
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        MetricSample::line(&xs, None)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if self.dist.len() != n || self.dist.iter().any(|r| r.len() != n) {
            return Err(MetricError::InvalidInput(format!("distance table must be {n}x{n}")));
        }
        if let Some(b) = self.base {
            if b >= n {
                return Err(MetricError::InvalidInput(format!("base index {b} out of range")));
            }
        }
        if let Some(pos) = &self.positions {
            if pos.len() != n {
                return Err(MetricError::InvalidInput("positions length differs from points".into()));
            }
        }
        let d = &self.dist;
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(MetricError::InvalidInput(format!("d({i},{i}) = {} is not zero", d[i][i])));
            }
            for j in 0..n {
                if !d[i][j].is_finite() || d[i][j] < 0.0 {
                    return Err(MetricError::InvalidInput(format!("d({i},{j}) = {} is invalid", d[i][j])));
                }
                if d[i][j] != d[j][i] {
                    return Err(MetricError::InvalidInput(format!("distance table not symmetric at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j] + d[j][k] + TRIANGLE_TOL * (1.0 + d[i][k]) {
                        return Err(MetricError::InvalidInput(format!(
                            "triangle inequality fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Coordinates, from `positions` or by parsing the labels.
    pub fn coordinates(&self) -> Result<Vec<f64>> {
        if let Some(p) = &self.positions {
            return Ok(p.clone());
        }
        self.points
            .iter()
            .map(|l| {
                l.trim()
                    .parse::<f64>()
                    .map_err(|_| MetricError::InvalidInput(format!("label {l:?} is not a real coordinate")))
            })
            .collect()
    }

    /// Index pairs `i < j` with positive distance.
    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.dist[i][j] > 0.0)
    }

    fn require_pairs(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(MetricError::InvalidInput("need at least two points".into()));
        }
        if self.pairs().next().is_none() {
            return Err(MetricError::InvalidInput("all distances are zero".into()));
        }
        Ok(())
    }
}

/// Value table `V[n][j] = f_n(x_j)` of a finite Lipschitz family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzFamily {
    pub values: Vec<Vec<f64>>,
    /// Bound `r` with `‖{Δf_n}_{n ≥ m}‖_p ≤ r·d(x, y)` for the dropped tail.
    #[serde(default)]
    pub remainder: f64,
    /// Bound on `‖{f_n(x)}_{n ≥ m}‖_1` at every sample point.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub value_remainder: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl LipschitzFamily {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let f = LipschitzFamily { values, remainder: 0.0, value_remainder: 0.0 };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let width = self.values.first().map_or(0, Vec::len);
        if self.values.iter().any(|r| r.len() != width) {
            return Err(MetricError::InvalidInput("ragged value table".into()));
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(MetricError::InvalidInput("non-finite value".into()));
        }
        if !(self.remainder >= 0.0) || !(self.value_remainder >= 0.0) {
            return Err(MetricError::InvalidInput("remainders must be nonnegative".into()));
        }
        Ok(())
    }

    fn check_sample(&self, s: &MetricSample) -> Result<()> {
        self.validate()?;
        if self.values.iter().any(|r| r.len() != s.len()) {
            return Err(MetricError::InvalidInput(format!(
                "family has values at {} points, sample has {}",
                self.npoints(),
                s.len()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn npoints(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// `(f_n(x_j))_n`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }

    /// `{λ f_n}`.
    pub fn scaled(&self, lambda: f64) -> LipschitzFamily {
        LipschitzFamily {
            values: self.values.iter().map(|r| r.iter().map(|v| lambda * v).collect()).collect(),
            remainder: lambda.abs() * self.remainder,
            value_remainder: lambda.abs() * self.value_remainder,
        }
    }

    /// `{f_n + λ g_n}`.
    pub fn add(&self, other: &LipschitzFamily, lambda: f64) -> Result<LipschitzFamily> {
        if self.len() != other.len() || self.npoints() != other.npoints() {
            return Err(MetricError::InvalidInput("families differ in shape".into()));
        }
        Ok(LipschitzFamily {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + lambda * y).collect())
                .collect(),
            remainder: self.remainder + lambda.abs() * other.remainder,
            value_remainder: self.value_remainder + lambda.abs() * other.value_remainder,
        })
    }

    /// `‖{f_n(x_i) − f_n(x_j)}_n‖_p` over the stored terms.
    fn pair_norm(&self, i: usize, j: usize, p: f64) -> f64 {
        lp_norm(self.values.iter().map(|r| r[i] - r[j]), p)
    }
}

/// Sampled metric frame bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricBounds {
    /// Certified lower bound `min ratio` over the stored terms.
    pub a: f64,
    /// Certified upper bound `max ratio + remainder`.
    pub b: f64,
    /// Ratios over the stored terms only.
    pub a_trunc: f64,
    pub b_trunc: f64,
    pub remainder: f64,
    pub pairs: usize,
}

impl MetricBounds {
    /// The true sampled lower bound lies in `[a_trunc, a_trunc + remainder]`.
    pub fn a_range(&self) -> (f64, f64) {
        (self.a_trunc, self.a_trunc + self.remainder)
    }

    pub fn b_range(&self) -> (f64, f64) {
        (self.b_trunc, self.b_trunc + self.remainder)
    }

    pub fn is_frame(&self) -> bool {
        self.a > 0.0 && self.b.is_finite()
    }
}

/// `min` and `max` over pairs of `‖{f_n(x) − f_n(y)}‖_p / d(x, y)`.
pub fn metric_frame_bounds(s: &MetricSample, f: &LipschitzFamily, p: f64) -> Result<MetricBounds> {
    check_p(p)?;
    s.require_pairs()?;
    f.check_sample(s)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut pairs = 0;
    for (i, j) in s.pairs() {
        let r = f.pair_norm(i, j, p) / s.d(i, j);
        lo = lo.min(r);
        hi = hi.max(r);
        pairs += 1;
    }
    Ok(MetricBounds { a: lo, b: hi + f.remainder, a_trunc: lo, b_trunc: hi, remainder: f.remainder, pairs })
}

/// `max |f(x) − f(y)| / d(x, y)` over pairs.
pub fn lipschitz_number(s: &MetricSample, values: &[f64]) -> Result<f64> {
    s.require_pairs()?;
    if values.len() != s.len() {
        return Err(MetricError::InvalidInput("value row length differs from sample".into()));
    }
    Ok(s.pairs().map(|(i, j)| (values[i] - values[j]).abs() / s.d(i, j)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    /// `{λ f_n}`.
    Scale,
    /// `{f_n + λ g_n}`.
    Add,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CombineReport {
    pub predicted: (f64, f64),
    pub measured: MetricBounds,
    /// Bessel bound of `G` used in the prediction (add mode).
    pub bessel_g: Option<f64>,
    /// Measured bounds lie inside the predicted envelope.
    pub contained: bool,
}

/// Scaling or adding families, with predicted and measured bounds.
///
/// Scale predicts `(|λ|a, |λ|b)`. Add predicts `(a − |λ|d_G, b + |λ|d_G)` and
/// requires `|λ| < a/d_G`.
pub fn combine(
    s: &MetricSample,
    f: &LipschitzFamily,
    g: Option<&LipschitzFamily>,
    lambda: f64,
    mode: CombineMode,
    p: f64,
) -> Result<CombineReport> {
    if !lambda.is_finite() {
        return Err(MetricError::InvalidInput("λ must be finite".into()));
    }
    let bf = metric_frame_bounds(s, f, p)?;
    let l = lambda.abs();
    let (combined, predicted, bessel_g) = match mode {
        CombineMode::Scale => {
            if lambda == 0.0 {
                return Err(MetricError::InvalidInput("λ must be nonzero".into()));
            }
            (f.scaled(lambda), (l * bf.a, l * bf.b), None)
        }
        CombineMode::Add => {
            let g = g.ok_or_else(|| MetricError::InvalidInput("add mode needs a second family".into()))?;
            let dg = metric_frame_bounds(s, g, p)?.b;
            if !(l * dg < bf.a) {
                return Err(MetricError::HypothesisViolated(format!(
                    "|λ| = {l} is not below a/d = {}",
                    bf.a / dg
                )));
            }
            (f.add(g, lambda)?, (bf.a - l * dg, bf.b + l * dg), Some(dg))
        }
    };
    let measured = metric_frame_bounds(s, &combined, p)?;
    let slack = 1e-12 * predicted.1.max(1.0);
    let contained = measured.a >= predicted.0 - slack && measured.b <= predicted.1 + slack;
    Ok(CombineReport { predicted, measured, bessel_g, contained })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricPerturbReport {
    /// The pairwise inequality holds for every pair and every prefix length.
    pub hypothesis_holds: bool,
    /// Largest violation of the pairwise inequality, divided by `d(x, y)`.
    pub worst_excess: f64,
    pub predicted: (f64, f64),
    pub measured: MetricBounds,
    /// Measured bounds of `G` inside the predicted envelope.
    pub contained: bool,
}

/// Perturbation certificate: checks, for every pair and every prefix `m`,
/// `‖Δ(f−g)‖ ≤ α‖Δf‖ + β‖Δg‖ + γ d(x, y)`, and predicts the bounds
/// `((1−α)a − γ)/(1+β)` and `((1+α)b + γ)/(1−β)` for `G`.
pub fn perturb_certificate(
    s: &MetricSample,
    f: &LipschitzFamily,
    g: &LipschitzFamily,
    alpha: f64,
    beta: f64,
    gamma: f64,
    p: f64,
) -> Result<MetricPerturbReport> {
    check_p(p)?;
    if !(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0) {
        return Err(MetricError::InvalidInput("α, β, γ must be nonnegative".into()));
    }
    if !(alpha < 1.0 && beta < 1.0) {
        return Err(MetricError::HypothesisViolated("need α < 1 and β < 1".into()));
    }
    let bf = metric_frame_bounds(s, f, p)?;
    if !(gamma < (1.0 - alpha) * bf.a) {
        return Err(MetricError::HypothesisViolated(format!(
            "need γ < (1 − α)a = {}",
            (1.0 - alpha) * bf.a
        )));
    }
    g.check_sample(s)?;
    if g.len() != f.len() {
        return Err(MetricError::InvalidInput("families differ in length".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for (i, j) in s.pairs() {
        let dij = s.d(i, j);
        let (mut sd, mut sf, mut sg) = (Vec::new(), Vec::new(), Vec::new());
        for n in 0..f.len() {
            let df = f.values[n][i] - f.values[n][j];
            let dg = g.values[n][i] - g.values[n][j];
            sd.push(df - dg);
            sf.push(df);
            sg.push(dg);
            let lhs = lp_norm(sd.iter().copied(), p);
            let rhs = alpha * lp_norm(sf.iter().copied(), p) + beta * lp_norm(sg.iter().copied(), p) + gamma * dij;
            worst = worst.max((lhs - rhs) / dij);
        }
    }
    let hypothesis_holds = worst <= 1e-12;
    let predicted = (((1.0 - alpha) * bf.a - gamma) / (1.0 + beta), ((1.0 + alpha) * bf.b + gamma) / (1.0 - beta));
    let measured = metric_frame_bounds(s, g, p)?;
    let slack = 1e-12 * predicted.1.max(1.0);
    let contained = measured.a >= predicted.0 - slack && measured.b <= predicted.1 + slack;
    Ok(MetricPerturbReport { hypothesis_holds, worst_excess: worst, predicted, measured, contained })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzPerturbReport {
    /// `r = (Σ Lip(f_n − g_n)^p)^{1/p}`.
    pub r: f64,
    pub applies: bool,
    pub predicted: (f64, f64),
    pub measured: MetricBounds,
    pub contained: bool,
}

/// Special case `α = β = 0`, `γ = r`: bounds `(a − r, b + r)` when `r < a`.
pub fn lipschitz_perturbation(
    s: &MetricSample,
    f: &LipschitzFamily,
    g: &LipschitzFamily,
    p: f64,
) -> Result<LipschitzPerturbReport> {
    check_p(p)?;
    let bf = metric_frame_bounds(s, f, p)?;
    let diff = f.add(g, -1.0)?;
    let lips: Result<Vec<f64>> = diff.values.iter().map(|row| lipschitz_number(s, row)).collect();
    let r = lp_norm(lips?, p);
    let predicted = (bf.a - r, bf.b + r);
    let measured = metric_frame_bounds(s, g, p)?;
    let slack = 1e-12 * predicted.1.max(1.0);
    let contained = measured.a >= predicted.0 - slack && measured.b <= predicted.1 + slack;
    Ok(LipschitzPerturbReport { r, applies: r < bf.a, predicted, measured, contained })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionReport {
    /// `max_x d(S(θ_f x), x)`.
    pub max_deviation: f64,
    /// Sampled Lipschitz number of `S` on the columns of the value table.
    pub reconstructor_lip: f64,
}

/// Applies a reconstructor to every column `(f_n(x))_n` of a line sample.
///
/// The column norm for the Lipschitz number of the reconstructor is `ℓ^p`.
pub fn reconstruction_check(
    s: &MetricSample,
    f: &LipschitzFamily,
    reconstructor: impl Fn(&[f64]) -> f64,
    p: f64,
) -> Result<ReconstructionReport> {
    check_p(p)?;
    f.check_sample(s)?;
    let xs = s.coordinates()?;
    let cols: Vec<Vec<f64>> = (0..s.len()).map(|j| f.column(j)).collect();
    let outs: Vec<f64> = cols.iter().map(|c| reconstructor(c)).collect();
    let max_deviation = outs.iter().zip(&xs).map(|(o, x)| (o - x).abs()).fold(0.0, f64::max);
    let mut lip = 0.0f64;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let dn = lp_norm(cols[i].iter().zip(&cols[j]).map(|(a, b)| a - b), p);
            if dn > 0.0 {
                lip = lip.max((outs[i] - outs[j]).abs() / dn);
            }
        }
    }
    Ok(ReconstructionReport { max_deviation, reconstructor_lip: lip })
}

/// `1 + |Σ_{n≥1} a_n|`, the reconstructor of the logarithmic 1-frame on `[1, ∞)`.
pub fn log_reconstructor(a: &[f64]) -> f64 {
    1.0 + a.iter().skip(1).sum::<f64>().abs()
}

/// Bounds `(1/‖S‖ − (α‖θ_f‖ + γ), ‖θ_f‖ + (α‖θ_f‖ + γ))` for a perturbed metric frame.
pub fn stability_bounds(theta_lip: f64, s_lip: f64, alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(theta_lip > 0.0 && s_lip > 0.0 && alpha >= 0.0 && gamma >= 0.0)
        || ![theta_lip, s_lip, alpha, gamma].iter().all(|x| x.is_finite())
    {
        return Err(MetricError::InvalidInput("need finite θ, S > 0 and α, γ ≥ 0".into()));
    }
    let e = alpha * theta_lip + gamma;
    if e > 1.0 / s_lip {
        return Err(MetricError::HypothesisViolated(format!(
            "α‖θ_f‖ + γ = {e} exceeds 1/‖S‖ = {}",
            1.0 / s_lip
        )));
    }
    Ok((1.0 / s_lip - e, theta_lip + e))
}
