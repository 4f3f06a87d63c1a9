//! Finite frames for `K^d`.
//!
//! A frame is stored through its synthesis matrix `T` (d×m), whose columns
//! are the frame vectors. The analysis matrix is `Θ = T*`, so
//! `(Θh)_n = ⟨h, τ_n⟩`, and the frame operator is `S = TT*`.

mod named;
mod perturb;

pub use named::{make_named_frame, NamedFrame};
pub use perturb::{perturb_certificate, PerturbMode, PerturbReport};

use linops::{
    hermitian_extremes, inner, inv_sqrt_psd, inverse, rank, tol, LinopsError, Matrix, MatrixJson,
    Vector, C64,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HframeError {
    #[error("family is not a frame (rank {rank} < dim {dim})")]
    NotAFrame { rank: usize, dim: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("input vectors are linearly dependent (at index {0})")]
    DependentInput(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error(transparent)]
    Linops(#[from] LinopsError),
}

pub type Result<T> = std::result::Result<T, HframeError>;

/// Finite family of vectors in `K^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertFrame {
    t: Matrix,
}

impl HilbertFrame {
    /// Wraps a synthesis matrix whose columns are the frame vectors.
    pub fn new(synthesis: Matrix) -> Result<Self> {
        if synthesis.nrows() == 0 || synthesis.ncols() == 0 {
            return Err(HframeError::InvalidInput("frame needs dim >= 1 and at least one vector".into()));
        }
        linops::check_finite(&synthesis)?;
        Ok(HilbertFrame { t: synthesis })
    }

    pub fn from_vectors(vectors: &[Vector]) -> Result<Self> {
        let d = vectors.first().map_or(0, |v| v.len());
        if vectors.iter().any(|v| v.len() != d) {
            return Err(HframeError::InvalidInput("vectors have different lengths".into()));
        }
        Self::new(Matrix::from_fn(d, vectors.len(), |i, j| vectors[j][i]))
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn len(&self) -> usize {
        self.t.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.t.ncols() == 0
    }

    /// Synthesis matrix `Θ*` (d×m).
    pub fn synthesis(&self) -> &Matrix {
        &self.t
    }

    /// Analysis matrix `Θ` (m×d).
    pub fn analysis(&self) -> Matrix {
        self.t.adjoint()
    }

    pub fn vector(&self, n: usize) -> Vector {
        self.t.column(n).into_owned()
    }

    pub fn vectors(&self) -> Vec<Vector> {
        (0..self.len()).map(|n| self.vector(n)).collect()
    }

    /// Frame operator `S = Σ τ_nτ_n*`.
    pub fn frame_operator(&self) -> Matrix {
        &self.t * self.t.adjoint()
    }

    /// Partial frame operator `S_M h = Σ_{n∈M} ⟨h,τ_n⟩τ_n`.
    pub fn partial_operator(&self, subset: &[usize]) -> Matrix {
        let mut s = Matrix::zeros(self.dim(), self.dim());
        for &n in subset {
            let v = self.t.column(n);
            s += v * v.adjoint();
        }
        s
    }

    pub fn is_frame(&self) -> bool {
        rank(&self.t) == self.dim()
    }

    fn require_frame(&self) -> Result<()> {
        let r = rank(&self.t);
        if r < self.dim() {
            Err(HframeError::NotAFrame { rank: r, dim: self.dim() })
        } else {
            Ok(())
        }
    }

    /// Whether `‖S − I‖` is within the Parseval admission tolerance.
    pub fn is_parseval(&self) -> bool {
        linops::identity_residual(&self.frame_operator()) <= tol::PARSEVAL
    }
}

/// Optimal frame bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub a: f64,
    pub b: f64,
    pub is_frame: bool,
}

impl FrameBounds {
    pub fn is_tight(&self, tol: f64) -> bool {
        self.is_frame && (self.b - self.a).abs() <= tol * self.b.max(1.0)
    }
}

/// Extreme eigenvalues of the frame operator; `a = 0` when the family does not span.
pub fn frame_bounds(f: &HilbertFrame) -> FrameBounds {
    let (lo, hi) = hermitian_extremes(&f.frame_operator()).expect("frame operator is Hermitian");
    let is_frame = f.is_frame();
    FrameBounds { a: if is_frame { lo.max(0.0) } else { 0.0 }, b: hi.max(0.0), is_frame }
}

/// Canonical dual `{S⁻¹τ_n}`.
pub fn canonical_dual(f: &HilbertFrame) -> Result<HilbertFrame> {
    f.require_frame()?;
    let sinv = inverse(&f.frame_operator())?;
    HilbertFrame::new(sinv * &f.t)
}

/// Canonical Parseval frame `{S^{-1/2}τ_n}`.
pub fn parsevalize(f: &HilbertFrame) -> Result<HilbertFrame> {
    f.require_frame()?;
    let r = inv_sqrt_psd(&f.frame_operator())?;
    HilbertFrame::new(r * &f.t)
}

/// Iterates of the frame algorithm.
#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    /// `h_1, …, h_n`.
    pub approximants: Vec<Vector>,
    /// Certified contraction ratio `(b − a)/(b + a)`.
    pub rho: f64,
    pub bounds: FrameBounds,
}

/// `h_0 = 0`, `h_k = h_{k−1} + (2/(a+b)) S(h − h_{k−1})`.
pub fn frame_algorithm(f: &HilbertFrame, h: &Vector, n_iters: usize) -> Result<AlgorithmRun> {
    f.require_frame()?;
    if h.len() != f.dim() {
        return Err(HframeError::InvalidInput(format!("vector length {} != dim {}", h.len(), f.dim())));
    }
    let bounds = frame_bounds(f);
    let s = f.frame_operator();
    let step = C64::new(2.0 / (bounds.a + bounds.b), 0.0);
    let mut cur = Vector::zeros(f.dim());
    let mut approximants = Vec::with_capacity(n_iters);
    for _ in 0..n_iters {
        cur = &cur + &s * (h - &cur) * step;
        approximants.push(cur.clone());
    }
    let rho = (bounds.b - bounds.a) / (bounds.b + bounds.a);
    Ok(AlgorithmRun { approximants, rho, bounds })
}

/// Which identities `frame_identity_residuals` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityMode {
    /// Only the general identity with the canonical dual.
    General,
    /// Also the Parseval identity and the lower-bound expression; requires `S = I`.
    Parseval,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub general_residual: f64,
    pub parseval_residual: Option<f64>,
    /// `Σ_{M}|⟨h,τ_n⟩|² + ‖Σ_{Mᶜ}⟨h,τ_n⟩τ_n‖²`, to compare with `(3/4)‖h‖²`.
    pub lower_bound_value: Option<f64>,
}

/// Validates and sorts a 0-based index subset; returns it and its complement.
pub fn split_subset(m: usize, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut inside = vec![false; m];
    for &n in subset {
        if n >= m {
            return Err(HframeError::InvalidInput(format!("index {n} out of range 0..{m}")));
        }
        inside[n] = true;
    }
    let ms = (0..m).filter(|&n| inside[n]).collect();
    let mc = (0..m).filter(|&n| !inside[n]).collect();
    Ok((ms, mc))
}

pub fn frame_identity_residuals(
    f: &HilbertFrame,
    subset: &[usize],
    h: &Vector,
    mode: IdentityMode,
) -> Result<IdentityResiduals> {
    f.require_frame()?;
    if h.len() != f.dim() {
        return Err(HframeError::InvalidInput("vector length does not match dim".into()));
    }
    if mode == IdentityMode::Parseval && !f.is_parseval() {
        return Err(HframeError::InvalidInput("frame is not Parseval".into()));
    }
    let (ms, mc) = split_subset(f.len(), subset)?;
    let coeff = f.analysis() * h;
    let energy = |idx: &[usize]| idx.iter().map(|&n| coeff[n].norm_sqr()).sum::<f64>();
    let dual = canonical_dual(f)?;
    let dual_energy = |g: &Vector| (dual.analysis() * g).norm_squared();

    let sm = f.partial_operator(&ms) * h;
    let smc = f.partial_operator(&mc) * h;
    let lhs = energy(&ms) - dual_energy(&sm);
    let rhs = energy(&mc) - dual_energy(&smc);
    let general_residual = (lhs - rhs).abs();

    let (parseval_residual, lower_bound_value) = match mode {
        IdentityMode::General => (None, None),
        IdentityMode::Parseval => {
            let l = energy(&ms) - sm.norm_squared();
            let r = energy(&mc) - smc.norm_squared();
            (Some((l - r).abs()), Some(energy(&ms) + smc.norm_squared()))
        }
    };
    Ok(IdentityResiduals { general_residual, parseval_residual, lower_bound_value })
}

/// Finite Riesz basis test: `m = d` and the Gram matrix is invertible.
pub fn riesz_basis_check(f: &HilbertFrame) -> bool {
    if f.len() != f.dim() {
        return false;
    }
    let gram = f.analysis() * &f.t;
    inverse(&gram).is_ok()
}

/// Naimark-type dilation of a frame to a Riesz basis.
#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    /// `d + (m − r)`.
    pub dim: usize,
    /// `ω_n = τ_n ⊕ (I − P_τ)e_n`, with the second summand in coordinates of an
    /// orthonormal basis of `range(I − P_τ)`.
    pub omega: HilbertFrame,
    /// Orthogonal projection onto the first summand.
    pub projection: Matrix,
    /// Orthonormal basis (m×(m−r)) of `range(I − P_τ)` used for coordinates.
    pub complement_basis: Matrix,
}

pub fn naimark_dilate(f: &HilbertFrame) -> Result<NaimarkDilation> {
    f.require_frame()?;
    let (d, m) = (f.dim(), f.len());
    let theta = f.analysis();
    let sinv = inverse(&f.frame_operator())?;
    let p = &theta * sinv * theta.adjoint();
    let q = linops::projector_range(&(Matrix::identity(m, m) - p));
    let k = q.ncols();
    let mut omega = Matrix::zeros(d + k, m);
    omega.view_mut((0, 0), (d, m)).copy_from(&f.t);
    if k > 0 {
        omega.view_mut((d, 0), (k, m)).copy_from(&q.adjoint());
    }
    let mut projection = Matrix::zeros(d + k, d + k);
    projection.view_mut((0, 0), (d, d)).fill_with_identity();
    Ok(NaimarkDilation { dim: d + k, omega: HilbertFrame::new(omega)?, projection, complement_basis: q })
}

/// Gram–Schmidt orthonormalization preserving nested spans.
pub fn gram_schmidt(vectors: &[Vector]) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for e in &out {
                let c = inner(&w, e);
                w -= e * c;
            }
        }
        let n = w.norm();
        if n <= tol::RANK * v.norm().max(f64::MIN_POSITIVE) || n == 0.0 {
            return Err(HframeError::DependentInput(k));
        }
        out.push(w / C64::new(n, 0.0));
    }
    Ok(out)
}

/// Wire form: `{"field": "C"|"R", "dim": d, "vectors": Matrix}` with vectors as columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameJson {
    #[serde(default = "default_field")]
    pub field: String,
    pub dim: usize,
    pub vectors: MatrixJson,
}

fn default_field() -> String {
    "C".into()
}

impl FrameJson {
    pub fn to_frame(&self) -> Result<HilbertFrame> {
        let t = self.vectors.to_matrix()?;
        if t.nrows() != self.dim {
            return Err(HframeError::InvalidInput(format!(
                "vectors have length {} but dim is {}",
                t.nrows(),
                self.dim
            )));
        }
        if self.field == "R" && t.iter().any(|z| z.im != 0.0) {
            return Err(HframeError::InvalidInput("real field with complex entries".into()));
        }
        HilbertFrame::new(t)
    }

    pub fn from_frame(f: &HilbertFrame) -> Self {
        let real = f.synthesis().iter().all(|z| z.im == 0.0);
        FrameJson {
            field: if real { "R" } else { "C" }.into(),
            dim: f.dim(),
            vectors: MatrixJson::from_matrix(f.synthesis()),
        }
    }
}
