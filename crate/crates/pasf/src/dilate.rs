use crate::{riesz_check, PAsf, Result};
use linops::{hcat, pinv, range_basis_tol, tol, vcat, Matrix, Vector};

/// Output of [`dilate`].
#[derive(Debug, Clone)]
pub struct Dilation {
    /// `P_{f,τ} = θ_f S⁻¹ θ_τ`.
    pub projection: Matrix,
    /// `K = I − P_{f,τ}`.
    pub complement: Matrix,
    /// Full-length form on `K^d ⊕ K^m`: rows `g_n = f_n ⊕ ζ_nK`.
    pub full_analysis: Matrix,
    /// Full-length form: columns `ω_n = τ_n ⊕ Ke_n`.
    pub full_synthesis: Matrix,
    /// Basis `B` (m×k) of `range(K)` with `K = BC`.
    pub basis: Matrix,
    /// Coordinates `C = B⁺K` (k×m).
    pub coords: Matrix,
    /// Dilated pair on `K^d ⊕ K^k` in the coordinates of `B`.
    pub dilated: PAsf,
    /// `θ_g S⁻¹ θ_ω = I` on the dilation coordinates.
    pub riesz: bool,
}

impl Dilation {
    /// `(τ_n, Ke_n)` for each `n`, the two summands of `ω_n`.
    pub fn omega_table(&self) -> Vec<(Vector, Vector)> {
        let d = self.full_synthesis.nrows() - self.complement.nrows();
        self.full_synthesis
            .column_iter()
            .map(|c| (c.rows(0, d).into_owned(), c.rows(d, c.len() - d).into_owned()))
            .collect()
    }

    /// First-summand restriction `(F, T)` of the dilated pair.
    pub fn restriction(&self) -> (Matrix, Matrix) {
        let d = self.dilated.dim() - self.coords.nrows();
        (
            self.dilated.analysis().columns(0, d).into_owned(),
            self.dilated.synthesis().rows(0, d).into_owned(),
        )
    }
}

/// Dilation of a p-ASF to a p-approximate Riesz basis on `X ⊕ range(I − P_{f,τ})`.
pub fn dilate(pf: &PAsf) -> Result<Dilation> {
    let m = pf.len();
    let projection = pf.projection()?;
    let complement = Matrix::identity(m, m) - &projection;
    let full_analysis = hcat(pf.analysis(), &complement);
    let full_synthesis = vcat(pf.synthesis(), &complement);
    // K is idempotent, so its nonzero singular values are ≥ 1; the cutoff is absolute
    let basis = range_basis_tol(&complement, 0.5);
    let coords = pinv(&basis) * &complement;
    let analysis = hcat(pf.analysis(), &basis);
    let synthesis = vcat(pf.synthesis(), &coords);
    let dilated = PAsf::new(pf.p(), analysis, synthesis)?;
    let riesz = riesz_check(&dilated)?;
    debug_assert!(
        linops::max_abs(&(&basis * &coords - &complement))
            <= 1e3 * tol::EQ * m as f64 * linops::max_abs(&complement).max(1.0)
    );
    Ok(Dilation { projection, complement, full_analysis, full_synthesis, basis, coords, dilated, riesz })
}
