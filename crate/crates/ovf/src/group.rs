use crate::{OvfError, OvfPair, Result};
use linops::{approx_eq, spectral_norm, tol, Matrix};

/// Finite group given by its Cayley table `mul[g][h] = gh`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(OvfError::InvalidInput("Cayley table must be square with entries < order".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(OvfError::InvalidInput("table is not associative".into()));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| OvfError::InvalidInput("no identity element".into()))?;
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| mul[g][h] == identity && mul[h][g] == identity))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| OvfError::InvalidInput("some element has no inverse".into()))?;
        Ok(FiniteGroup { mul, identity, inv })
    }

    /// Cyclic group `Z_n` with `g·h = g + h mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        FiniteGroup::new((0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }
}

/// Group-generated pair plus its residual diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupGenerated {
    /// Block `g` holds `Aπ_{g⁻¹}` and `Ψπ_{g⁻¹}`.
    pub pair: OvfPair,
    pub commutant_residual: f64,
    pub gc1_residual: f64,
}

fn validate_rep(group: &FiniteGroup, rep: &[Matrix]) -> Result<usize> {
    if rep.len() != group.order() {
        return Err(OvfError::InvalidInput(format!("need {} matrices, got {}", group.order(), rep.len())));
    }
    let d = rep[0].nrows();
    let id = Matrix::identity(d, d);
    for (g, u) in rep.iter().enumerate() {
        if u.shape() != (d, d) {
            return Err(OvfError::ShapeMismatch(format!("pi_{g} is not {d}x{d}")));
        }
        if !approx_eq(&(u.adjoint() * u), &id, tol::EQ) {
            return Err(OvfError::InvalidInput(format!("pi_{g} is not unitary")));
        }
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            if !approx_eq(&(&rep[g] * &rep[h]), &rep[group.mul(g, h)], tol::EQ) {
                return Err(OvfError::InvalidInput(format!("pi_{g} pi_{h} != pi_(gh): not a homomorphism")));
            }
        }
    }
    Ok(d)
}

/// `max_g ‖Sπ_g − π_gS‖`.
pub fn commutant_residual(p: &OvfPair, rep: &[Matrix]) -> f64 {
    let s = p.frame_operator();
    rep.iter().map(|u| spectral_norm(&(&s * u - u * &s))).fold(0.0, f64::max)
}

/// Largest of `‖A_{gp}A_{gq}* − A_pA_q*‖`, `‖A_{gp}Ψ_{gq}* − A_pΨ_q*‖` and
/// `‖Ψ_{gp}Ψ_{gq}* − Ψ_pΨ_q*‖` over all `g, p, q`; block `g` of `p` is the
/// element indexed by `g`.
pub fn gc1_residual(group: &FiniteGroup, p: &OvfPair) -> Result<f64> {
    let n = group.order();
    if p.len() != n {
        return Err(OvfError::ShapeMismatch(format!("pair has {} blocks, group order is {n}", p.len())));
    }
    let a = p.a_blocks();
    let psi = p.psi_blocks();
    let mut worst = 0f64;
    for g in 0..n {
        for x in 0..n {
            for y in 0..n {
                let (gx, gy) = (group.mul(g, x), group.mul(g, y));
                let defects = [
                    &a[gx] * a[gy].adjoint() - &a[x] * a[y].adjoint(),
                    &a[gx] * psi[gy].adjoint() - &a[x] * psi[y].adjoint(),
                    &psi[gx] * psi[gy].adjoint() - &psi[x] * psi[y].adjoint(),
                ];
                for def in &defects {
                    worst = worst.max(spectral_norm(def));
                }
            }
        }
    }
    Ok(worst)
}

/// `A_g = Aπ_{g⁻¹}`, `Ψ_g = Ψπ_{g⁻¹}` for a unitary representation given as a table.
pub fn group_generated(group: &FiniteGroup, rep: &[Matrix], a: &Matrix, psi: &Matrix) -> Result<GroupGenerated> {
    let d = validate_rep(group, rep)?;
    if a.ncols() != d || psi.shape() != a.shape() {
        return Err(OvfError::ShapeMismatch(format!("generators must be r x {d} and of equal shape")));
    }
    let n = group.order();
    let ab: Vec<Matrix> = (0..n).map(|g| a * &rep[group.inv(g)]).collect();
    let pb: Vec<Matrix> = (0..n).map(|g| psi * &rep[group.inv(g)]).collect();
    let pair = OvfPair::new(&ab, &pb)?;
    Ok(GroupGenerated {
        commutant_residual: commutant_residual(&pair, rep),
        gc1_residual: gc1_residual(group, &pair)?,
        pair,
    })
}
