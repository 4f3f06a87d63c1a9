use crate::{
    blocks, first_embedding, first_projection, identity, inverse, require_square, trace, DilationQuadruple, Field,
    Mat, Result, VsError,
};
use serde::Serialize;

/// `U = [[T, I], [I, 0]]` with `U⁻¹ = [[0, I], [I, −T]]`.
pub fn halmos<F: Field>(t: &Mat<F>) -> Result<DilationQuadruple<F>> {
    let d = require_square(t, "T")?;
    let id = identity::<F>(d);
    let u = blocks(&[vec![Some(t.clone()), Some(id.clone())], vec![Some(id.clone()), None]], d);
    let u_inv = blocks(&[vec![None, Some(id.clone())], vec![Some(id), Some(-t.clone())]], d);
    Ok(DilationQuadruple {
        space: "V ⊕ V".into(),
        dim: d,
        blocks: 2,
        embedding: first_embedding(d, 2),
        u,
        u_inv: Some(u_inv),
        p: first_projection(d, 2),
        horizon: Some(1),
    })
}

/// Which block carries the invertibility hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchurCase {
    /// `T` and `D − CT⁻¹B` invertible.
    One = 1,
    /// `D` and `T − BD⁻¹C` invertible.
    Two = 2,
    /// `B` and `C − DB⁻¹T` invertible.
    Three = 3,
    /// `C` and `B − TC⁻¹D` invertible.
    Four = 4,
}

impl TryFrom<u8> for SchurCase {
    type Error = VsError;
    fn try_from(c: u8) -> Result<Self> {
        match c {
            1 => Ok(SchurCase::One),
            2 => Ok(SchurCase::Two),
            3 => Ok(SchurCase::Three),
            4 => Ok(SchurCase::Four),
            _ => Err(VsError::InvalidInput(format!("Schur case must be 1..4, got {c}"))),
        }
    }
}

fn inv_named<F: Field>(a: &Mat<F>, name: &str) -> Result<Mat<F>> {
    inverse(a).ok_or_else(|| VsError::NotInvertible(format!("{name} is singular")))
}

/// `U = [[T, B], [C, D]]` with the closed-form block inverse of the chosen case.
pub fn schur_halmos<F: Field>(
    t: &Mat<F>,
    b: &Mat<F>,
    c: &Mat<F>,
    d: &Mat<F>,
    case: SchurCase,
) -> Result<DilationQuadruple<F>> {
    let n = require_square(t, "T")?;
    for (x, name) in [(b, "B"), (c, "C"), (d, "D")] {
        if x.shape() != (n, n) {
            return Err(VsError::ShapeMismatch(format!("{name} must be {n}x{n}")));
        }
    }
    let grid = |a: Mat<F>, b: Mat<F>, c: Mat<F>, d: Mat<F>| blocks(&[vec![Some(a), Some(b)], vec![Some(c), Some(d)]], n);
    let u_inv = match case {
        SchurCase::One => {
            let ti = inv_named(t, "T")?;
            let s = inv_named(&(d - c * &ti * b), "D - C T^-1 B")?;
            grid(&ti + &ti * b * &s * c * &ti, -(&ti * b * &s), -(&s * c * &ti), s)
        }
        SchurCase::Two => {
            let di = inv_named(d, "D")?;
            let s = inv_named(&(t - b * &di * c), "T - B D^-1 C")?;
            grid(s.clone(), -(&s * b * &di), -(&di * c * &s), &di + &di * c * &s * b * &di)
        }
        SchurCase::Three => {
            let bi = inv_named(b, "B")?;
            let s = inv_named(&(c - d * &bi * t), "C - D B^-1 T")?;
            grid(-(&s * d * &bi), s.clone(), &bi + &bi * t * &s * d * &bi, -(&bi * t * &s))
        }
        SchurCase::Four => {
            let ci = inv_named(c, "C")?;
            let s = inv_named(&(b - t * &ci * d), "B - T C^-1 D")?;
            grid(-(&ci * d * &s), &ci + &ci * d * &s * t * &ci, s.clone(), -(&s * t * &ci))
        }
    };
    Ok(DilationQuadruple {
        space: "V ⊕ V".into(),
        dim: n,
        blocks: 2,
        embedding: first_embedding(n, 2),
        u: grid(t.clone(), b.clone(), c.clone(), d.clone()),
        u_inv: Some(u_inv),
        p: first_projection(n, 2),
        horizon: Some(1),
    })
}

/// `(N+1)`-block companion form: `T` and `I` in the first block row, identities
/// on the subdiagonal. `T^k = P U^k I` for `k ≤ N`.
pub fn n_dilation<F: Field>(t: &Mat<F>, n: usize) -> Result<DilationQuadruple<F>> {
    let d = require_square(t, "T")?;
    if n == 0 {
        return Err(VsError::InvalidInput("N must be at least 1".into()));
    }
    let nb = n + 1;
    let id = identity::<F>(d);
    let mut ug: Vec<Vec<Option<Mat<F>>>> = vec![vec![None; nb]; nb];
    let mut vg: Vec<Vec<Option<Mat<F>>>> = vec![vec![None; nb]; nb];
    ug[0][0] = Some(t.clone());
    ug[0][n] = Some(id.clone());
    for i in 1..nb {
        ug[i][i - 1] = Some(id.clone());
    }
    for i in 0..n {
        vg[i][i + 1] = Some(id.clone());
    }
    vg[n][0] = Some(id);
    vg[n][1] = Some(-t.clone());
    Ok(DilationQuadruple {
        space: format!("V^{nb}"),
        dim: d,
        blocks: nb,
        embedding: first_embedding(d, nb),
        u: blocks(&ug, d),
        u_inv: Some(blocks(&vg, d)),
        p: first_projection(d, nb),
        horizon: Some(n),
    })
}

/// Traces of the two Halmos dilations `[[T, T−I], [T+I, T]]` and `[[T, I], [I, 0]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonSimilarityWitness {
    pub trace_first: String,
    pub trace_second: String,
    /// Traces differ, so the dilations are not similar.
    pub distinct: bool,
    /// `tr T = 0`: the trace test cannot separate them.
    pub inconclusive: bool,
    /// The first matrix is invertible (its determinant is 1).
    pub first_invertible: bool,
}

pub fn non_similarity_witness<F: Field>(t: &Mat<F>) -> Result<NonSimilarityWitness> {
    let d = require_square(t, "T")?;
    let id = identity::<F>(d);
    let first = blocks(
        &[vec![Some(t.clone()), Some(t - &id)], vec![Some(t + &id), Some(t.clone())]],
        d,
    );
    let second = halmos(t)?.u;
    let (t1, t2) = (trace(&first), trace(&second));
    let inconclusive = trace(t).is_negligible();
    Ok(NonSimilarityWitness {
        distinct: !(t1.clone() - t2.clone()).is_negligible(),
        trace_first: t1.to_string(),
        trace_second: t2.to_string(),
        inconclusive,
        first_invertible: inverse(&first).is_some(),
    })
}
