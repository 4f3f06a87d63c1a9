use crate::{tol, LinopsError, Matrix, Result, C64};
use nalgebra::{DMatrix, SymmetricEigen};

// nalgebra's complex SVD can lose accuracy on rank-deficient input, so every
// SVD here runs on the real form [[Re A, −Im A], [Im A, Re A]], whose
// singular values are those of A, each repeated twice.

fn realify(a: &Matrix) -> DMatrix<f64> {
    let (r, c) = a.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = a[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`realify`] on matrices of real form.
fn complexify(m: &DMatrix<f64>) -> Matrix {
    let (r, c) = (m.nrows() / 2, m.ncols() / 2);
    Matrix::from_fn(r, c, |i, j| C64::new(m[(i, j)], m[(i + r, j)]))
}

/// Singular values in decreasing order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = realify(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s.into_iter().step_by(2).collect()
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Numerical rank with relative cutoff [`tol::RANK`].
pub fn rank(a: &Matrix) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol::RANK * top).count()
}

/// Inverse of a square matrix.
///
/// Singular when `σmin ≤ 1e-10 · σmax`.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(LinopsError::ShapeMismatch {
            expected: "square".into(),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let s = singular_values(a);
    let top = s.first().copied().unwrap_or(0.0);
    let bottom = s.last().copied().unwrap_or(0.0);
    let ratio = if top > 0.0 { bottom / top } else { 0.0 };
    if !(ratio > tol::INV_RATIO) {
        return Err(LinopsError::NotInvertible { ratio });
    }
    a.clone().lu().try_inverse().ok_or(LinopsError::NotInvertible { ratio })
}

/// Hermitian test: `max|S − S*| ≤ 1e-9 · max(1, max|S|)`.
pub fn is_hermitian(s: &Matrix) -> bool {
    s.is_square() && crate::approx_eq(s, &s.adjoint(), tol::EQ)
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_extremes(s: &Matrix) -> Result<(f64, f64)> {
    if !is_hermitian(s) {
        return Err(LinopsError::InvalidInput("matrix is not Hermitian".into()));
    }
    let h = (s + s.adjoint()) * C64::new(0.5, 0.0);
    let ev = SymmetricEigen::new(h).eigenvalues;
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Moore–Penrose pseudo-inverse with relative cutoff [`tol::RANK`].
pub fn pinv(a: &Matrix) -> Matrix {
    let top = spectral_norm(a);
    if top == 0.0 {
        return Matrix::zeros(a.ncols(), a.nrows());
    }
    let r = realify(a)
        .svd(true, true)
        .pseudo_inverse(tol::RANK * top)
        .expect("svd computed with both factors");
    complexify(&r)
}

/// `S^{-1/2}` for a Hermitian positive definite matrix.
pub fn inv_sqrt_psd(s: &Matrix) -> Result<Matrix> {
    let (lo, hi) = hermitian_extremes(s)?;
    if !(lo > tol::INV_RATIO * hi) {
        return Err(LinopsError::NotInvertible { ratio: lo / hi });
    }
    let h = (s + s.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let q = &eig.eigenvectors;
    let d = Matrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.sqrt(), 0.0)));
    Ok(q * d * q.adjoint())
}

/// Orthonormal basis of the column space, as columns.
pub fn range_basis(a: &Matrix) -> Matrix {
    let top = spectral_norm(a);
    range_basis_tol(a, tol::RANK * top)
}

/// Orthonormal basis of the span of left singular vectors with `σ > cutoff`.
pub fn range_basis_tol(a: &Matrix, cutoff: f64) -> Matrix {
    let n = a.nrows();
    if a.is_empty() {
        return Matrix::zeros(n, 0);
    }
    let svd = realify(a).svd(true, false);
    let u = svd.u.expect("requested u");
    let s = &svd.singular_values;
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cutoff && s[i] > 0.0).collect();
    if keep.is_empty() {
        return Matrix::zeros(n, 0);
    }
    // kept real vectors (x, y) give z = x + iy with Σ zz* = 2·(projector onto the range)
    let z = Matrix::from_fn(n, keep.len(), |i, j| C64::new(u[(i, keep[j])], u[(i + n, keep[j])]));
    projector_range(&(&z * z.adjoint() * C64::new(0.5, 0.0)))
}

/// Number of singular values above an absolute cutoff.
pub fn rank_tol(a: &Matrix, cutoff: f64) -> usize {
    singular_values(a).iter().filter(|&&x| x > cutoff && x > 0.0).count()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `q` inside `K^n`.
pub fn complement_basis(q: &Matrix) -> Matrix {
    let n = q.nrows();
    projector_range(&(Matrix::identity(n, n) - q * q.adjoint()))
}

/// Orthonormal basis of the range of an orthogonal projection, read off as
/// the eigenvectors with eigenvalue above 1/2.
pub fn projector_range(p: &Matrix) -> Matrix {
    let n = p.nrows();
    let eig = SymmetricEigen::new((p + p.adjoint()) * C64::new(0.5, 0.0));
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    Matrix::from_fn(n, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
}
