use crate::{LinopsError, Matrix, Result, C64};
use serde::{Deserialize, Serialize};

/// Wire form of a matrix: `{"rows", "cols", "re", "im"?}` with row-major tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(LinopsError::InvalidInput("matrix must have rows, cols >= 1".into()));
        }
        let check = |t: &Vec<Vec<f64>>, name: &str| -> Result<()> {
            if t.len() != self.rows || t.iter().any(|r| r.len() != self.cols) {
                return Err(LinopsError::InvalidInput(format!(
                    "'{name}' table does not match {}x{}",
                    self.rows, self.cols
                )));
            }
            if t.iter().flatten().any(|x| !x.is_finite()) {
                return Err(LinopsError::InvalidInput(format!("'{name}' has non-finite entries")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |t| t[i][j]))
        }))
    }

    /// Serializes `a`, omitting `im` when every imaginary part is zero.
    pub fn from_matrix(a: &Matrix) -> Self {
        let (r, c) = a.shape();
        let re = (0..r).map(|i| (0..c).map(|j| a[(i, j)].re).collect()).collect();
        let real = a.iter().all(|z| z.im == 0.0);
        let im = (!real).then(|| (0..r).map(|i| (0..c).map(|j| a[(i, j)].im).collect()).collect());
        MatrixJson { rows: r, cols: c, re, im }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = LinopsError;
    fn try_from(m: MatrixJson) -> Result<Matrix> {
        m.to_matrix()
    }
}
