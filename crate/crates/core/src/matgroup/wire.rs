//! JSON wire formats: complex matrices as row-major nested arrays of `[re, im]`.

use serde::{Deserialize, Serialize};

use super::linalg::{CMat, Complex64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixWire(pub Vec<Vec<[f64; 2]>>);

impl MatrixWire {
    pub fn from_matrix(m: &CMat) -> Self {
        MatrixWire(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.0.len();
        if n == 0 || self.0.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidElement("matrix must be square and non-empty".into()));
        }
        Ok(CMat::from_fn(n, n, |i, j| {
            let [re, im] = self.0[i][j];
            Complex64::new(re, im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementWire {
    pub torus: Vec<f64>,
    pub factors: Vec<MatrixWire>,
    #[serde(default)]
    pub coset: bool,
}
