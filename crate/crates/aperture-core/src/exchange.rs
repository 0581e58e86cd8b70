//! Matrix exchange format: square complex matrices as JSON arrays of
//! `[re, im]` pairs, row-major, with a dimension header. Values are
//! carried as `f64` on the wire and converted on load.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::matrix::CMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExchangeError {
    #[error("entry count {got} does not match dim² = {want}")]
    WrongEntryCount { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixExchange {
    pub dim: usize,
    /// Row-major `[re, im]` pairs, `dim²` of them.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixExchange {
    pub fn from_matrix(m: &DMatrix<Complex<f64>>) -> Self {
        assert!(m.is_square());
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, entries }
    }

    pub fn to_matrix<T: Scalar>(&self) -> Result<CMatrix<T>, ExchangeError> {
        if self.entries.len() != self.dim * self.dim {
            return Err(ExchangeError::WrongEntryCount {
                got: self.entries.len(),
                want: self.dim * self.dim,
            });
        }
        let mut m = CMatrix::<T>::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let [re, im] = self.entries[i * self.dim + j];
                m[(i, j)] = crate::scalar::complex(re, im);
            }
        }
        Ok(m)
    }
}
