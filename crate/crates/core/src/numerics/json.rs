use super::{CMatrix, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// `{"m", "re", "im"}` row-major; rows are output modes, columns input modes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(u: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..u.nrows()).map(|i| (0..u.ncols()).map(|j| f(&u[(i, j)])).collect()).collect()
        };
        Self { m: u.nrows(), re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let m = self.m;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == m && rows.iter().all(|r| r.len() == m);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Dimension(format!("matrix JSON does not hold {m}x{m} entries")));
        }
        Ok(CMatrix::from_fn(m, m, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }
}
