//! JSON shapes for complex data: row-major `re` / `im` arrays.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|k| f(&m[(r, k)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let rows = self.re.len();
        if self.im.len() != rows {
            return Err(Error::Parse(format!(
                "re has {rows} rows but im has {}",
                self.im.len()
            )));
        }
        let cols = self.re.first().map_or(0, Vec::len);
        for (r, (a, b)) in self.re.iter().zip(&self.im).enumerate() {
            if a.len() != cols || b.len() != cols {
                return Err(Error::Parse(format!("row {r} is ragged; expected {cols} columns")));
            }
        }
        Ok(CMat::from_fn(rows, cols, |r, k| c(self.re[r][k], self.im[r][k])))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexVectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVectorJson {
    pub fn from_vector(v: &CVec) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<CVec> {
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("re and im have different lengths".into()));
        }
        Ok(CVec::from_fn(self.re.len(), |i, _| c(self.re[i], self.im[i])))
    }
}
