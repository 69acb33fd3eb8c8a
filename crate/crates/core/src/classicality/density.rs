use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, eye, frob, hermitian_part, hs_random_density, CMat, CVec};

pub const DENSITY_SCHEMA: u32 = 1;

/// Hermitian, PSD, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: CMat,
}

impl DensityMatrix {
    /// Validates with Hermiticity and trace tolerance `tol`; eigenvalues may
    /// dip to `-tol` before the state is rejected.
    pub fn new(rho: CMat, tol: f64) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::InvalidState(format!("matrix is {}×{}", rho.nrows(), rho.ncols())));
        }
        if rho.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = frob(&(&rho - rho.adjoint()));
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (‖ρ − ρ†‖ = {herm:e})")));
        }
        let rho = hermitian_part(&rho);
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let (vals, _) = eigh(&rho);
        if let Some(&min) = vals.first() {
            if min < -tol {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { rho })
    }

    pub fn from_pure(v: &CVec) -> Self {
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self { rho: v * v.adjoint() / c(norm2, 0.0) }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { rho: eye(n) / c(n as f64, 0.0) }
    }

    pub fn random_hs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self { rho: hs_random_density(n, rng) }
    }

    /// `Σ_k w_k ρ_k` for nonnegative weights summing to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Self {
        let n = parts[0].1.dim();
        let rho = parts.iter().fold(CMat::zeros(n, n), |acc, (w, r)| acc + &r.rho * c(*w, 0.0));
        Self { rho }
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMat) -> Self {
        Self { rho: hermitian_part(&(u * &self.rho * u.adjoint())) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn from_json(text: &str, tol: f64) -> Result<Self> {
        let file: DensityMatrixFile = serde_json::from_str(text)?;
        file.to_density(tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DensityMatrixFile::from_density(self)).expect("density matrix serializes")
    }
}

/// `{"schema":1, "dim":N, "re":[[...]], "im":[[...]]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixFile {
    pub schema: u32,
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityMatrixFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = crate::io::ComplexMatrixJson::from_matrix(rho.matrix());
        Self { schema: DENSITY_SCHEMA, dim: rho.dim(), re: m.re, im: m.im }
    }

    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix> {
        if self.schema != DENSITY_SCHEMA {
            return Err(Error::Parse(format!("unsupported density-matrix schema {}", self.schema)));
        }
        let m = crate::io::ComplexMatrixJson { re: self.re.clone(), im: self.im.clone() }.to_matrix()?;
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::Parse(format!(
                "declared dim {} but matrix is {}×{}",
                self.dim,
                m.nrows(),
                m.ncols()
            )));
        }
        DensityMatrix::new(m, tol)
    }
}
