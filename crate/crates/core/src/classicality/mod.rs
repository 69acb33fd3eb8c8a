//! Pure-state classicality, the nonclassicality function `f₁`, and its
//! convex roof.
//!
//! `f₁(v) = ‖(I − P_top)(v⊗v)‖` vanishes exactly on the orbit of the
//! highest-weight vector. Its convex roof over decompositions of `ρ` is
//! available in closed form whenever the detector `θ` exists
//! ([`f1_roof_exact`]); otherwise [`f1_roof_upper_bound`] searches
//! decompositions numerically.

mod density;
mod search;

pub use density::{DensityMatrix, DensityMatrixFile, DENSITY_SCHEMA};
pub use search::{f1_roof_upper_bound, f1_roof_upper_bound_with, RoofSearch};

use serde::{Deserialize, Serialize};

use crate::detector::AntiunitaryDetector;
use crate::error::Result;
use crate::exec::Exec;
use crate::io::ComplexVectorJson;
use crate::linalg::{conj, psd_sqrt, vnorm, CMat, CVec};
use crate::symdecomp::{SymDecomposition, SymmetricEmbedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    ExactRoof,
    PureValue,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedState {
    pub weight: f64,
    pub vector: ComplexVectorJson,
}

/// A value of `f₁` or of its convex roof.
///
/// Exact-roof values are on the scale of `f₁` itself: for a pure state the
/// exact roof equals [`f1_pure`], which is `|(v|θv)| / √N` in terms of the
/// unitary detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub kind: MeasureKind,
    /// `μ_j` in descending order (exact roof only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_spectrum: Option<Vec<f64>>,
    /// Decomposition achieving `value` (upper bound only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition_found: Option<Vec<WeightedState>>,
}

/// `(I − P_top)(v⊗v)` in symmetric coordinates.
fn off_top(dec: &SymDecomposition, emb: &SymmetricEmbedding, v: &CVec) -> CVec {
    let s = emb.square(v);
    let b = dec.basis(dec.top_index());
    &s - b * (b.adjoint() * &s)
}

pub fn is_pure_classical(dec: &SymDecomposition, emb: &SymmetricEmbedding, v: &CVec, tol: f64) -> bool {
    vnorm(&off_top(dec, emb, v)) < tol
}

/// `√((v⊗v|(I − P_top)|v⊗v))`.
pub fn f1_pure(dec: &SymDecomposition, emb: &SymmetricEmbedding, v: &CVec) -> f64 {
    vnorm(&off_top(dec, emb, v))
}

/// Scale relating the unitary detector to `f₁`: `f₁(v) = |(v|θv)| / √N`.
pub fn detector_scale(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

/// `μ_j`, the singular values of the matrix `√ρ · T · conj(√ρ)` of the
/// antilinear operator `√ρ θ √ρ`, descending.
pub fn mu_spectrum(rho: &DensityMatrix, theta: &AntiunitaryDetector) -> Vec<f64> {
    let s = psd_sqrt(rho.matrix());
    let m: CMat = &s * theta.matrix() * conj(&s);
    let mut mu: Vec<f64> = m.singular_values().iter().cloned().collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    mu
}

/// Closed-form convex roof `scale · max{0, μ₁ − Σ_{j≥2} μ_j}`.
pub fn f1_roof_exact(rho: &DensityMatrix, theta: &AntiunitaryDetector, scale: f64) -> Result<MeasureResult> {
    if rho.dim() != theta.dim() {
        return Err(crate::Error::DimensionMismatch { expected: theta.dim(), found: rho.dim() });
    }
    let mu = mu_spectrum(rho, theta);
    let rest: f64 = mu.iter().skip(1).sum();
    let value = scale * (mu.first().copied().unwrap_or(0.0) - rest).max(0.0);
    Ok(MeasureResult { value, kind: MeasureKind::ExactRoof, mu_spectrum: Some(mu), decomposition_found: None })
}

/// [`f1_roof_exact`] over a batch of states.
pub fn f1_roof_exact_batch(
    states: &[DensityMatrix],
    theta: &AntiunitaryDetector,
    scale: f64,
    exec: Exec,
) -> Result<Vec<f64>> {
    exec.map_slice(states, |rho| f1_roof_exact(rho, theta, scale).map(|m| m.value))
        .into_iter()
        .collect()
}
