//! Choi-Jamiołkowski correspondence between CP maps on `V` and positive
//! operators on `V ⊗ V`.
//!
//! Conventions, all in one fixed standard basis `{e_i}`:
//!
//! * `Φ = Σ_i e_i ⊗ e_i` is **unnormalized**, `(Φ|Φ) = N`.
//! * `J(Λ) = (I ⊗ Λ)(|Φ)(Φ|)`. For a single Kraus operator `T` the Choi
//!   vector is `(I ⊗ T)Φ = Σ_{ij} T_{ji} e_i ⊗ e_j`, so the spectral Kraus
//!   operator of an eigenvector `f` is `T_{ji} = f_{(i,j)}`: the row index
//!   of `T` comes from the *second* tensor factor. This is the only choice
//!   for which `kraus_from ∘ jamiolkowski_forward` and `Λ(ρ) = Σ TρT†`
//!   agree with the inverse map `tr₁[(ρᵀ ⊗ I) A]`.
//! * With this convention `tr₁[A] = Σ_α T_α T_α†`, which is the trace
//!   preservation condition in the form used here.

use crate::error::{Error, Result};
use crate::linalg::{c, conj_vec, eigh, frob, hermitian_part, inner, kron, CMat, CVec};

/// Identifier of the orthonormal basis in which conjugation and reshapes
/// are taken. Only [`BasisTag::STANDARD`] is produced by this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisTag(pub u32);

impl BasisTag {
    pub const STANDARD: BasisTag = BasisTag(0);

    pub fn ensure_same(self, other: BasisTag) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch(self, other))
        }
    }
}

/// Relative eigenvalue cutoff below which spectral Kraus operators are
/// dropped.
pub const RANK_TOL: f64 = 1e-10;

/// A Hermitian operator on `V ⊗ V`, expected to be PSD.
#[derive(Clone, Debug)]
pub struct PositiveOperator {
    matrix: CMat,
    n: usize,
    basis: BasisTag,
}

impl PositiveOperator {
    /// Accepts any `N² × N²` matrix that is Hermitian within `1e-10·‖A‖`.
    /// Positivity is checked where it matters, in [`kraus_from`].
    pub fn new(matrix: CMat, n: usize, basis: BasisTag) -> Result<Self> {
        if matrix.shape() != (n * n, n * n) {
            return Err(Error::DimensionMismatch { expected: n * n, found: matrix.nrows() });
        }
        let defect = frob(&(&matrix - matrix.adjoint()));
        if defect > 1e-10 * frob(&matrix).max(1.0) {
            return Err(Error::InvalidState(format!("operator is not Hermitian ({defect:e})")));
        }
        Ok(Self { matrix: hermitian_part(&matrix), n, basis })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }
}

/// Kraus operators with their spectral weights already absorbed.
#[derive(Clone, Debug)]
pub struct KrausSet {
    pub operators: Vec<CMat>,
    pub weights: Vec<f64>,
    pub basis: BasisTag,
}

impl KrausSet {
    pub fn new(operators: Vec<CMat>, basis: BasisTag) -> Self {
        let weights = operators.iter().map(|t| crate::linalg::hs(t, t).re).collect();
        Self { operators, weights, basis }
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Λ(ρ) = Σ_α T_α ρ T_α†`.
    pub fn apply(&self, rho: &CMat) -> CMat {
        self.operators
            .iter()
            .fold(CMat::zeros(rho.nrows(), rho.ncols()), |acc, t| acc + t * rho * t.adjoint())
    }
}

/// `(I ⊗ T)Φ` as a vector in `V ⊗ V`.
pub fn choi_vector(t: &CMat) -> CVec {
    let n = t.nrows();
    CVec::from_fn(n * n, |k, _| t[(k % n, k / n)])
}

/// Inverse of [`choi_vector`].
pub fn kraus_from_vector(f: &CVec, n: usize) -> CMat {
    CMat::from_fn(n, n, |j, i| f[i * n + j])
}

/// `A = Σ_α (I⊗T_α)|Φ)(Φ|(I⊗T_α†)`.
pub fn jamiolkowski_forward(kraus: &KrausSet, n: usize) -> Result<PositiveOperator> {
    let mut a = CMat::zeros(n * n, n * n);
    for t in &kraus.operators {
        if t.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: t.nrows() });
        }
        let f = choi_vector(t);
        a += &f * f.adjoint();
    }
    PositiveOperator::new(a, n, kraus.basis)
}

/// `Λ(ρ) = tr₁[(ρᵀ ⊗ I) A]`.
pub fn inverse_jamiolkowski_apply(a: &PositiveOperator, rho: &CMat) -> Result<CMat> {
    let n = a.n;
    if rho.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: rho.nrows() });
    }
    Ok(partial_trace_first(&(kron(&rho.transpose(), &crate::linalg::eye(n)) * &a.matrix), n))
}

/// Spectral Kraus decomposition: one operator per eigenvalue above
/// `RANK_TOL·‖A‖`, `T_α = √λ_α · reshape(f_α)`.
pub fn kraus_from(a: &PositiveOperator) -> Result<KrausSet> {
    let (vals, vecs) = eigh(&a.matrix);
    let scale = vals.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if let Some(&min) = vals.first() {
        if min < -1e-8 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let mut operators = Vec::new();
    let mut weights = Vec::new();
    for (k, &lambda) in vals.iter().enumerate().rev() {
        if lambda <= RANK_TOL * scale {
            continue;
        }
        let f = vecs.column(k).into_owned();
        operators.push(kraus_from_vector(&f, a.n) * c(lambda.sqrt(), 0.0));
        weights.push(lambda);
    }
    Ok(KrausSet { operators, weights, basis: a.basis })
}

/// `(tr₁ A)_{jl} = Σ_i A_{(i,j),(i,l)}`.
pub fn partial_trace_first(a: &CMat, n: usize) -> CMat {
    CMat::from_fn(n, n, |j, l| (0..n).map(|i| a[(i * n + j, i * n + l)]).sum())
}

/// Whether `tr₁ A = c·I`; `scale` is `c = tr(A)/N` regardless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePreservation {
    pub proportional: bool,
    pub scale: f64,
    /// `‖tr₁ A − c·I‖_F`.
    pub deviation: f64,
}

pub fn is_proportional_trace_preserving(a: &PositiveOperator, tol: f64) -> TracePreservation {
    let n = a.n;
    let marginal = partial_trace_first(&a.matrix, n);
    let scale = marginal.trace().re / n as f64;
    let deviation = frob(&(marginal - crate::linalg::eye(n) * c(scale, 0.0)));
    TracePreservation {
        proportional: deviation <= tol * scale.abs().max(1.0) && scale > 0.0,
        scale,
        deviation,
    }
}

/// `(v₁⊗v₂ | A (v₃⊗v₄))` computed directly.
pub fn matrix_element(a: &PositiveOperator, v: [&CVec; 4]) -> num_complex::Complex64 {
    let left = crate::linalg::kron_vec(v[0], v[1]);
    let right = crate::linalg::kron_vec(v[2], v[3]);
    inner(&left, &(&a.matrix * right))
}

/// The same matrix element through the Kraus operators,
/// `Σ_α (v₂|T_α 𝒦 v₁)(𝒦 v₃|T_α† v₄)`.
///
/// The first factor pairs `v₂` with `T_α 𝒦 v₁`; writing it as
/// `(v₁|T_α 𝒦 v₂)` is only correct when every `T_α` is symmetric, which is
/// the case for operators supported on `V ∨ V`.
pub fn kraus_matrix_element(kraus: &KrausSet, v: [&CVec; 4]) -> num_complex::Complex64 {
    let k1 = conj_vec(v[0]);
    let k3 = conj_vec(v[2]);
    kraus
        .operators
        .iter()
        .map(|t| inner(v[1], &(t * &k1)) * inner(&k3, &(t.adjoint() * v[3])))
        .sum()
}

/// `|Φ)(Φ|` with the unnormalized `Φ`.
pub fn maximally_entangled_projector(n: usize) -> PositiveOperator {
    let phi = choi_vector(&crate::linalg::eye(n));
    PositiveOperator::new(&phi * phi.adjoint(), n, BasisTag::STANDARD).expect("Hermitian by construction")
}

#[doc(hidden)]
pub fn identity_kraus(n: usize) -> KrausSet {
    KrausSet { operators: vec![crate::linalg::eye(n)], weights: vec![n as f64], basis: BasisTag::STANDARD }
}
