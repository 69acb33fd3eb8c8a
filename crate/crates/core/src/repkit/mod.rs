//! Explicit matrix representations of compact semisimple Lie algebras.
//!
//! A [`RepSpec`] names a family and its parameters; [`build_representation`]
//! turns it into anti-Hermitian generator matrices together with Cartan and
//! ladder data, and validates the result (anti-Hermiticity, Lie closure, a
//! one-dimensional highest-weight line, irreducibility) before returning it.

mod families;
pub mod octonion;

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, commutant_dimension, commutator, expm_anti_hermitian, eye, fix_phase_vector, frob, gram_kernel,
    CMat, CVec, RealSpan,
};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest carrier-space dimension accepted by [`build_representation`].
/// The irreducibility check works on `N² × N²` operators.
pub const MAX_DIM: usize = 20;

pub const REP_SPEC_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum RepSpec {
    /// Spin `two_s / 2` representation of `SU(2)`.
    #[serde(rename = "su2")]
    Su2 { two_s: i64 },
    #[serde(rename = "suN_fundamental")]
    SuNFundamental { n: i64 },
    /// `Λ²ℂⁿ` of `SU(n)`.
    #[serde(rename = "suN_antisym_square")]
    SuNAntisymSquare { n: i64 },
    #[serde(rename = "product")]
    Product { factors: Vec<RepSpec> },
    #[serde(rename = "g2_fundamental")]
    G2Fundamental,
    #[serde(rename = "spin7_spinor")]
    Spin7Spinor,
}

/// Top-level document of a rep-spec file: the spec plus a schema version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepSpecFile {
    pub schema: u32,
    #[serde(flatten)]
    pub spec: RepSpec,
}

impl RepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RepSpecFile = serde_json::from_str(text)?;
        if file.schema != REP_SPEC_SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported rep-spec schema {} (expected {REP_SPEC_SCHEMA})",
                file.schema
            )));
        }
        Ok(file.spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RepSpecFile {
            schema: REP_SPEC_SCHEMA,
            spec: self.clone(),
        })
        .expect("rep spec serializes")
    }

    /// Dimension of the carrier space, after checking the parameter ranges.
    pub fn dim(&self) -> Result<usize> {
        let d = match self {
            RepSpec::Su2 { two_s } => {
                if *two_s < 0 {
                    return Err(Error::UnsupportedSpec(format!("two_s must be ≥ 0, got {two_s}")));
                }
                *two_s as usize + 1
            }
            RepSpec::SuNFundamental { n } | RepSpec::SuNAntisymSquare { n } => {
                if *n < 2 {
                    return Err(Error::UnsupportedSpec(format!("n must be ≥ 2, got {n}")));
                }
                if *n as usize > MAX_DIM {
                    return Err(Error::UnsupportedSpec(format!("n = {n} exceeds the size limit")));
                }
                let n = *n as usize;
                match self {
                    RepSpec::SuNFundamental { .. } => n,
                    _ => n * (n - 1) / 2,
                }
            }
            RepSpec::Product { factors } => {
                if factors.len() < 2 {
                    return Err(Error::UnsupportedSpec(
                        "a product needs at least two factors".into(),
                    ));
                }
                let mut d = 1usize;
                for f in factors {
                    d = d.saturating_mul(f.dim()?);
                }
                d
            }
            RepSpec::G2Fundamental => 7,
            RepSpec::Spin7Spinor => 8,
        };
        if d > MAX_DIM {
            return Err(Error::UnsupportedSpec(format!(
                "dimension {d} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        Ok(d)
    }

    /// Whether the family carries raising operators (everything except the
    /// exceptional families, and products containing them).
    pub fn has_ladder(&self) -> bool {
        match self {
            RepSpec::G2Fundamental | RepSpec::Spin7Spinor => false,
            RepSpec::Product { factors } => factors.iter().all(RepSpec::has_ladder),
            _ => true,
        }
    }

    fn parts(&self) -> families::Parts {
        match self {
            RepSpec::Su2 { two_s } => families::su2(*two_s as usize),
            RepSpec::SuNFundamental { n } => families::sun_fundamental(*n as usize),
            RepSpec::SuNAntisymSquare { n } => families::sun_antisym_square(*n as usize),
            RepSpec::Product { factors } => families::product(factors.iter().map(RepSpec::parts).collect()),
            RepSpec::G2Fundamental => octonion::g2_fundamental(),
            RepSpec::Spin7Spinor => octonion::spin7_spinor(),
        }
    }
}

/// Generators of an irreducible unitary representation, with Cartan and
/// ladder data. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Representation {
    spec: Option<RepSpec>,
    dim: usize,
    generators: Vec<CMat>,
    cartan: Vec<usize>,
    raising: Vec<CMat>,
    lowering: Vec<CMat>,
    factor_boundaries: Vec<Range<usize>>,
}

/// Outcome of the structural checks, one residual per property.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub max_anti_hermitian_residual: f64,
    pub max_closure_residual: f64,
    pub max_cartan_commutator: f64,
    /// `None` when the family provides no raising operators.
    pub highest_weight_kernel_dim: Option<usize>,
    pub commutant_dim: usize,
}

impl StructureReport {
    pub fn failures(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.max_anti_hermitian_residual > tol {
            out.push(format!("generators not anti-Hermitian ({:e})", self.max_anti_hermitian_residual));
        }
        if self.max_closure_residual > tol {
            out.push(format!("commutators leave the span ({:e})", self.max_closure_residual));
        }
        if self.max_cartan_commutator > tol {
            out.push(format!("Cartan generators do not commute ({:e})", self.max_cartan_commutator));
        }
        if let Some(k) = self.highest_weight_kernel_dim {
            if k != 1 {
                out.push(format!("raising operators have a {k}-dimensional joint kernel"));
            }
        }
        if self.commutant_dim != 1 {
            out.push(format!("commutant has dimension {}", self.commutant_dim));
        }
        out
    }
}

pub fn build_representation(spec: &RepSpec) -> Result<Representation> {
    build_representation_with_tol(spec, DEFAULT_TOL)
}

pub fn build_representation_with_tol(spec: &RepSpec, tol: f64) -> Result<Representation> {
    let dim = spec.dim()?;
    let parts = spec.parts();
    debug_assert_eq!(parts.dim, dim);
    let rep = Representation {
        spec: Some(spec.clone()),
        dim,
        generators: parts.generators,
        cartan: parts.cartan,
        raising: parts.raising,
        lowering: parts.lowering,
        factor_boundaries: parts.factor_boundaries,
    };
    let failures = rep.check_structure(tol).failures(tol);
    if !failures.is_empty() {
        return Err(Error::ConstructionFailure(failures.join("; ")));
    }
    Ok(rep)
}

impl Representation {
    /// Assemble a representation from explicit matrices, validating it like
    /// [`build_representation`] does.
    pub fn from_parts(
        generators: Vec<CMat>,
        cartan: Vec<usize>,
        raising: Vec<CMat>,
        lowering: Vec<CMat>,
        factor_boundaries: Vec<Range<usize>>,
        tol: f64,
    ) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::UnsupportedSpec("no generators".into()))?;
        for g in generators.iter().chain(&raising).chain(&lowering) {
            if g.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch { expected: dim, found: g.nrows() });
            }
        }
        let covered: usize = factor_boundaries.iter().map(|r| r.len()).sum();
        if covered != generators.len() || cartan.iter().any(|&i| i >= generators.len()) {
            return Err(Error::UnsupportedSpec("inconsistent generator indexing".into()));
        }
        let rep = Representation {
            spec: None,
            dim,
            generators,
            cartan,
            raising,
            lowering,
            factor_boundaries,
        };
        let failures = rep.check_structure(tol).failures(tol);
        if !failures.is_empty() {
            return Err(Error::ConstructionFailure(failures.join("; ")));
        }
        Ok(rep)
    }

    /// The same representation in the basis `w`: every operator `X ↦ W X W†`.
    pub fn conjugated(&self, w: &CMat) -> Representation {
        let conj = |x: &CMat| w * x * w.adjoint();
        Representation {
            spec: self.spec.clone(),
            dim: self.dim,
            generators: self.generators.iter().map(conj).collect(),
            cartan: self.cartan.clone(),
            raising: self.raising.iter().map(conj).collect(),
            lowering: self.lowering.iter().map(conj).collect(),
            factor_boundaries: self.factor_boundaries.clone(),
        }
    }

    pub fn spec(&self) -> Option<&RepSpec> {
        self.spec.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn raising(&self) -> &[CMat] {
        &self.raising
    }

    pub fn lowering(&self) -> &[CMat] {
        &self.lowering
    }

    pub fn factor_boundaries(&self) -> &[Range<usize>] {
        &self.factor_boundaries
    }

    pub fn factor_generators(&self, factor: usize) -> &[CMat] {
        &self.generators[self.factor_boundaries[factor].clone()]
    }

    pub fn check_structure(&self, tol: f64) -> StructureReport {
        let max_anti_hermitian_residual = self
            .generators
            .iter()
            .map(|g| frob(&(g + g.adjoint())))
            .fold(0.0, f64::max);

        let span = RealSpan::new(&self.generators, 1e-12);
        let mut max_closure_residual = 0.0f64;
        for (a, x) in self.generators.iter().enumerate() {
            for y in &self.generators[a + 1..] {
                max_closure_residual = max_closure_residual.max(span.residual(&commutator(x, y)));
            }
        }

        let mut max_cartan_commutator = 0.0f64;
        for (k, &a) in self.cartan.iter().enumerate() {
            for &b in &self.cartan[k + 1..] {
                max_cartan_commutator =
                    max_cartan_commutator.max(frob(&commutator(&self.generators[a], &self.generators[b])));
            }
        }

        let highest_weight_kernel_dim = if self.raising.is_empty() {
            None
        } else {
            Some(self.raising_kernel(tol).ncols())
        };

        StructureReport {
            max_anti_hermitian_residual,
            max_closure_residual,
            max_cartan_commutator,
            highest_weight_kernel_dim,
            commutant_dim: commutant_dimension(&self.generators, self.dim, 1e-10),
        }
    }

    fn raising_kernel(&self, tol: f64) -> CMat {
        let mut gram = CMat::zeros(self.dim, self.dim);
        for r in &self.raising {
            gram += r.adjoint() * r;
        }
        gram_kernel(&gram, tol)
    }
}

/// A unitary `Π(k)` in the representation.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: CMat,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { matrix: eye(n) }
    }

    pub fn unitarity_defect(&self) -> f64 {
        frob(&(self.matrix.adjoint() * &self.matrix - eye(self.matrix.nrows())))
    }
}

/// `exp(Σ_a c_a X_a)` for explicit real coefficients.
pub fn group_element_from_coefficients(rep: &Representation, coefficients: &[f64]) -> GroupElement {
    assert_eq!(coefficients.len(), rep.generators.len(), "one coefficient per generator");
    let mut x = CMat::zeros(rep.dim, rep.dim);
    for (g, &a) in rep.generators.iter().zip(coefficients) {
        x += g * c(a, 0.0);
    }
    GroupElement { matrix: expm_anti_hermitian(&x) }
}

/// Group element with standard-normal coefficients drawn from `seed`.
pub fn sample_group_element(rep: &Representation, seed: u64) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients: Vec<f64> = (0..rep.generators.len())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    group_element_from_coefficients(rep, &coefficients)
}

/// The unit vector annihilated by every raising operator, phase-fixed so its
/// largest entry is real positive.
pub fn highest_weight_vector(rep: &Representation) -> Result<CVec> {
    highest_weight_vector_with_tol(rep, DEFAULT_TOL)
}

pub fn highest_weight_vector_with_tol(rep: &Representation, tol: f64) -> Result<CVec> {
    if rep.raising.is_empty() {
        return Err(Error::Unsupported("highest_weight_vector".into()));
    }
    let kernel = rep.raising_kernel(tol);
    if kernel.ncols() != 1 {
        return Err(Error::DegenerateKernel(kernel.ncols()));
    }
    Ok(fix_phase_vector(&kernel.column(0).into_owned()))
}
