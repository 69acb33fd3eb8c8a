//! Commands behind the `gcs` binary. Each command returns a serializable
//! document; `main` only handles argument parsing, output and exit codes.

use std::path::Path;

use gcs_core::choi::{
    is_proportional_trace_preserving, jamiolkowski_forward, kraus_from, kraus_matrix_element, matrix_element,
    partial_trace_first, BasisTag, PositiveOperator,
};
use gcs_core::classicality::{
    detector_scale, f1_pure, f1_roof_exact, f1_roof_upper_bound, is_pure_classical, DensityMatrix, DensityMatrixFile,
    MeasureResult, RoofSearch,
};
use gcs_core::detector::{extract_theta, theta_expectation, verify_k_invariance, AntiunitaryDetector, DEFAULT_SAMPLES};
use gcs_core::io::{ComplexMatrixJson, ComplexVectorJson};
use gcs_core::linalg::{c, eye, frob, ginibre, random_unit_vector, CMat, CVec};
use gcs_core::repkit::{build_representation_with_tol, highest_weight_vector, sample_group_element, RepSpec, Representation};
use gcs_core::symdecomp::{
    casimir_on_symmetric_square, decompose, is_theta_admissible, symmetric_square_action, SymCasimir, SymDecomposition,
    SymmetricEmbedding,
};
use gcs_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub iters: usize,
    pub restarts: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let search = RoofSearch::default();
        Self { tol: 1e-10, seed: 0, iters: search.iters, restarts: search.restarts }
    }
}

/// Every tolerance a command uses, derived from the single `--tol` value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Representation structure checks (`1 × tol`).
    pub structure: f64,
    /// Casimir eigenvalue clustering (`100 × tol`).
    pub cluster: f64,
    /// Admissibility, θ extraction and θ invariance (`10 × tol`).
    pub theta: f64,
    /// Density-matrix validation on load (`100 × tol`).
    pub density: f64,
    /// Pure-state classicality decisions (`10 × tol`).
    pub zero_set: f64,
}

impl Tolerances {
    pub fn from_tol(tol: f64) -> Self {
        Self { structure: tol, cluster: 100.0 * tol, theta: 10.0 * tol, density: 100.0 * tol, zero_set: 10.0 * tol }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub eigenvalues: Vec<f64>,
    /// One row per component, one entry per simple factor.
    pub factor_eigenvalues: Vec<Vec<f64>>,
    pub dims: Vec<usize>,
    pub top_index: usize,
    pub complement_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub cluster_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariance_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_invariance_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSettings>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalityReport {
    pub schema: u32,
    pub rep_spec: RepSpec,
    pub dim: usize,
    pub decomposition: DecompositionReport,
    pub theta_exists: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_matrix: Option<ComplexMatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureResult>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    ClassicalPure,
    ClassicalMixed,
    RandomMixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFile {
    pub schema: u32,
    pub rep_spec: RepSpec,
    pub kind: SampleKind,
    pub seed: u64,
    pub states: Vec<DensityMatrixFile>,
    /// State vectors, for `classical-pure` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<ComplexVectorJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub schema: u32,
    pub rep_spec: RepSpec,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Failure of a command, with its exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Core(Error),
    Io { path: String, message: String },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    schema: u32,
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => match e {
                Error::UnsupportedSpec(_) => "UnsupportedSpec",
                Error::ConstructionFailure(_) => "ConstructionFailure",
                Error::DegenerateKernel(_) => "DegenerateKernel",
                Error::Unsupported(_) => "Unsupported",
                Error::ClusterAmbiguity { .. } => "ClusterAmbiguity",
                Error::NotPsd { .. } => "NotPSD",
                Error::BasisMismatch(..) => "BasisMismatch",
                Error::NotAdmissible { .. } => "NotAdmissible",
                Error::RescaleFailure { .. } => "RescaleFailure",
                Error::InvalidState(_) => "InvalidState",
                Error::DimensionMismatch { .. } => "DimensionMismatch",
                Error::Parse(_) => "ParseError",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_INPUT,
            CliError::Core(e) => match e {
                Error::UnsupportedSpec(_)
                | Error::Unsupported(_)
                | Error::InvalidState(_)
                | Error::DimensionMismatch { .. }
                | Error::Parse(_) => EXIT_INPUT,
                Error::ConstructionFailure(_) => EXIT_VALIDATION,
                Error::DegenerateKernel(_)
                | Error::ClusterAmbiguity { .. }
                | Error::NotPsd { .. }
                | Error::BasisMismatch(..)
                | Error::NotAdmissible { .. }
                | Error::RescaleFailure { .. } => EXIT_NUMERICAL,
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Io { path, message } => format!("{path}: {message}"),
            CliError::Core(e) => e.to_string(),
        }
    }

    /// `{"schema":1,"error":{"kind":..., "message":...}}`.
    pub fn to_json(&self) -> String {
        let doc = ErrorDocument { schema: REPORT_SCHEMA, error: ErrorBody { kind: self.kind(), message: self.message() } };
        serde_json::to_string_pretty(&doc).expect("error document serializes")
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_spec(path: &Path) -> CliResult<RepSpec> {
    Ok(RepSpec::from_json(&read(path)?)?)
}

/// Representation plus everything derived from its symmetric square.
struct Analysis {
    spec: RepSpec,
    rep: Representation,
    casimir: SymCasimir,
    sym_generators: Vec<CMat>,
    dec: SymDecomposition,
    emb: SymmetricEmbedding,
    theta: Option<AntiunitaryDetector>,
    tolerances: Tolerances,
}

impl Analysis {
    fn new(spec: RepSpec, settings: &Settings) -> CliResult<Self> {
        let tolerances = Tolerances::from_tol(settings.tol);
        let rep = build_representation_with_tol(&spec, tolerances.structure)?;
        let casimir = casimir_on_symmetric_square(&rep);
        let sym_generators = symmetric_square_action(&rep);
        let dec = decompose(&casimir, &sym_generators, tolerances.cluster)?;
        let emb = SymmetricEmbedding::new(rep.dim());
        let theta = if is_theta_admissible(&dec, &sym_generators, tolerances.theta) {
            Some(extract_theta(&dec, &emb, tolerances.theta)?)
        } else {
            None
        };
        Ok(Self { spec, rep, casimir, sym_generators, dec, emb, theta, tolerances })
    }

    fn report(&self, settings: &Settings) -> ClassicalityReport {
        let max_invariance_deviation =
            self.theta.as_ref().map(|t| verify_k_invariance(t, &self.rep, DEFAULT_SAMPLES, settings.seed));
        ClassicalityReport {
            schema: REPORT_SCHEMA,
            rep_spec: self.spec.clone(),
            dim: self.rep.dim(),
            decomposition: DecompositionReport {
                eigenvalues: self.dec.eigenvalues(),
                factor_eigenvalues: self.dec.factor_eigenvalues(),
                dims: self.dec.dims(),
                top_index: self.dec.top_index(),
                complement_rank: self.dec.complement_rank(),
            },
            theta_exists: self.theta.is_some(),
            theta_matrix: self.theta.as_ref().map(|t| ComplexMatrixJson::from_matrix(t.matrix())),
            measure: None,
            diagnostics: Diagnostics {
                tolerances: self.tolerances,
                seed: settings.seed,
                cluster_residual: self.dec.max_residual(&self.casimir),
                invariance_samples: self.theta.as_ref().map(|_| DEFAULT_SAMPLES),
                max_invariance_deviation,
                detector_scale: None,
                search: None,
            },
        }
    }
}

pub fn cmd_analyze(spec_path: &Path, settings: &Settings) -> CliResult<ClassicalityReport> {
    let analysis = Analysis::new(load_spec(spec_path)?, settings)?;
    Ok(analysis.report(settings))
}

/// Exact convex roof when θ exists, the numerical upper bound otherwise.
pub fn cmd_measure(spec_path: &Path, rho_path: &Path, settings: &Settings) -> CliResult<ClassicalityReport> {
    let analysis = Analysis::new(load_spec(spec_path)?, settings)?;
    let rho = DensityMatrix::from_json(&read(rho_path)?, analysis.tolerances.density)?;
    let n = analysis.rep.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho.dim() }.into());
    }
    let mut report = analysis.report(settings);
    match &analysis.theta {
        Some(theta) => {
            let scale = detector_scale(n);
            report.measure = Some(f1_roof_exact(&rho, theta, scale)?);
            report.diagnostics.detector_scale = Some(scale);
        }
        None => {
            let opts = RoofSearch {
                iters: settings.iters,
                restarts: settings.restarts,
                seed: settings.seed,
                decomposition_len: None,
            };
            report.measure = Some(f1_roof_upper_bound(&rho, &analysis.dec, &analysis.emb, &opts)?);
            report.diagnostics.search =
                Some(SearchSettings { iters: settings.iters, restarts: settings.restarts, seed: settings.seed });
        }
    }
    Ok(report)
}

fn classical_pure(rep: &Representation, hw: &CVec, rng: &mut ChaCha8Rng) -> CVec {
    sample_group_element(rep, rng.random()).matrix * hw
}

/// Weights of a flat Dirichlet distribution.
fn random_weights(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1) + f64::MIN_POSITIVE).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn cmd_sample(spec_path: &Path, count: usize, kind: SampleKind, settings: &Settings) -> CliResult<SampleFile> {
    let spec = load_spec(spec_path)?;
    let rep = build_representation_with_tol(&spec, Tolerances::from_tol(settings.tol).structure)?;
    let n = rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let hw = match kind {
        SampleKind::RandomMixed => None,
        _ => Some(highest_weight_vector(&rep)?),
    };
    let mut states = Vec::with_capacity(count);
    let mut vectors = Vec::new();
    for _ in 0..count {
        let rho = match (kind, &hw) {
            (SampleKind::ClassicalPure, Some(hw)) => {
                let v = classical_pure(&rep, hw, &mut rng);
                vectors.push(ComplexVectorJson::from_vector(&v));
                DensityMatrix::from_pure(&v)
            }
            (SampleKind::ClassicalMixed, Some(hw)) => {
                let k = rng.random_range(1..=2 * n);
                let pure: Vec<DensityMatrix> =
                    (0..k).map(|_| DensityMatrix::from_pure(&classical_pure(&rep, hw, &mut rng))).collect();
                let weights = random_weights(k, &mut rng);
                let parts: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(&pure).collect();
                DensityMatrix::mixture(&parts)
            }
            _ => DensityMatrix::random_hs(n, &mut rng),
        };
        states.push(DensityMatrixFile::from_density(&rho));
    }
    Ok(SampleFile {
        schema: REPORT_SCHEMA,
        rep_spec: spec,
        kind,
        seed: settings.seed,
        states,
        vectors: (kind == SampleKind::ClassicalPure).then_some(vectors),
    })
}

struct Checks {
    list: Vec<CheckResult>,
}

impl Checks {
    fn at_most(&mut self, name: &str, value: f64, threshold: f64) {
        self.list.push(CheckResult { name: name.into(), passed: value <= threshold, value, threshold });
    }
}

/// Runs the invariant suite for one family. `passed` is false if any check
/// fails; errors are reserved for inputs that cannot be analyzed at all.
pub fn cmd_validate(spec_path: &Path, settings: &Settings) -> CliResult<ValidationSummary> {
    let analysis = Analysis::new(load_spec(spec_path)?, settings)?;
    let tol = analysis.tolerances;
    let n = analysis.rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut checks = Checks { list: Vec::new() };

    let structure = analysis.rep.check_structure(tol.structure);
    checks.at_most("generators anti-Hermitian", structure.max_anti_hermitian_residual, tol.structure);
    checks.at_most("bracket closure", structure.max_closure_residual, tol.structure);
    checks.at_most("Cartan generators commute", structure.max_cartan_commutator, tol.structure);
    checks.at_most("irreducible (commutant dimension - 1)", structure.commutant_dim as f64 - 1.0, 0.0);
    if let Some(k) = structure.highest_weight_kernel_dim {
        checks.at_most("highest-weight kernel dimension - 1", (k as f64 - 1.0).abs(), 0.0);
    }

    let dec = &analysis.dec;
    checks.at_most("Casimir cluster residual", dec.max_residual(&analysis.casimir), tol.cluster);
    let d = dec.sym_dim();
    let projectors: Vec<CMat> = (0..dec.len()).map(|i| dec.projector(i)).collect();
    let mut idempotent: f64 = 0.0;
    let mut commuting: f64 = 0.0;
    let mut sum = CMat::zeros(d, d);
    for (i, p) in projectors.iter().enumerate() {
        sum += p;
        for (j, q) in projectors.iter().enumerate() {
            let expected = if i == j { p.clone() } else { CMat::zeros(d, d) };
            idempotent = idempotent.max(frob(&(p * q - expected)));
        }
        for y in &analysis.sym_generators {
            commuting = commuting.max(frob(&(y * p - p * y)));
        }
    }
    checks.at_most("projectors orthogonal and idempotent", idempotent, tol.cluster);
    checks.at_most("projectors resolve the identity", frob(&(sum - eye(d))), tol.cluster);
    checks.at_most("projectors commute with the group action", commuting, tol.cluster);

    let mut element: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for _ in 0..10 {
        let rank = rng.random_range(1..=n * n);
        let g = ginibre(n * n, rank, &mut rng);
        let a = PositiveOperator::new(&g * g.adjoint(), n, BasisTag::STANDARD)?;
        let kraus = kraus_from(&a)?;
        let v: Vec<CVec> = (0..4).map(|_| random_unit_vector(n, &mut rng)).collect();
        let q = [&v[0], &v[1], &v[2], &v[3]];
        element = element.max((matrix_element(&a, q) - kraus_matrix_element(&kraus, q)).norm());
        let back = jamiolkowski_forward(&kraus, n)?;
        round_trip = round_trip.max(frob(&(back.matrix() - a.matrix())) / frob(a.matrix()));
    }
    checks.at_most("Kraus matrix-element identity", element, tol.theta);
    checks.at_most("Choi round trip (relative)", round_trip, tol.theta);

    let emb = &analysis.emb;
    let mut disagreements = 0.0;
    let mut classical_defect: f64 = 0.0;
    let zero = tol.zero_set;
    let agree = |v: &CVec| {
        let a = is_pure_classical(dec, emb, v, zero);
        let b = f1_pure(dec, emb, v) < zero;
        let t = analysis.theta.as_ref().map_or(b, |th| theta_expectation(th, v) < zero);
        a == b && b == t
    };
    for _ in 0..50 {
        if !agree(&random_unit_vector(n, &mut rng)) {
            disagreements += 1.0;
        }
    }
    if let Ok(hw) = highest_weight_vector(&analysis.rep) {
        for _ in 0..20 {
            let v = classical_pure(&analysis.rep, &hw, &mut rng);
            classical_defect = classical_defect.max(f1_pure(dec, emb, &v));
            if !agree(&v) {
                disagreements += 1.0;
            }
        }
        checks.at_most("f1 on translated highest-weight vectors", classical_defect, zero);
    }
    checks.at_most("zero-set disagreements", disagreements, 0.0);

    if let Some(theta) = &analysis.theta {
        checks.at_most(
            "theta invariance",
            verify_k_invariance(theta, &analysis.rep, DEFAULT_SAMPLES, settings.seed),
            tol.theta,
        );
        checks.at_most("theta unitary", theta.unitarity_defect(), tol.theta);
        let psi = emb.lift_vector(&dec.complement_basis().column(0).into_owned());
        let p0 = PositiveOperator::new(&psi * psi.adjoint(), n, BasisTag::STANDARD)?;
        let reduced = partial_trace_first(p0.matrix(), n);
        checks.at_most("tr1 P0 = I/N", frob(&(reduced - eye(n) / c(n as f64, 0.0))), tol.theta);
        checks.at_most(
            "P0 trace preserving up to scale",
            is_proportional_trace_preserving(&p0, tol.theta).deviation,
            tol.theta,
        );
    }

    let passed = checks.list.iter().all(|c| c.passed);
    Ok(ValidationSummary {
        schema: REPORT_SCHEMA,
        rep_spec: analysis.spec,
        seed: settings.seed,
        tolerances: tol,
        passed,
        checks: checks.list,
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("report serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_classes() {
        assert_eq!(CliError::from(Error::Parse("x".into())).exit_code(), EXIT_INPUT);
        assert_eq!(
            CliError::from(Error::ClusterAmbiguity { lower: 0.0, upper: 1e-9, gap: 1e-9, tol: 1e-8 }).exit_code(),
            EXIT_NUMERICAL
        );
        assert_eq!(CliError::from(Error::ConstructionFailure("x".into())).exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn error_document_is_machine_readable() {
        let doc: serde_json::Value =
            serde_json::from_str(&CliError::from(Error::UnsupportedSpec("su2 two_s=-1".into())).to_json()).unwrap();
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["error"]["kind"], "UnsupportedSpec");
    }

    #[test]
    fn tolerances_scale_with_tol() {
        let t = Tolerances::from_tol(1e-10);
        assert_eq!((t.cluster, t.density), (1e-8, 1e-8));
    }

    #[test]
    fn dirichlet_weights_sum_to_one() {
        let w = random_weights(7, &mut ChaCha8Rng::seed_from_u64(1));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12 && w.iter().all(|&x| x > 0.0));
    }
}
