//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances are fixed constants below.

use std::process::ExitCode;

use gcs_core::choi::{
    is_proportional_trace_preserving, jamiolkowski_forward, kraus_from, kraus_matrix_element, matrix_element,
    partial_trace_first, BasisTag, PositiveOperator,
};
use gcs_core::classicality::{
    detector_scale, f1_pure, f1_roof_exact, f1_roof_upper_bound, is_pure_classical, DensityMatrix, RoofSearch,
};
use gcs_core::detector::{extract_theta, theta_expectation, verify_k_invariance, AntiunitaryDetector};
use gcs_core::linalg::{c, eigh, eye, frob, ginibre, random_unit_vector, CMat, CVec, I};
use gcs_core::repkit::{build_representation, highest_weight_vector, sample_group_element, RepSpec, Representation};
use gcs_core::symdecomp::{
    casimir_on_symmetric_square, decompose, is_theta_admissible, symmetric_square_action, SymDecomposition,
    SymmetricEmbedding, DEFAULT_CLUSTER_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const CLUSTER_RESIDUAL_TOL: f64 = 1e-9;
const WOOTTERS_TOL: f64 = 1e-8;
const ZERO_SET_TOL: f64 = 1e-9;
const MATRIX_ELEMENT_TOL: f64 = 1e-9;
const ROUND_TRIP_TOL: f64 = 1e-10;
const PARTIAL_TRACE_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-9;
const BOUND_SLACK: f64 = 1e-6;
const BOUND_REACH: f64 = 1e-3;
const BOUND_REACH_FRACTION: f64 = 0.9;
const MIXED_SPIN_ONE_TOL: f64 = 1e-8;
const CONVEXITY_TOL: f64 = 1e-9;
const THETA_TOL: f64 = 1e-9;

struct Family {
    name: &'static str,
    rep: Representation,
    dec: SymDecomposition,
    emb: SymmetricEmbedding,
    residual: f64,
    admissible: bool,
}

impl Family {
    fn new(name: &'static str, spec: RepSpec) -> Self {
        let rep = build_representation(&spec).expect("shipped family builds");
        let syms = symmetric_square_action(&rep);
        let cas = casimir_on_symmetric_square(&rep);
        let dec = decompose(&cas, &syms, DEFAULT_CLUSTER_TOL).expect("decomposition succeeds");
        let residual = dec.max_residual(&cas);
        let admissible = is_theta_admissible(&dec, &syms, THETA_TOL);
        let emb = SymmetricEmbedding::new(rep.dim());
        Self { name, rep, dec, emb, residual, admissible }
    }

    fn n(&self) -> usize {
        self.rep.dim()
    }

    fn theta(&self) -> AntiunitaryDetector {
        extract_theta(&self.dec, &self.emb, THETA_TOL).expect("admissible family yields θ")
    }
}

fn spin(two_s: i64) -> RepSpec {
    RepSpec::Su2 { two_s }
}

fn qubits() -> RepSpec {
    RepSpec::Product { factors: vec![spin(1), spin(1)] }
}

fn admissible_families() -> Vec<Family> {
    vec![
        Family::new("spin-1", spin(2)),
        Family::new("two qubits", qubits()),
        Family::new("SU(4) antisymmetric square", RepSpec::SuNAntisymSquare { n: 4 }),
        Family::new("G2 fundamental", RepSpec::G2Fundamental),
        Family::new("Spin(7) spinor", RepSpec::Spin7Spinor),
    ]
}

/// Rank drawn from `1..=n`, Ginibre-induced otherwise.
fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let rank = rng.random_range(1..=n);
    let g = ginibre(n, rank, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    DensityMatrix::new(rho / c(tr, 0.0), 1e-9).expect("valid state")
}

/// A classical pure state: the eigenvector of `iX` with the largest
/// eigenvalue for a random algebra element `X` is an extremal weight vector,
/// and then translated by a random group element.
fn random_classical_state(rep: &Representation, rng: &mut ChaCha8Rng) -> CVec {
    let n = rep.dim();
    let mut x = CMat::zeros(n, n);
    for g in rep.generators() {
        let a: f64 = rng.sample(StandardNormal);
        x += g * c(a, 0.0);
    }
    let (_, vecs) = eigh(&(x * I));
    let top = vecs.column(n - 1).into_owned();
    let u = sample_group_element(rep, rng.random()).matrix;
    u * top
}

/// Concurrence from the eigenvalues of `ρ ρ̃`, `ρ̃ = (Y⊗Y) ρ* (Y⊗Y)`.
fn wootters_concurrence(rho: &CMat) -> f64 {
    let y = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let yy = y.kronecker(&y);
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let r = rho * tilde;
    let mut lambdas: Vec<f64> = r
        .eigenvalues()
        .expect("complex Schur form")
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

fn werner(p: f64) -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = CVec::from_vec(vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]);
    DensityMatrix::mixture(&[
        (p, &DensityMatrix::from_pure(&singlet)),
        (1.0 - p, &DensityMatrix::maximally_mixed(4)),
    ])
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn decomposition_facts() -> Outcome {
    let cases: Vec<(&str, RepSpec, Vec<usize>)> = vec![
        ("spin-1", spin(2), vec![5, 1]),
        ("two qubits", qubits(), vec![9, 1]),
        ("SU(4) antisym", RepSpec::SuNAntisymSquare { n: 4 }, vec![20, 1]),
        ("G2", RepSpec::G2Fundamental, vec![27, 1]),
        ("Spin(7)", RepSpec::Spin7Spinor, vec![35, 1]),
    ];
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, spec, dims) in cases {
        let f = Family::new(name, spec);
        worst = worst.max(f.residual);
        if f.dec.dims() != dims {
            problems.push(format!("{name} dims {:?}", f.dec.dims()));
        }
    }
    let s32 = Family::new("spin-3/2", spin(3));
    worst = worst.max(s32.residual);
    if s32.dec.complement_rank() != 3 {
        problems.push(format!("spin-3/2 complement rank {}", s32.dec.complement_rank()));
    }
    let s2 = Family::new("spin-2", spin(4));
    worst = worst.max(s2.residual);
    if s2.dec.complement_rank() <= 1 {
        problems.push(format!("spin-2 complement rank {}", s2.dec.complement_rank()));
    }
    if worst >= CLUSTER_RESIDUAL_TOL {
        problems.push(format!("cluster residual {worst:e}"));
    }
    check(problems.is_empty(), format!("max cluster residual {worst:.1e}; {}", summary(&problems)))
}

fn summary(problems: &[String]) -> String {
    if problems.is_empty() {
        "all as expected".into()
    } else {
        problems.join(", ")
    }
}

fn admissibility_list() -> Outcome {
    let mut specs: Vec<(String, RepSpec, bool)> = Vec::new();
    for two_s in 1..=8 {
        specs.push((format!("su2 2S={two_s}"), spin(two_s), two_s == 2));
    }
    for n in 2..=5 {
        specs.push((format!("su{n} fundamental"), RepSpec::SuNFundamental { n }, false));
    }
    for n in 3..=6 {
        specs.push((format!("su{n} antisym"), RepSpec::SuNAntisymSquare { n }, n == 4));
    }
    specs.push(("spin-1/2 x spin-1/2".into(), qubits(), true));
    specs.push(("spin-1/2 x spin-1".into(), RepSpec::Product { factors: vec![spin(1), spin(2)] }, false));
    specs.push(("spin-1 x spin-1".into(), RepSpec::Product { factors: vec![spin(2), spin(2)] }, false));
    specs.push(("three qubits".into(), RepSpec::Product { factors: vec![spin(1), spin(1), spin(1)] }, false));
    specs.push(("G2".into(), RepSpec::G2Fundamental, true));
    specs.push(("Spin(7)".into(), RepSpec::Spin7Spinor, true));

    let mut wrong = Vec::new();
    for (name, spec, expected) in &specs {
        let f = Family::new("", spec.clone());
        if f.admissible != *expected {
            wrong.push(format!("{name}: got {}", f.admissible));
        }
    }
    check(wrong.is_empty(), format!("{} representations checked; {}", specs.len(), summary(&wrong)))
}

fn two_qubit_oracle() -> Outcome {
    let f = Family::new("two qubits", qubits());
    let theta = f.theta();
    let scale = detector_scale(4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut states: Vec<DensityMatrix> = (0..200).map(|_| DensityMatrix::random_hs(4, &mut rng)).collect();
    states.extend((0..=20).map(|k| werner(k as f64 / 20.0)));
    for rho in &states {
        let ours = f1_roof_exact(rho, &theta, scale).map_err(|e| e.to_string())?.value;
        // f1 is half the concurrence at this scale
        worst = worst.max((ours - 0.5 * wootters_concurrence(rho.matrix())).abs());
    }
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let closed = ((3.0 * p - 1.0) / 2.0).max(0.0);
        worst = worst.max((wootters_concurrence(werner(p).matrix()) - closed).abs());
    }
    check(worst < WOOTTERS_TOL, format!("221 states, max |f1 - C/2| = {worst:.1e}"))
}

fn zero_set_equivalence() -> Outcome {
    let mut disagreements = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for f in admissible_families() {
        let theta = f.theta();
        let mut bad = 0;
        let mut classical_seen = 0;
        let mut pure: Vec<CVec> = (0..500).map(|_| random_unit_vector(f.n(), &mut rng)).collect();
        let hw = highest_weight_vector(&f.rep).ok();
        for i in 0..200 {
            let v = match &hw {
                Some(hw) if i % 2 == 0 => sample_group_element(&f.rep, rng.random()).matrix * hw,
                _ => random_classical_state(&f.rep, &mut rng),
            };
            pure.push(v);
        }
        for (i, v) in pure.iter().enumerate() {
            let a = is_pure_classical(&f.dec, &f.emb, v, ZERO_SET_TOL);
            let b = f1_pure(&f.dec, &f.emb, v) < ZERO_SET_TOL;
            let t = theta_expectation(&theta, v) < ZERO_SET_TOL;
            if a != b || b != t {
                bad += 1;
            }
            // the classical batch must actually be classical
            if i >= 500 && a && b && t {
                classical_seen += 1;
            }
        }
        if bad > 0 || classical_seen != 200 {
            disagreements.push(format!("{}: {bad} disagreements, {classical_seen}/200 classical", f.name));
        }
    }
    check(disagreements.is_empty(), format!("5 families x 700 states; {}", summary(&disagreements)))
}

fn choi_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_element: f64 = 0.0;
    let mut worst_round_trip: f64 = 0.0;
    for i in 0..50 {
        let n = 2 + i % 3;
        let rank = 1 + i % (n * n);
        let g = ginibre(n * n, rank, &mut rng);
        let a = PositiveOperator::new(&g * g.adjoint(), n, BasisTag::STANDARD).map_err(|e| e.to_string())?;
        let kraus = kraus_from(&a).map_err(|e| e.to_string())?;
        for _ in 0..4 {
            let v: Vec<CVec> = (0..4).map(|_| random_unit_vector(n, &mut rng)).collect();
            let q = [&v[0], &v[1], &v[2], &v[3]];
            worst_element = worst_element.max((matrix_element(&a, q) - kraus_matrix_element(&kraus, q)).norm());
        }
        let back = jamiolkowski_forward(&kraus, n).map_err(|e| e.to_string())?;
        worst_round_trip = worst_round_trip.max(frob(&(back.matrix() - a.matrix())));
    }
    let mut worst_trace: f64 = 0.0;
    for f in admissible_families() {
        let psi = f.emb.lift_vector(&f.dec.complement_basis().column(0).into_owned());
        let p0 = PositiveOperator::new(&psi * psi.adjoint(), f.n(), BasisTag::STANDARD).map_err(|e| e.to_string())?;
        let reduced = partial_trace_first(p0.matrix(), f.n());
        worst_trace = worst_trace.max(frob(&(reduced - eye(f.n()) / c(f.n() as f64, 0.0))));
        if !is_proportional_trace_preserving(&p0, PARTIAL_TRACE_TOL).proportional {
            worst_trace = f64::INFINITY;
        }
    }
    check(
        worst_element < MATRIX_ELEMENT_TOL && worst_round_trip < ROUND_TRIP_TOL && worst_trace < PARTIAL_TRACE_TOL,
        format!(
            "matrix elements {worst_element:.1e}, round trip {worst_round_trip:.1e}, tr1 P0 vs I/N {worst_trace:.1e}"
        ),
    )
}

fn k_invariance() -> Outcome {
    let mut worst_theta: f64 = 0.0;
    let mut worst_roof: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for f in admissible_families() {
        let theta = f.theta();
        worst_theta = worst_theta.max(verify_k_invariance(&theta, &f.rep, 50, 600));
        let scale = detector_scale(f.n());
        for k in 0..10 {
            let rho = random_density(f.n(), &mut rng);
            let before = f1_roof_exact(&rho, &theta, scale).map_err(|e| e.to_string())?.value;
            let u = sample_group_element(&f.rep, 700 + k).matrix;
            let after = f1_roof_exact(&rho.conjugate_by(&u), &theta, scale).map_err(|e| e.to_string())?.value;
            worst_roof = worst_roof.max((before - after).abs());
        }
    }
    check(
        worst_theta < INVARIANCE_TOL && worst_roof < INVARIANCE_TOL,
        format!("theta deviation {worst_theta:.1e}, roof change under conjugation {worst_roof:.1e}"),
    )
}

fn roof_consistency() -> Outcome {
    let opts = RoofSearch::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut below = 0;
    let mut reached = 0;
    let mut total = 0;
    let mut worst_gap: f64 = 0.0;
    let mut nonclassical = 0;
    for f in admissible_families() {
        let theta = f.theta();
        let scale = detector_scale(f.n());
        for _ in 0..50 {
            let rho = random_density(f.n(), &mut rng);
            let exact = f1_roof_exact(&rho, &theta, scale).map_err(|e| e.to_string())?.value;
            let bound = f1_roof_upper_bound(&rho, &f.dec, &f.emb, &opts).map_err(|e| e.to_string())?.value;
            total += 1;
            if exact > BOUND_REACH {
                nonclassical += 1;
            }
            if bound < exact - BOUND_SLACK {
                below += 1;
            }
            if bound - exact <= BOUND_REACH {
                reached += 1;
            }
            worst_gap = worst_gap.max(bound - exact);
        }
    }
    let spin_one = Family::new("spin-1", spin(2));
    let mixed = f1_roof_upper_bound(&DensityMatrix::maximally_mixed(3), &spin_one.dec, &spin_one.emb, &opts)
        .map_err(|e| e.to_string())?
        .value;
    let fraction = reached as f64 / total as f64;
    check(
        below == 0 && fraction >= BOUND_REACH_FRACTION && mixed < MIXED_SPIN_ONE_TOL,
        format!(
            "{below} bounds below exact, {reached}/{total} within {BOUND_REACH:e} ({nonclassical} with positive \
             roof, worst gap {worst_gap:.1e}), I/3 spin-1 bound {mixed:.1e}"
        ),
    )
}

fn convexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = f64::NEG_INFINITY;
    for f in admissible_families() {
        let theta = f.theta();
        let scale = detector_scale(f.n());
        let roof = |rho: &DensityMatrix| f1_roof_exact(rho, &theta, scale).map(|m| m.value);
        for _ in 0..100 {
            let a = random_density(f.n(), &mut rng);
            let b = random_density(f.n(), &mut rng);
            let t: f64 = rng.random();
            let mix = DensityMatrix::mixture(&[(t, &a), (1.0 - t, &b)]);
            let excess = roof(&mix).map_err(|e| e.to_string())?
                - t * roof(&a).map_err(|e| e.to_string())?
                - (1.0 - t) * roof(&b).map_err(|e| e.to_string())?;
            worst = worst.max(excess);
        }
    }
    check(worst <= CONVEXITY_TOL, format!("500 pairs, max convexity excess {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("decomposition facts", decomposition_facts),
        ("theta admissibility list", admissibility_list),
        ("two-qubit Wootters oracle", two_qubit_oracle),
        ("pure-state zero-set equivalence", zero_set_equivalence),
        ("Choi machinery", choi_machinery),
        ("K-invariance", k_invariance),
        ("roof upper bound consistency", roof_consistency),
        ("exact roof convexity", convexity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
