//! The invariant antiunitary `θ = T ∘ 𝒦` detecting classicality.
//!
//! When `V ∨ V = V(2λ₀) ⊕ V(0)`, the projector `P₀` onto the trivial line,
//! lifted to `V ⊗ V`, is rank one. Its single spectral Kraus operator `T₀`
//! satisfies `tr₁ P₀ = T₀T₀† = I/N`, so `T = √N·T₀` is unitary, and
//! `(v⊗v|P₀|v⊗v) = |(v|θv)|² / N`.

use crate::choi::{is_proportional_trace_preserving, kraus_from, BasisTag, PositiveOperator};
use crate::error::{Error, Result};
use crate::linalg::{c, conj, conj_vec, eye, fix_phase_matrix, frob, inner, CMat, CVec};
use crate::repkit::{sample_group_element, Representation};
use crate::symdecomp::{SymDecomposition, SymmetricEmbedding};

pub const DEFAULT_SAMPLES: usize = 50;

/// `θ(v) = T · conj(v)` in the basis `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiunitaryDetector {
    t: CMat,
    basis: BasisTag,
}

impl AntiunitaryDetector {
    /// Wraps an explicit matrix, with no invariance check.
    pub fn from_matrix(t: CMat, basis: BasisTag) -> Self {
        Self { t, basis }
    }

    pub fn matrix(&self) -> &CMat {
        &self.t
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.t * conj_vec(v)
    }

    /// `‖T†T − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        frob(&(self.t.adjoint() * &self.t - eye(self.dim())))
    }

    /// `‖Tᵀ − T‖_F`.
    pub fn symmetry_defect(&self) -> f64 {
        frob(&(self.t.transpose() - &self.t))
    }
}

/// Extract `θ` from an admissible decomposition.
///
/// `tol` bounds both the trace-preservation deviation of `P₀` and the
/// unitarity defect of the rescaled `T`.
pub fn extract_theta(dec: &SymDecomposition, emb: &SymmetricEmbedding, tol: f64) -> Result<AntiunitaryDetector> {
    if dec.complement_rank() != 1 {
        return Err(Error::NotAdmissible { complement_rank: dec.complement_rank() });
    }
    let n = emb.n();
    let line = dec.complement_basis();
    let psi = emb.lift_vector(&line.column(0).into_owned());
    let p0 = PositiveOperator::new(&psi * psi.adjoint(), n, BasisTag::STANDARD)?;

    let kraus = kraus_from(&p0)?;
    if kraus.len() != 1 {
        return Err(Error::NotAdmissible { complement_rank: kraus.len() });
    }
    let tp = is_proportional_trace_preserving(&p0, tol);
    if !tp.proportional {
        return Err(Error::RescaleFailure { deviation: tp.deviation });
    }
    let t = fix_phase_matrix(&(&kraus.operators[0] * c((1.0 / tp.scale).sqrt(), 0.0)));
    let theta = AntiunitaryDetector { t, basis: kraus.basis };
    let deviation = theta.unitarity_defect();
    if deviation > tol {
        return Err(Error::RescaleFailure { deviation });
    }
    Ok(theta)
}

/// `max_U ‖U† T conj(U) − T‖_F` over `samples` group elements drawn from
/// seeds `seed, seed+1, …`.
pub fn verify_k_invariance(theta: &AntiunitaryDetector, rep: &Representation, samples: usize, seed: u64) -> f64 {
    assert_eq!(theta.dim(), rep.dim(), "detector and representation dimensions differ");
    (0..samples as u64)
        .map(|i| {
            let u = sample_group_element(rep, seed.wrapping_add(i)).matrix;
            invariance_defect(theta, &u)
        })
        .fold(0.0, f64::max)
}

pub fn invariance_defect(theta: &AntiunitaryDetector, u: &CMat) -> f64 {
    frob(&(u.adjoint() * &theta.t * conj(u) - &theta.t))
}

/// `|(v|θv)|`.
pub fn theta_expectation(theta: &AntiunitaryDetector, v: &CVec) -> f64 {
    inner(v, &theta.apply(v)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unit_vector, ONE};
    use crate::repkit::{build_representation, highest_weight_vector, RepSpec};
    use crate::symdecomp::{decompose_representation, DEFAULT_CLUSTER_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn theta_for(spec: RepSpec) -> (Representation, SymDecomposition, AntiunitaryDetector) {
        let rep = build_representation(&spec).unwrap();
        let dec = decompose_representation(&rep, DEFAULT_CLUSTER_TOL).unwrap();
        let theta = extract_theta(&dec, &SymmetricEmbedding::new(rep.dim()), 1e-9).unwrap();
        (rep, dec, theta)
    }

    fn qubits() -> RepSpec {
        RepSpec::Product { factors: vec![RepSpec::Su2 { two_s: 1 }, RepSpec::Su2 { two_s: 1 }] }
    }

    fn phase_blind_match(t: &CMat, reference: &CMat) -> f64 {
        crate::linalg::hs(reference, t).norm()
    }

    #[test]
    fn two_qubit_theta_is_spin_flip() {
        let (_, _, theta) = theta_for(qubits());
        let y = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let flip = y.kronecker(&y);
        assert!((phase_blind_match(theta.matrix(), &flip) - 4.0).abs() < 1e-8);
    }

    #[test]
    fn spin_one_theta_is_time_reversal() {
        let (rep, _, theta) = theta_for(RepSpec::Su2 { two_s: 2 });
        let mut flip = CMat::zeros(3, 3);
        flip[(0, 2)] = ONE;
        flip[(1, 1)] = -ONE;
        flip[(2, 0)] = ONE;
        assert!((phase_blind_match(theta.matrix(), &flip) - 3.0).abs() < 1e-8);
        assert!(verify_k_invariance(&theta, &rep, DEFAULT_SAMPLES, 1) < 1e-9);
    }

    #[test]
    fn g2_theta_is_plain_conjugation() {
        let (_, _, theta) = theta_for(RepSpec::G2Fundamental);
        assert!(frob(&(theta.matrix() - eye(7))) < 1e-9);
    }

    #[test]
    fn extracted_theta_is_unitary_and_symmetric() {
        for spec in [RepSpec::Su2 { two_s: 2 }, qubits(), RepSpec::SuNAntisymSquare { n: 4 }, RepSpec::Spin7Spinor] {
            let (rep, _, theta) = theta_for(spec);
            assert!(theta.unitarity_defect() < 1e-9);
            assert!(theta.symmetry_defect() < 1e-9);
            assert!(verify_k_invariance(&theta, &rep, 20, 3) < 1e-9);
        }
    }

    #[test]
    fn non_admissible_decomposition_is_rejected() {
        let rep = build_representation(&RepSpec::Su2 { two_s: 3 }).unwrap();
        let dec = decompose_representation(&rep, DEFAULT_CLUSTER_TOL).unwrap();
        let err = extract_theta(&dec, &SymmetricEmbedding::new(4), 1e-9).unwrap_err();
        assert_eq!(err, Error::NotAdmissible { complement_rank: 3 });
    }

    #[test]
    fn random_unitary_is_not_invariant() {
        let (rep, _, _) = theta_for(RepSpec::Su2 { two_s: 2 });
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fake = AntiunitaryDetector::from_matrix(crate::linalg::haar_unitary(3, &mut rng), BasisTag::STANDARD);
        assert!(verify_k_invariance(&fake, &rep, DEFAULT_SAMPLES, 0) > 0.1);
        assert_eq!(invariance_defect(&fake, &eye(3)), 0.0);
    }

    #[test]
    fn expectation_values() {
        let (rep, dec, theta) = theta_for(RepSpec::Su2 { two_s: 2 });
        let hw = highest_weight_vector(&rep).unwrap();
        let u = sample_group_element(&rep, 11).matrix;
        assert!(theta_expectation(&theta, &(u * hw)) < 1e-10);

        // squared expectation equals N·(v⊗v|P₀|v⊗v)
        let emb = SymmetricEmbedding::new(3);
        let p0 = dec.projector(1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let v = random_unit_vector(3, &mut rng);
            let s = emb.square(&v);
            let expect = inner(&s, &(&p0 * &s)).re * 3.0;
            assert!((theta_expectation(&theta, &v).powi(2) - expect).abs() < 1e-12);
        }

        let (_, _, theta) = theta_for(qubits());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = CVec::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]);
        assert!((theta_expectation(&theta, &singlet) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn real_vectors_violating_isotropy_are_detected_for_g2() {
        let (_, _, theta) = theta_for(RepSpec::G2Fundamental);
        // u = e1, w = 2 e2: (u|u) ≠ (w|w)
        let mut v = CVec::zeros(7);
        v[0] = c(1.0, 0.0);
        v[1] = c(0.0, 2.0);
        let v = &v / c(5f64.sqrt(), 0.0);
        assert!(theta_expectation(&theta, &v) > 0.5);
    }
}
