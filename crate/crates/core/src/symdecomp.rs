//! Quadratic Casimir on the symmetric square `V ∨ V` and its isotypic
//! decomposition.
//!
//! Each simple factor gets its own Casimir `L_f = -(1/κ_f) Σ_a Y_a²`, where
//! `Y_a` is the symmetric-square image of a trace-form orthonormal basis of
//! the factor and `κ_f` converts the trace form into the Killing form.
//! Components are separated by the joint spectrum of all `L_f`, so two
//! components whose *total* Casimir values collide stay apart.

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, eigh, eye, frob, kron, kron_vec, select_columns, CMat, CVec, RealSpan};
use crate::repkit::Representation;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Isometric embedding of `V ∨ V` into `V ⊗ V`.
///
/// Basis order: `e_i⊗e_i` for each `i`, then `(e_i⊗e_j + e_j⊗e_i)/√2` for
/// `i < j` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SymmetricEmbedding {
    n: usize,
    /// `D × N²`; rows are the basis vectors above.
    iso: CMat,
}

impl SymmetricEmbedding {
    pub fn new(n: usize) -> Self {
        let d = n * (n + 1) / 2;
        let mut iso = CMat::zeros(d, n * n);
        for i in 0..n {
            iso[(i, i * n + i)] = c(1.0, 0.0);
        }
        let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut row = n;
        for i in 0..n {
            for j in (i + 1)..n {
                iso[(row, i * n + j)] = s;
                iso[(row, j * n + i)] = s;
                row += 1;
            }
        }
        Self { n, iso }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.iso.nrows()
    }

    pub fn iso(&self) -> &CMat {
        &self.iso
    }

    /// Coordinates of `v ⊗ v` in the symmetric basis.
    pub fn square(&self, v: &CVec) -> CVec {
        &self.iso * kron_vec(v, v)
    }

    /// `V ∨ V` coordinates → vector in `V ⊗ V`.
    pub fn lift_vector(&self, x: &CVec) -> CVec {
        self.iso.adjoint() * x
    }

    /// Operator on `V ∨ V` → operator on `V ⊗ V` supported on the symmetric
    /// subspace.
    pub fn lift_operator(&self, a: &CMat) -> CMat {
        self.iso.adjoint() * a * &self.iso
    }
}

/// `iso · (X⊗I + I⊗X) · iso†` for every generator.
pub fn symmetric_square_action(rep: &Representation) -> Vec<CMat> {
    let emb = SymmetricEmbedding::new(rep.dim());
    rep.generators().iter().map(|x| push_forward(&emb, x)).collect()
}

fn push_forward(emb: &SymmetricEmbedding, x: &CMat) -> CMat {
    let id = eye(emb.n());
    emb.iso() * (kron(x, &id) + kron(&id, x)) * emb.iso().adjoint()
}

/// Casimir operator on `V ∨ V`, kept factor by factor.
#[derive(Clone, Debug)]
pub struct SymCasimir {
    per_factor: Vec<CMat>,
    total: CMat,
}

impl SymCasimir {
    pub fn total(&self) -> &CMat {
        &self.total
    }

    pub fn per_factor(&self) -> &[CMat] {
        &self.per_factor
    }
}

/// `κ` with `B(X, Y) = -κ ⟨X, Y⟩`, from the structure constants of an
/// orthonormal basis: `κ = -(1/n) Σ_a tr(ad_a²)`.
fn killing_ratio(basis: &[CMat]) -> f64 {
    let n = basis.len();
    let mut ads = Vec::with_capacity(n);
    for a in basis {
        // (ad_a)_{cb} = Re tr(Q_c† [Q_a, Q_b])
        let mut ad = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (b, qb) in basis.iter().enumerate() {
            let comm = commutator(a, qb);
            for (cc, qc) in basis.iter().enumerate() {
                ad[(cc, b)] = crate::linalg::hs(qc, &comm).re;
            }
        }
        ads.push(ad);
    }
    -ads.iter().map(|ad| (ad * ad).trace()).sum::<f64>() / n as f64
}

pub fn casimir_on_symmetric_square(rep: &Representation) -> SymCasimir {
    let emb = SymmetricEmbedding::new(rep.dim());
    let d = emb.dim();
    let mut per_factor = Vec::with_capacity(rep.factor_boundaries().len());
    for f in 0..rep.factor_boundaries().len() {
        let span = RealSpan::new(rep.factor_generators(f), 1e-12);
        let mut l = CMat::zeros(d, d);
        if span.dim() > 0 {
            let kappa = killing_ratio(span.basis());
            for q in span.basis() {
                let y = push_forward(&emb, q);
                l -= &y * &y;
            }
            l /= c(kappa, 0.0);
        }
        per_factor.push(crate::linalg::hermitian_part(&l));
    }
    let total = per_factor.iter().fold(CMat::zeros(d, d), |acc, l| acc + l);
    SymCasimir { per_factor, total }
}

/// One isotypic component: an orthonormal basis of its range and the
/// Casimir eigenvalue of every factor on it.
#[derive(Clone, Debug)]
struct Component {
    basis: CMat,
    factor_values: Vec<f64>,
}

impl Component {
    fn total(&self) -> f64 {
        self.factor_values.iter().sum()
    }
}

/// Isotypic decomposition of `V ∨ V`, components sorted by decreasing total
/// Casimir eigenvalue. The top component (largest Casimir) is `V(2λ₀)`.
#[derive(Clone, Debug)]
pub struct SymDecomposition {
    components: Vec<Component>,
    top_index: usize,
    dim: usize,
    cluster_tol: f64,
}

/// Split `basis` by the eigenvalues of `l` restricted to its range.
fn refine(basis: &CMat, l: &CMat, abs_tol: f64) -> Result<Vec<(CMat, f64)>> {
    let restricted = basis.adjoint() * l * basis;
    let (vals, vecs) = eigh(&restricted);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - vals[*g.last().unwrap()] <= abs_tol => g.push(i),
            Some(g) => {
                let prev = vals[*g.last().unwrap()];
                if v - prev <= 10.0 * abs_tol {
                    return Err(Error::ClusterAmbiguity { lower: prev, upper: v, gap: v - prev, tol: abs_tol });
                }
                groups.push(vec![i]);
            }
            None => groups.push(vec![i]),
        }
    }
    Ok(groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| vals[i]).sum::<f64>() / g.len() as f64;
            (basis * select_columns(&vecs, &g), mean)
        })
        .collect())
}

/// Decompose with the default clustering tolerance, checking that the
/// symmetric-square generators commute with the Casimir.
pub fn decompose(casimir: &SymCasimir, sym_generators: &[CMat], cluster_tol: f64) -> Result<SymDecomposition> {
    let l = casimir.total();
    let scale = frob(l).max(1.0);
    for y in sym_generators {
        let defect = frob(&commutator(y, l));
        if defect > 1e-8 * scale {
            return Err(Error::ConstructionFailure(format!(
                "symmetric-square generator does not commute with the Casimir ({defect:e})"
            )));
        }
    }

    let d = l.nrows();
    let mut comps = vec![Component { basis: eye(d), factor_values: Vec::new() }];
    for lf in casimir.per_factor() {
        let (vals, _) = eigh(lf);
        let range = match (vals.first(), vals.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        };
        let abs_tol = cluster_tol * range.max(1.0);
        let mut next = Vec::new();
        for comp in comps {
            for (basis, value) in refine(&comp.basis, lf, abs_tol)? {
                let mut factor_values = comp.factor_values.clone();
                factor_values.push(value);
                next.push(Component { basis, factor_values });
            }
        }
        comps = next;
    }
    comps.sort_by(|a, b| b.total().total_cmp(&a.total()));
    Ok(SymDecomposition { components: comps, top_index: 0, dim: d, cluster_tol })
}

/// Full pipeline: Casimir, symmetric-square generators, decomposition.
pub fn decompose_representation(rep: &Representation, cluster_tol: f64) -> Result<SymDecomposition> {
    let casimir = casimir_on_symmetric_square(rep);
    decompose(&casimir, &symmetric_square_action(rep), cluster_tol)
}

impl SymDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Dimension `D` of `V ∨ V`.
    pub fn sym_dim(&self) -> usize {
        self.dim
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Total Casimir eigenvalue per component, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.components.iter().map(Component::total).collect()
    }

    /// Per-factor Casimir eigenvalues of each component.
    pub fn factor_eigenvalues(&self) -> Vec<Vec<f64>> {
        self.components.iter().map(|c| c.factor_values.clone()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.basis.ncols()).collect()
    }

    pub fn top_index(&self) -> usize {
        self.top_index
    }

    pub fn complement_rank(&self) -> usize {
        self.dim - self.components[self.top_index].basis.ncols()
    }

    /// Orthonormal basis (columns) of component `i`.
    pub fn basis(&self, i: usize) -> &CMat {
        &self.components[i].basis
    }

    pub fn projector(&self, i: usize) -> CMat {
        let b = &self.components[i].basis;
        b * b.adjoint()
    }

    pub fn top_projector(&self) -> CMat {
        self.projector(self.top_index)
    }

    /// Orthonormal basis of the orthogonal complement of the top component.
    pub fn complement_basis(&self) -> CMat {
        let blocks: Vec<&CMat> = self
            .components
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.top_index)
            .map(|(_, c)| &c.basis)
            .collect();
        let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
        let mut out = CMat::zeros(self.dim, cols);
        let mut at = 0;
        for b in blocks {
            out.view_mut((0, at), (self.dim, b.ncols())).copy_from(b);
            at += b.ncols();
        }
        out
    }

    /// Largest `‖L_f B − λ_f B‖_F` over components and factors.
    pub fn max_residual(&self, casimir: &SymCasimir) -> f64 {
        let mut worst = 0.0f64;
        for comp in &self.components {
            for (lf, &value) in casimir.per_factor().iter().zip(&comp.factor_values) {
                let r = lf * &comp.basis - &comp.basis * c(value, 0.0);
                worst = worst.max(frob(&r));
            }
        }
        worst
    }

    /// `‖P_top s − s‖` for `s = (v⊗v)_sym`; zero when `v` generates the top
    /// component, as every highest-weight vector must.
    pub fn top_defect(&self, emb: &SymmetricEmbedding, v: &CVec) -> f64 {
        let s = emb.square(v);
        let b = &self.components[self.top_index].basis;
        crate::linalg::vnorm(&(b * (b.adjoint() * &s) - s))
    }
}

/// True iff the complement of the top component is a single line on which
/// every symmetric-square generator acts as zero.
pub fn is_theta_admissible(dec: &SymDecomposition, sym_generators: &[CMat], tol: f64) -> bool {
    if dec.complement_rank() != 1 {
        return false;
    }
    let v = dec.complement_basis();
    sym_generators.iter().all(|y| frob(&(y * &v)) < tol)
}
