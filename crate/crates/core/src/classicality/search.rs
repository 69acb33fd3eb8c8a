//! Numerical upper bound on the convex roof of `f₁`.
//!
//! Every decomposition `ρ = Σ_k |v_k)(v_k|` of length `m ≥ r = rank ρ` is
//! `V = S · M` with `S` the `N × r` matrix of scaled eigenvectors
//! `√λ_i e_i` and `M` the first `r` rows of an `m × m` unitary `U`. The
//! search minimizes
//!
//! ```text
//! F(U) = Σ_k ‖R(v_k)‖,   R(v) = C† (v⊗v)_sym
//! ```
//!
//! where the columns of `C` span the complement of the top component, so
//! `‖R(v)‖ = ‖v‖² f₁(v/‖v‖)`. Steps act on the right, `U ← U exp(A)` with
//! `A` anti-Hermitian. Each restart runs
//!
//! 1. Levenberg-Marquardt on `Σ_k ‖R(v_k)‖²`, which converges fast to an
//!    exact zero whenever `ρ` is classical,
//! 2. L-BFGS on `F` itself, in the left-trivialized tangent coordinates,
//! 3. a second Levenberg-Marquardt pass from the L-BFGS point.
//!
//! The best decomposition seen at any stage is kept, so the result is always
//! the value of an actual decomposition of `ρ`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DensityMatrix, MeasureKind, MeasureResult, WeightedState};
use crate::error::Result;
use crate::exec::Exec;
use crate::io::ComplexVectorJson;
use crate::linalg::{c, eigh, expm_anti_hermitian, eye, haar_unitary, hs, select_columns, vnorm, CMat, CVec, I};
use crate::symdecomp::{SymDecomposition, SymmetricEmbedding};

/// Search parameters. `decomposition_len` defaults to `2·rank`, capped at
/// `rank²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoofSearch {
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub decomposition_len: Option<usize>,
}

impl Default for RoofSearch {
    fn default() -> Self {
        Self { iters: 300, restarts: 8, seed: 0, decomposition_len: None }
    }
}

const LM_ITERS: usize = 60;
const LBFGS_MEMORY: usize = 8;

struct Problem {
    n: usize,
    r: usize,
    m: usize,
    /// `N × r`, columns `√λ_i e_i`.
    s: CMat,
    /// One symmetric `N × N` matrix per complement direction:
    /// `R_ρ(v) = vᵀ B_ρ v`.
    forms: Vec<CMat>,
}

#[derive(Clone)]
struct Point {
    u: CMat,
    value: f64,
}

impl Problem {
    fn new(rho: &DensityMatrix, dec: &SymDecomposition, emb: &SymmetricEmbedding, len: Option<usize>) -> Self {
        let n = rho.dim();
        let (vals, vecs) = eigh(rho.matrix());
        let top = vals.last().copied().unwrap_or(0.0).max(0.0);
        let keep: Vec<usize> = (0..n).rev().filter(|&i| vals[i] > 1e-12 * top).collect();
        let r = keep.len().max(1);
        let mut s = select_columns(&vecs, &keep);
        for (k, &i) in keep.iter().enumerate() {
            s.column_mut(k).scale_mut(vals[i].max(0.0).sqrt());
        }
        let m = len.unwrap_or(2 * r).clamp(r, (r * r).max(r));

        let comp = dec.complement_basis();
        let b = comp.adjoint() * emb.iso();
        let forms = (0..b.nrows())
            .map(|row| CMat::from_fn(n, n, |i, j| b[(row, i * n + j)]))
            .collect();
        Self { n, r, m, s, forms }
    }

    fn vectors(&self, u: &CMat) -> CMat {
        &self.s * u.rows(0, self.r)
    }

    fn residual(&self, v: &CVec) -> CVec {
        CVec::from_iterator(self.forms.len(), self.forms.iter().map(|b| (v.transpose() * (b * v))[(0, 0)]))
    }

    /// `J(v)` with `R(v + εx) = R(v) + 2ε J(v) x + O(ε²)`.
    fn jacobian(&self, v: &CVec) -> CMat {
        let mut j = CMat::zeros(self.forms.len(), self.n);
        for (row, b) in self.forms.iter().enumerate() {
            let bv = b * v;
            for i in 0..self.n {
                j[(row, i)] = bv[i];
            }
        }
        j
    }

    fn objective(&self, u: &CMat) -> f64 {
        let v = self.vectors(u);
        (0..self.m).map(|k| vnorm(&self.residual(&v.column(k).into_owned()))).sum()
    }

    fn sum_of_squares(&self, u: &CMat) -> f64 {
        let v = self.vectors(u);
        (0..self.m)
            .map(|k| self.residual(&v.column(k).into_owned()).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `P_k = 2 J(v_k) V`: derivative of `R(v_k)` along column `k` of `A`.
    fn column_derivatives(&self, v: &CMat) -> Vec<CMat> {
        (0..self.m)
            .map(|k| self.jacobian(&v.column(k).into_owned()) * v * c(2.0, 0.0))
            .collect()
    }

    /// Value and anti-Hermitian gradient of `F` at `U`.
    fn gradient(&self, u: &CMat) -> (f64, CMat) {
        let v = self.vectors(u);
        let derivs = self.column_derivatives(&v);
        let mut g = CMat::zeros(self.m, self.m);
        let mut value = 0.0;
        for (k, dk) in derivs.iter().enumerate() {
            let rk = self.residual(&v.column(k).into_owned());
            let norm = vnorm(&rk);
            value += norm;
            if norm > 0.0 {
                let h = dk.adjoint() * rk / c(norm, 0.0);
                g.set_column(k, &h);
            }
        }
        (value, (&g - g.adjoint()).scale(0.5))
    }

    fn num_params(&self) -> usize {
        self.m * self.m
    }

    /// Anti-Hermitian matrix from real coordinates: diagonal `i·x`, then for
    /// each `p < q` the pair `E_pq − E_qp`, `i(E_pq + E_qp)`.
    fn algebra_element(&self, x: &[f64]) -> CMat {
        let mut a = CMat::zeros(self.m, self.m);
        let mut it = x.iter();
        for p in 0..self.m {
            a[(p, p)] = I * *it.next().unwrap();
        }
        for p in 0..self.m {
            for q in (p + 1)..self.m {
                let re = *it.next().unwrap();
                let im = *it.next().unwrap();
                a[(p, q)] = c(re, im);
                a[(q, p)] = c(-re, im);
            }
        }
        a
    }

    /// Stacked real residual and its Jacobian with respect to the
    /// coordinates of [`Problem::algebra_element`].
    fn lm_system(&self, u: &CMat) -> (Vec<f64>, DMatrix<f64>) {
        let v = self.vectors(u);
        let derivs = self.column_derivatives(&v);
        let nc = self.forms.len();
        let rows = 2 * nc * self.m;
        let mut res = vec![0.0; rows];
        for k in 0..self.m {
            let rk = self.residual(&v.column(k).into_owned());
            for (i, z) in rk.iter().enumerate() {
                res[2 * (k * nc + i)] = z.re;
                res[2 * (k * nc + i) + 1] = z.im;
            }
        }
        let mut jac = DMatrix::<f64>::zeros(rows, self.num_params());
        let mut put = |col: usize, k: usize, d: CVec| {
            for (i, z) in d.iter().enumerate() {
                jac[(2 * (k * nc + i), col)] += z.re;
                jac[(2 * (k * nc + i) + 1, col)] += z.im;
            }
        };
        let mut col = 0;
        for (p, dp) in derivs.iter().enumerate() {
            put(col, p, dp.column(p) * I);
            col += 1;
        }
        for p in 0..self.m {
            for q in (p + 1)..self.m {
                // A[p,q] = 1, A[q,p] = -1
                put(col, q, derivs[q].column(p).into_owned());
                put(col, p, -derivs[p].column(q).into_owned());
                col += 1;
                // A[p,q] = i, A[q,p] = i
                put(col, q, derivs[q].column(p) * I);
                put(col, p, derivs[p].column(q) * I);
                col += 1;
            }
        }
        (res, jac)
    }

    fn levenberg_marquardt(&self, start: &CMat, best: &mut Point) -> CMat {
        let mut u = start.clone();
        let mut phi = self.sum_of_squares(&u);
        let mut lambda = 1e-3;
        for _ in 0..LM_ITERS {
            if phi < 1e-30 {
                break;
            }
            let (res, jac) = self.lm_system(&u);
            let r = nalgebra::DVector::from_vec(res);
            let mut accepted = false;
            for _ in 0..12 {
                let Some(step) = damped_step(&jac, &r, lambda) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial = &u * expm_anti_hermitian(&self.algebra_element(step.as_slice()));
                let trial_phi = self.sum_of_squares(&trial);
                if trial_phi < phi {
                    u = trial;
                    phi = trial_phi;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                lambda *= 4.0;
            }
            let value = self.objective(&u);
            if value < best.value {
                *best = Point { u: u.clone(), value };
            }
            if !accepted {
                break;
            }
        }
        u
    }

    fn lbfgs(&self, start: &CMat, iters: usize, best: &mut Point) -> CMat {
        let mut u = start.clone();
        let (mut value, mut grad) = self.gradient(&u);
        let mut history: Vec<(CMat, CMat, f64)> = Vec::new();
        for _ in 0..iters {
            let gnorm2 = inner_re(&grad, &grad);
            if gnorm2 < 1e-28 || value < 1e-15 {
                break;
            }
            let mut dir = two_loop(&grad, &history);
            let mut slope = inner_re(&grad, &dir);
            if slope >= 0.0 {
                history.clear();
                dir = -grad.clone();
                slope = -gnorm2;
            }
            // the first step is scaled to a modest rotation angle
            let mut t = if history.is_empty() { (0.1 / gnorm2.sqrt()).min(1.0) } else { 1.0 };
            let mut moved = None;
            for _ in 0..30 {
                let trial = &u * expm_anti_hermitian(&(&dir * c(t, 0.0)));
                let trial_value = self.objective(&trial);
                if trial_value <= value + 1e-4 * t * slope {
                    moved = Some((trial, trial_value));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, _)) = moved else { break };
            let (next_value, next_grad) = self.gradient(&next);
            let s = &dir * c(t, 0.0);
            let y = &next_grad - &grad;
            let sy = inner_re(&s, &y);
            if sy > 1e-16 {
                history.push((s, y, sy));
                if history.len() > LBFGS_MEMORY {
                    history.remove(0);
                }
            }
            u = next;
            value = next_value;
            grad = next_grad;
            if value < best.value {
                *best = Point { u: u.clone(), value };
            }
        }
        u
    }

    fn run_restart(&self, restart: usize, opts: &RoofSearch) -> Point {
        let start = if restart == 0 {
            eye(self.m)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(restart as u64);
            haar_unitary(self.m, &mut rng)
        };
        let mut best = Point { value: self.objective(&start), u: start.clone() };
        if best.value == 0.0 {
            return best;
        }
        let after_lm = self.levenberg_marquardt(&start, &mut best);
        let from = if self.objective(&after_lm) <= self.objective(&start) { after_lm } else { start };
        let after_bfgs = self.lbfgs(&from, opts.iters, &mut best);
        self.levenberg_marquardt(&after_bfgs, &mut best);
        best
    }

    fn decomposition(&self, u: &CMat) -> Vec<WeightedState> {
        let v = self.vectors(u);
        (0..self.m)
            .filter_map(|k| {
                let col = v.column(k).into_owned();
                let w: f64 = col.iter().map(|z| z.norm_sqr()).sum();
                (w > 0.0).then(|| WeightedState {
                    weight: w,
                    vector: ComplexVectorJson::from_vector(&(col / c(w.sqrt(), 0.0))),
                })
            })
            .collect()
    }
}

fn inner_re(a: &CMat, b: &CMat) -> f64 {
    hs(a, b).re
}

/// L-BFGS two-loop recursion returning the search direction `-H·g`.
fn two_loop(grad: &CMat, history: &[(CMat, CMat, f64)]) -> CMat {
    let mut q = grad.clone();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, sy) in history.iter().rev() {
        let a = inner_re(s, &q) / sy;
        q -= y * c(a, 0.0);
        alphas.push(a);
    }
    if let Some((s, y, sy)) = history.last() {
        let _ = s;
        q *= c(sy / inner_re(y, y), 0.0);
    }
    for ((s, y, sy), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = inner_re(y, &q) / sy;
        q += s * c(a - b, 0.0);
    }
    -q
}

/// Minimizer of `‖r + Jδ‖² + λ‖δ‖²`, through whichever normal equations
/// are smaller.
fn damped_step(jac: &DMatrix<f64>, r: &nalgebra::DVector<f64>, lambda: f64) -> Option<nalgebra::DVector<f64>> {
    let (rows, cols) = jac.shape();
    if cols <= rows {
        let mut normal = jac.transpose() * jac;
        let scale = normal.diagonal().max().max(1e-300);
        for i in 0..cols {
            normal[(i, i)] += lambda * scale;
        }
        let rhs = -(jac.transpose() * r);
        normal.cholesky().map(|ch| ch.solve(&rhs))
    } else {
        let mut dual = jac * jac.transpose();
        let scale = dual.diagonal().max().max(1e-300);
        for i in 0..rows {
            dual[(i, i)] += lambda * scale;
        }
        dual.cholesky().map(|ch| -(jac.transpose() * ch.solve(r)))
    }
}

/// Upper bound on the convex roof of `f₁` with restarts spread over the
/// rayon pool.
pub fn f1_roof_upper_bound(
    rho: &DensityMatrix,
    dec: &SymDecomposition,
    emb: &SymmetricEmbedding,
    opts: &RoofSearch,
) -> Result<MeasureResult> {
    f1_roof_upper_bound_with(rho, dec, emb, opts, Exec::Parallel)
}

pub fn f1_roof_upper_bound_with(
    rho: &DensityMatrix,
    dec: &SymDecomposition,
    emb: &SymmetricEmbedding,
    opts: &RoofSearch,
    exec: Exec,
) -> Result<MeasureResult> {
    if rho.dim() != emb.n() {
        return Err(crate::Error::DimensionMismatch { expected: emb.n(), found: rho.dim() });
    }
    let problem = Problem::new(rho, dec, emb, opts.decomposition_len);
    let best = if problem.forms.is_empty() {
        // V ∨ V is irreducible: every pure state is classical
        Point { u: eye(problem.m), value: 0.0 }
    } else {
        let restarts = opts.restarts.max(1);
        exec.map_range(restarts, |i| problem.run_restart(i, opts))
            .into_iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
            .map(|(_, p)| p)
            .expect("at least one restart")
    };
    Ok(MeasureResult {
        value: best.value,
        kind: MeasureKind::UpperBound,
        mu_spectrum: None,
        decomposition_found: Some(problem.decomposition(&best.u)),
    })
}
