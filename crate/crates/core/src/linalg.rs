//! Dense complex linear algebra shared by every module.
//!
//! Everything is expressed in one fixed standard basis. Tensor products use
//! the first-factor-major convention: `e_i ⊗ e_j` sits at index `i * n + j`,
//! which is what [`DMatrix::kronecker`] produces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let nb = b.len();
    CVec::from_fn(a.len() * nb, |k, _| a[k / nb] * b[k % nb])
}

/// Entrywise complex conjugate in the standard basis.
pub fn conj(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Frobenius norm.
pub fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vnorm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert-Schmidt inner product `tr(a† b)`.
pub fn hs(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `(u|v)`, antilinear in the first slot.
pub fn inner(u: &CVec, v: &CVec) -> Complex64 {
    u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending and
/// eigenvectors as the matching columns.
///
/// Backed by faer: nalgebra's `SymmetricEigen` returns NaN on some exactly
/// structured inputs, e.g. the maximally entangled projector for `N = 8`.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = hermitian_part(a);
    let m = faer::Mat::<faer::c64>::from_fn(n, n, |r, k| {
        let z = h[(r, k)];
        faer::c64::new(z.re, z.im)
    });
    let eig = m
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("Hermitian eigensolver converges");
    let (s, u) = (eig.S(), eig.U());
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let vectors = CMat::from_fn(n, n, |r, k| {
        let z = u[(r, k)];
        c(z.re, z.im)
    });
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, k| vectors[(r, order[k])]);
    (sorted, vectors)
}

/// [`eigh`] for a real symmetric matrix.
pub fn eigh_real(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let m = faer::Mat::<f64>::from_fn(n, n, |r, k| 0.5 * (a[(r, k)] + a[(k, r)]));
    let eig = m
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("symmetric eigensolver converges");
    let (s, u) = (eig.S(), eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let values = order.iter().map(|&i| s[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, k| u[(r, order[k])]);
    (values, vectors)
}

/// Columns of `a` selected by index.
pub fn select_columns(a: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(a.nrows(), cols.len(), |r, k| a[(r, cols[k])])
}

/// `exp(x)` for an anti-Hermitian `x`, computed through the Hermitian
/// generator `h = -i x` so the result is unitary to machine precision.
pub fn expm_anti_hermitian(x: &CMat) -> CMat {
    let h = x.map(|z| z * -I);
    let (vals, vecs) = eigh(&h);
    let phases = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Principal square root of a Hermitian PSD matrix; negative noise
/// eigenvalues are clipped at zero.
pub fn psd_sqrt(a: &CMat) -> CMat {
    let (vals, vecs) = eigh(a);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&l| c(l.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Orthonormal basis (as columns) of the kernel of a Hermitian PSD "Gram"
/// matrix, i.e. eigenvectors with eigenvalue at most `tol`.
pub fn gram_kernel(gram: &CMat, tol: f64) -> CMat {
    let (vals, vecs) = eigh(gram);
    let idx: Vec<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= tol)
        .map(|(i, _)| i)
        .collect();
    select_columns(&vecs, &idx)
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Entry of largest modulus, ties broken by the first row-major position.
/// `None` for an all-zero input.
fn dominant_entry(rows: usize, cols: usize, at: impl Fn(usize, usize) -> Complex64) -> Option<Complex64> {
    let mut max = 0.0f64;
    for r in 0..rows {
        for k in 0..cols {
            max = max.max(at(r, k).norm());
        }
    }
    if max == 0.0 {
        return None;
    }
    let cutoff = max * (1.0 - 1e-9);
    for r in 0..rows {
        for k in 0..cols {
            let z = at(r, k);
            if z.norm() >= cutoff {
                return Some(z);
            }
        }
    }
    None
}

/// Multiply by the global phase that makes the dominant entry real positive.
pub fn fix_phase_matrix(a: &CMat) -> CMat {
    match dominant_entry(a.nrows(), a.ncols(), |r, k| a[(r, k)]) {
        Some(z) => a * (z.conj() / z.norm()),
        None => a.clone(),
    }
}

pub fn fix_phase_vector(v: &CVec) -> CVec {
    match dominant_entry(v.len(), 1, |r, _| v[r]) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v.clone(),
    }
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(n, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = vnorm(&v);
    v / c(norm, 0.0)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction
/// on the diagonal of `R`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = ginibre(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_diagonal(&CVec::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            ONE
        } else {
            d / d.norm()
        }
    }));
    q * phases
}

/// Hilbert-Schmidt-random density matrix of full rank.
pub fn hs_random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = ginibre(n, n, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    hermitian_part(&(rho / tr))
}

/// Real-linear span of a list of matrices with the inner product
/// `Re tr(a† b)`, stored as an orthonormal basis.
#[derive(Clone, Debug)]
pub struct RealSpan {
    basis: Vec<CMat>,
}

impl RealSpan {
    /// Orthonormalizes through the eigen-decomposition of the real Gram
    /// matrix; directions with Gram eigenvalue below `tol` are discarded.
    pub fn new(mats: &[CMat], tol: f64) -> Self {
        let k = mats.len();
        if k == 0 {
            return Self { basis: Vec::new() };
        }
        let gram = DMatrix::<f64>::from_fn(k, k, |a, b| hs(&mats[a], &mats[b]).re);
        let (values, vectors) = eigh_real(&gram);
        let (rows, cols) = mats[0].shape();
        let mut basis = Vec::new();
        for (idx, &lambda) in values.iter().enumerate().rev() {
            if lambda <= tol {
                continue;
            }
            let mut q = CMat::zeros(rows, cols);
            for (a, m) in mats.iter().enumerate() {
                q += m * c(vectors[(a, idx)], 0.0);
            }
            basis.push(q / c(lambda.sqrt(), 0.0));
        }
        Self { basis }
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Real coordinates of the orthogonal projection of `m`.
    pub fn coordinates(&self, m: &CMat) -> Vec<f64> {
        self.basis.iter().map(|q| hs(q, m).re).collect()
    }

    /// `‖m − proj(m)‖_F`.
    pub fn residual(&self, m: &CMat) -> f64 {
        let mut r = m.clone();
        for (q, x) in self.basis.iter().zip(self.coordinates(m)) {
            r -= q * c(x, 0.0);
        }
        frob(&r)
    }
}

/// Dimension of the commutant of a set of square matrices: the null space
/// of `X ↦ ([g, X])_g`, measured through the PSD Gram operator. Column-major
/// vectorization: `vec(gX − Xg) = (I ⊗ g − gᵀ ⊗ I) vec(X)`.
pub fn commutant_dimension(gens: &[CMat], n: usize, tol: f64) -> usize {
    let id = eye(n);
    let mut gram = CMat::zeros(n * n, n * n);
    for g in gens {
        let k = kron(&id, g) - kron(&g.transpose(), &id);
        gram += k.adjoint() * &k;
    }
    let (vals, _) = eigh(&gram);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    vals.iter().filter(|&&l| l <= tol * scale).count()
}
