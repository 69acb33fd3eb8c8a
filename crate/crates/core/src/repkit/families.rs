//! Generator tables for the unitary families.

use crate::linalg::{c, eye, kron, CMat, I, ONE, ZERO};

/// Raw construction output before structural validation.
pub(crate) struct Parts {
    pub dim: usize,
    pub generators: Vec<CMat>,
    pub cartan: Vec<usize>,
    pub raising: Vec<CMat>,
    pub lowering: Vec<CMat>,
    pub factor_boundaries: Vec<std::ops::Range<usize>>,
}

impl Parts {
    fn simple(
        dim: usize,
        generators: Vec<CMat>,
        cartan: Vec<usize>,
        raising: Vec<CMat>,
        lowering: Vec<CMat>,
    ) -> Self {
        let n = generators.len();
        Parts {
            dim,
            generators,
            cartan,
            raising,
            lowering,
            factor_boundaries: vec![0..n],
        }
    }
}

fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Spin-`two_s/2` in the `|S, m⟩` basis ordered `m = S, S-1, …, -S`.
/// Generators are `i S_x, i S_y, i S_z`.
pub(crate) fn su2(two_s: usize) -> Parts {
    let n = two_s + 1;
    let j = two_s as f64 / 2.0;
    let m_of = |k: usize| j - k as f64;
    let mut splus = CMat::zeros(n, n);
    for k in 1..n {
        let m = m_of(k);
        splus[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let sminus = splus.adjoint();
    let sx = (&splus + &sminus).scale(0.5);
    let sy = (&splus - &sminus) * c(0.0, -0.5);
    let sz = CMat::from_fn(n, n, |r, k| if r == k { c(m_of(k), 0.0) } else { ZERO });
    Parts::simple(n, vec![sx * I, sy * I, sz * I], vec![2], vec![splus], vec![sminus])
}

/// `su(n)` generators in the defining representation, ordered as the
/// off-diagonal pairs `E_ij − E_ji`, `i(E_ij + E_ji)` for `i < j`, then the
/// diagonal `i(E_kk − E_{k+1,k+1})`. Raising operators are `E_ij`, `i < j`.
pub(crate) fn sun_fundamental(n: usize) -> Parts {
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut raising = Vec::new();
    let mut lowering = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let e = unit(n, i, j);
            let f = unit(n, j, i);
            generators.push(&e - &f);
            generators.push((&e + &f) * I);
            raising.push(e);
            lowering.push(f);
        }
    }
    let first_diag = generators.len();
    for k in 0..n - 1 {
        generators.push((unit(n, k, k) - unit(n, k + 1, k + 1)) * I);
    }
    let cartan = (first_diag..generators.len()).collect();
    Parts::simple(n, generators, cartan, raising, lowering)
}

/// Isometry `Λ²ℂⁿ → ℂⁿ ⊗ ℂⁿ` as a `d × n²` matrix whose rows are
/// `(e_i⊗e_j − e_j⊗e_i)/√2` for `i < j` in lexicographic order.
pub(crate) fn antisym_isometry(n: usize) -> CMat {
    let d = n * (n - 1) / 2;
    let mut w = CMat::zeros(d, n * n);
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            w[(row, i * n + j)] = s;
            w[(row, j * n + i)] = -s;
            row += 1;
        }
    }
    w
}

pub(crate) fn sun_antisym_square(n: usize) -> Parts {
    let fund = sun_fundamental(n);
    let w = antisym_isometry(n);
    let id = eye(n);
    let push = |x: &CMat| &w * (kron(x, &id) + kron(&id, x)) * w.adjoint();
    Parts::simple(
        n * (n - 1) / 2,
        fund.generators.iter().map(push).collect(),
        fund.cartan,
        fund.raising.iter().map(push).collect(),
        fund.lowering.iter().map(push).collect(),
    )
}

/// Tensor product of irreducible factors, each factor's operators embedded as
/// `I ⊗ … ⊗ X ⊗ … ⊗ I`.
pub(crate) fn product(factors: Vec<Parts>) -> Parts {
    let dims: Vec<usize> = factors.iter().map(|f| f.dim).collect();
    let dim = dims.iter().product();
    let embed = |pos: usize, x: &CMat| {
        let before: usize = dims[..pos].iter().product();
        let after: usize = dims[pos + 1..].iter().product();
        kron(&kron(&eye(before), x), &eye(after))
    };
    let mut out = Parts {
        dim,
        generators: Vec::new(),
        cartan: Vec::new(),
        raising: Vec::new(),
        lowering: Vec::new(),
        factor_boundaries: Vec::new(),
    };
    for (pos, f) in factors.iter().enumerate() {
        let offset = out.generators.len();
        out.generators.extend(f.generators.iter().map(|x| embed(pos, x)));
        out.cartan.extend(f.cartan.iter().map(|i| i + offset));
        out.raising.extend(f.raising.iter().map(|x| embed(pos, x)));
        out.lowering.extend(f.lowering.iter().map(|x| embed(pos, x)));
        out.factor_boundaries
            .extend(f.factor_boundaries.iter().map(|r| r.start + offset..r.end + offset));
    }
    out
}
