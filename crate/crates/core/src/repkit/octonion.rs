//! Octonion-based constructions for the exceptional families.
//!
//! Imaginary units `e1 … e7` multiply along the oriented Fano-plane lines
//!
//! ```text
//! 123  145  176  246  257  347  365
//! ```
//!
//! so `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2`, `e2 e1 = -e3`, and so on, with
//! `e_i e_i = -1`.
//!
//! * `G₂` is the stabilizer inside `so(7)` of the associative 3-form
//!   `φ(a, b, c) = ⟨e_a e_b, e_c⟩` on the imaginary octonions.
//! * The real 8-dimensional `Cliff(0,7)` module uses the gamma matrices
//!   `Γ_i = L_{e_i}` (left multiplication on `𝕆 = ℝ⁸`, basis `1, e1 … e7`).
//!   Alternativity gives `Γ_i² = -I` and `Γ_iΓ_j = -Γ_jΓ_i` for `i ≠ j`;
//!   `spin(7)` is spanned by `½ Γ_iΓ_j`, `i < j`.

use nalgebra::DMatrix;

use super::families::Parts;
use crate::linalg::c;

const FANO_LINES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

/// Product of two basis octonions `e_a e_b` (index 0 is the unit) as
/// `(sign, index)`.
pub(crate) fn basis_product(a: usize, b: usize) -> (f64, usize) {
    match (a, b) {
        (0, b) => (1.0, b),
        (a, 0) => (1.0, a),
        (a, b) if a == b => (-1.0, 0),
        (a, b) => {
            for [x, y, z] in FANO_LINES {
                for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                    if (a, b) == (p, q) {
                        return (1.0, r);
                    }
                    if (a, b) == (q, p) {
                        return (-1.0, r);
                    }
                }
            }
            unreachable!("every pair of distinct imaginary units lies on one line")
        }
    }
}

/// Associative 3-form on the imaginary units, 0-based indices.
fn phi(a: usize, b: usize, c: usize) -> f64 {
    let (s, k) = basis_product(a + 1, b + 1);
    if k == c + 1 {
        s
    } else {
        0.0
    }
}

pub(crate) fn g2_fundamental() -> Parts {
    // so(7) basis L_pq = E_pq − E_qp
    let pairs: Vec<(usize, usize)> = (0..7)
        .flat_map(|p| ((p + 1)..7).map(move |q| (p, q)))
        .collect();
    let so7: Vec<DMatrix<f64>> = pairs
        .iter()
        .map(|&(p, q)| {
            let mut m = DMatrix::zeros(7, 7);
            m[(p, q)] = 1.0;
            m[(q, p)] = -1.0;
            m
        })
        .collect();
    // (D·φ)(a,b,c) = φ(Da,b,c) + φ(a,Db,c) + φ(a,b,Dc), with Da = Σ_m D_ma e_m
    let triples: Vec<(usize, usize, usize)> = (0..7)
        .flat_map(|a| ((a + 1)..7).flat_map(move |b| ((b + 1)..7).map(move |c| (a, b, c))))
        .collect();
    let act = |d: &DMatrix<f64>, (a, b, cc): (usize, usize, usize)| -> f64 {
        (0..7)
            .map(|m| d[(m, a)] * phi(m, b, cc) + d[(m, b)] * phi(a, m, cc) + d[(m, cc)] * phi(a, b, m))
            .sum()
    };
    let system = DMatrix::from_fn(triples.len(), so7.len(), |row, col| act(&so7[col], triples[row]));
    let gram = system.transpose() * &system;
    let (values, vectors) = crate::linalg::eigh_real(&gram);
    let kernel: Vec<usize> = (0..so7.len()).filter(|&i| values[i].abs() < 1e-9).collect();
    let generators = kernel
        .iter()
        .map(|&idx| {
            let mut m = DMatrix::<f64>::zeros(7, 7);
            for (col, l) in so7.iter().enumerate() {
                m += l * vectors[(col, idx)];
            }
            // L_pq has Frobenius norm √2; keep that normalization
            m.map(|x| c(x, 0.0))
        })
        .collect();
    Parts {
        dim: 7,
        generators,
        cartan: Vec::new(),
        raising: Vec::new(),
        lowering: Vec::new(),
        factor_boundaries: vec![0..14],
    }
}

/// `Γ_i = L_{e_i}`, `i = 1..=7`, as real 8×8 matrices.
pub fn gamma_matrices() -> Vec<DMatrix<f64>> {
    (1..8)
        .map(|i| {
            let mut g = DMatrix::zeros(8, 8);
            for j in 0..8 {
                let (s, k) = basis_product(i, j);
                g[(k, j)] = s;
            }
            g
        })
        .collect()
}

pub(crate) fn spin7_spinor() -> Parts {
    let gammas = gamma_matrices();
    let mut generators = Vec::with_capacity(21);
    let mut cartan = Vec::new();
    for i in 0..7 {
        for j in (i + 1)..7 {
            // disjoint pairs (Γ1Γ2, Γ3Γ4, Γ5Γ6) commute
            if j == i + 1 && i % 2 == 0 && i < 6 {
                cartan.push(generators.len());
            }
            let g = (&gammas[i] * &gammas[j]) * 0.5;
            generators.push(g.map(|x| c(x, 0.0)));
        }
    }
    Parts {
        dim: 8,
        generators,
        cartan,
        raising: Vec::new(),
        lowering: Vec::new(),
        factor_boundaries: vec![0..21],
    }
}
