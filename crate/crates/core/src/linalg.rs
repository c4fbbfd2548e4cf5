//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }
}

/// Diagonalises the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    HermitianEigen { values, vectors }
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// max |m - m†|.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().sum()
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).values[0]
}

/// ⟨ψ| A |ψ⟩.
pub fn expectation(a: &CMat, psi: &CVec) -> C64 {
    psi.dotc(&(a * psi))
}

/// |ψ⟩⟨ψ|.
pub fn projector(psi: &CVec) -> CMat {
    psi * psi.adjoint()
}

/// Real Toeplitz matrix with first row `row`, promoted to complex.
pub fn toeplitz(row: &[f64]) -> CMat {
    let n = row.len();
    CMat::from_fn(n, n, |i, j| c(row[i.abs_diff(j)]))
}

/// Largest deviation from the Toeplitz structure, max |m_ij - m_{i+1,j+1}|.
pub fn toeplitz_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 1..n {
        for j in 1..n {
            worst = worst.max((m[(i, j)] - m[(i - 1, j - 1)]).norm());
        }
    }
    worst
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with a threshold relative to the largest singular value.
pub fn numerical_rank(m: &CMat, rel_threshold: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&v| v > rel_threshold * top).count(),
        _ => 0,
    }
}

/// Overlap |⟨a|b⟩| of two vectors.
pub fn overlap(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).norm()
}
