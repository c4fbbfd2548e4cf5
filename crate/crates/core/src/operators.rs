//! Spin-1/2 register operators on the 2^N-dimensional space.
//!
//! Basis index `b` has site `j` (0-based) excited iff bit `j` of `b` is set.
//! `σ⁺ = |1⟩⟨0|`, `σ⁻ = |0⟩⟨1|` and `σᶻ = diag(-1/2, +1/2)` in the
//! `(|0⟩, |1⟩)` ordering, so `[σ⁺, σ⁻] = 2σᶻ` and `[σᶻ, σ^±] = ±σ^±`.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64, ONE, ZERO};

/// Hard cap on register size for dense operators.
pub const MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Raise,
    Lower,
    Z,
}

impl Spin {
    /// σ^η with η = +1 (raise) or -1 (lower).
    pub fn from_sign(sign: i8) -> Spin {
        if sign > 0 {
            Spin::Raise
        } else {
            Spin::Lower
        }
    }

    pub fn adjoint(self) -> Spin {
        match self {
            Spin::Raise => Spin::Lower,
            Spin::Lower => Spin::Raise,
            Spin::Z => Spin::Z,
        }
    }
}

pub fn dim(n: usize) -> usize {
    1usize << n
}

pub fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SITES {
        Err(Error::Unsupported(format!(
            "register size {n} outside 1..={MAX_SITES}"
        )))
    } else {
        Ok(())
    }
}

pub fn is_excited(basis: usize, site: usize) -> bool {
    basis >> site & 1 == 1
}

/// Number of excited sites in a basis state.
pub fn excitations(basis: usize) -> u32 {
    basis.count_ones()
}

/// Σⱼ cⱼ σⱼ^α as a dense matrix.
pub fn collective(n: usize, kind: Spin, coeffs: &[C64]) -> CMat {
    assert_eq!(coeffs.len(), n);
    let d = dim(n);
    let mut m = CMat::zeros(d, d);
    for b in 0..d {
        for (j, &cj) in coeffs.iter().enumerate() {
            if cj == ZERO {
                continue;
            }
            match kind {
                Spin::Raise if !is_excited(b, j) => m[(b | 1 << j, b)] += cj,
                Spin::Lower if is_excited(b, j) => m[(b & !(1 << j), b)] += cj,
                Spin::Z => m[(b, b)] += cj * if is_excited(b, j) { 0.5 } else { -0.5 },
                _ => {}
            }
        }
    }
    m
}

/// Single-site σⱼ^α.
pub fn site(n: usize, j: usize, kind: Spin) -> CMat {
    let mut coeffs = vec![ZERO; n];
    coeffs[j] = ONE;
    collective(n, kind, &coeffs)
}

/// Global S^α = Σⱼ σⱼ^α.
pub fn total(n: usize, kind: Spin) -> CMat {
    collective(n, kind, &vec![ONE; n])
}

/// S^α_Q = Σⱼ e^{iQj} σⱼ^α with sites labelled j = 1..N.
pub fn momentum(n: usize, kind: Spin, q: f64) -> CMat {
    let coeffs: Vec<C64> = (1..=n).map(|j| C64::from_polar(1.0, q * j as f64)).collect();
    collective(n, kind, &coeffs)
}

/// Image of basis state `b` under σⱼ^α, or `None` if it is annihilated.
fn act(kind: Spin, j: usize, b: usize) -> Option<(usize, f64)> {
    match kind {
        Spin::Raise => (!is_excited(b, j)).then_some((b | 1 << j, 1.0)),
        Spin::Lower => is_excited(b, j).then_some((b & !(1 << j), 1.0)),
        Spin::Z => Some((b, if is_excited(b, j) { 0.5 } else { -0.5 })),
    }
}

/// Σᵢⱼ Mᵢⱼ σᵢ^α σⱼ^β.
pub fn bilinear(n: usize, left: Spin, right: Spin, coeffs: &CMat) -> CMat {
    let d = dim(n);
    let mut out = CMat::zeros(d, d);
    for b in 0..d {
        for j in 0..n {
            let Some((mid, wr)) = act(right, j, b) else { continue };
            for i in 0..n {
                let cij = coeffs[(i, j)];
                if cij == ZERO {
                    continue;
                }
                if let Some((row, wl)) = act(left, i, mid) {
                    out[(row, b)] += cij * (wl * wr);
                }
            }
        }
    }
    out
}

/// Total S² = S⁻S⁺ + Sᶻ(Sᶻ + 1).
pub fn total_spin_squared(n: usize) -> CMat {
    let sp = total(n, Spin::Raise);
    let sm = total(n, Spin::Lower);
    let sz = total(n, Spin::Z);
    let id = CMat::identity(dim(n), dim(n));
    &sm * &sp + &sz * (&sz + id)
}

/// Computational basis vector.
pub fn basis_state(n: usize, b: usize) -> CVec {
    let mut v = CVec::zeros(dim(n));
    v[b] = ONE;
    v
}

/// Basis index from per-site bits, `bits[j]` for site j.
pub fn index_of(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | ((b as usize & 1) << j))
}

/// Sᶻ eigenvalue of a basis state.
pub fn sz_value(n: usize, b: usize) -> f64 {
    excitations(b) as f64 - 0.5 * n as f64
}

/// Returns the Sᶻ eigenvalue if `psi` is an Sᶻ eigenstate within `tol`.
pub fn sz_eigenvalue(n: usize, psi: &CVec, tol: f64) -> Option<f64> {
    let norm2 = psi.norm_squared();
    let mean: f64 = psi
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * sz_value(n, b))
        .sum::<f64>()
        / norm2;
    let var: f64 = psi
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * (sz_value(n, b) - mean).powi(2))
        .sum::<f64>()
        / norm2;
    (var.sqrt() <= tol).then_some(mean)
}

/// Diagonal unitary U_Q = exp(iQ Σⱼ j σⱼᶻ), sites j = 1..N.
pub fn momentum_shift(n: usize, q: f64) -> CMat {
    let d = dim(n);
    let mut u = CMat::zeros(d, d);
    for b in 0..d {
        let phase: f64 = (0..n)
            .map(|j| (j + 1) as f64 * if is_excited(b, j) { 0.5 } else { -0.5 })
            .sum();
        u[(b, b)] = C64::from_polar(1.0, q * phase);
    }
    u
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(dim(n), dim(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, commutator, max_abs};

    #[test]
    fn bilinear_matches_products() {
        let n = 3;
        let m = CMat::from_fn(n, n, |i, j| C64::new(i as f64 - 0.3 * j as f64, 0.7 * (i * j) as f64));
        for (l, r) in [(Spin::Raise, Spin::Lower), (Spin::Lower, Spin::Raise), (Spin::Z, Spin::Raise)] {
            let mut dense = CMat::zeros(8, 8);
            for i in 0..n {
                for j in 0..n {
                    dense += site(n, i, l) * site(n, j, r) * m[(i, j)];
                }
            }
            assert!(max_abs(&(bilinear(n, l, r, &m) - dense)) < 1e-14);
        }
    }

    #[test]
    fn local_sl2_relations() {
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let comm = commutator(&site(n, i, Spin::Raise), &site(n, j, Spin::Lower));
                let expected = if i == j { site(n, i, Spin::Z) * c(2.0) } else { CMat::zeros(8, 8) };
                assert!(max_abs(&(comm - expected)) < 1e-15);
                let comm = commutator(&site(n, i, Spin::Z), &site(n, j, Spin::Raise));
                let expected = if i == j { site(n, i, Spin::Raise) } else { CMat::zeros(8, 8) };
                assert!(max_abs(&(comm - expected)) < 1e-15);
            }
        }
    }

    #[test]
    fn lowering_annihilates_ground() {
        let n = 4;
        let g = basis_state(n, 0);
        assert_eq!((total(n, Spin::Lower) * g).norm(), 0.0);
    }

    #[test]
    fn momentum_shift_conjugates_raising() {
        let n = 3;
        let q = 0.7;
        let u = momentum_shift(n, q);
        let lhs = &u * total(n, Spin::Raise) * u.adjoint();
        assert!(max_abs(&(lhs - momentum(n, Spin::Raise, q))) < 1e-14);
        let lhs = momentum_shift(n, -q) * total(n, Spin::Lower) * momentum_shift(n, q);
        assert!(max_abs(&(lhs - momentum(n, Spin::Lower, q))) < 1e-14);
    }

    #[test]
    fn sz_eigen_detection() {
        let n = 2;
        let mut v = basis_state(n, 1) + basis_state(n, 2);
        v /= c(v.norm());
        assert_eq!(sz_eigenvalue(n, &v, 1e-12), Some(0.0));
        let w = basis_state(n, 0) + basis_state(n, 1);
        assert_eq!(sz_eigenvalue(n, &w, 1e-12), None);
    }
}
