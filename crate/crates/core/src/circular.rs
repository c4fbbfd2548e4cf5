//! The circular model Γ^(±)ᵢⱼ = Γ^(±) cos(Q(i - j)): effective Hamiltonian,
//! graded Lindblad algebra, kernels and closed-form spectra.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, commutator, hermitian_eigen, max_abs, numerical_rank, toeplitz, CMat, CVec, C64, ZERO,
};
use crate::operators::{check_sites, dim, excitations, momentum, momentum_shift, total, Spin};
use crate::phonon::{CouplingMatrices, MatrixPair};

/// Circular-model parameters; `q` is the dimensionless phase per site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CMSpec {
    pub num_sites: usize,
    pub q: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

impl CMSpec {
    pub fn new(num_sites: usize, q: f64, gamma_minus: f64, gamma_plus: f64) -> Result<Self> {
        check_sites(num_sites)?;
        if !(gamma_plus >= 0.0 && gamma_minus >= gamma_plus && gamma_minus.is_finite()) {
            return Err(Error::InvalidCoupling(format!(
                "circular model needs gamma_minus >= gamma_plus >= 0, got {gamma_minus}, {gamma_plus}"
            )));
        }
        if !q.is_finite() {
            return Err(Error::Domain("Q must be finite".into()));
        }
        Ok(CMSpec {
            num_sites,
            q,
            gamma_minus,
            gamma_plus,
        })
    }

    /// Q_j = 2πj/N.
    pub fn root_of_unity(num_sites: usize, j: usize, gamma_minus: f64, gamma_plus: f64) -> Result<Self> {
        Self::new(num_sites, 2.0 * PI * j as f64 / num_sites as f64, gamma_minus, gamma_plus)
    }
}

/// Γ^(±)ᵢⱼ = Γ^(±) cos(Q(i - j)), no Lamb shift.
pub fn cm_coupling(spec: &CMSpec) -> Result<CouplingMatrices> {
    let row: Vec<f64> = (0..spec.num_sites).map(|k| (spec.q * k as f64).cos()).collect();
    let g = toeplitz(&row);
    CouplingMatrices::dissipative(MatrixPair {
        minus: &g * c(spec.gamma_minus),
        plus: &g * c(spec.gamma_plus),
    })
}

/// H_Q = Σ_α (Γ^(α)/2)(S_Q^{-α} S_{-Q}^{α} + S_{-Q}^{-α} S_Q^{α}).
pub fn cm_hamiltonian(spec: &CMSpec) -> CMat {
    let n = spec.num_sites;
    let q = spec.q;
    let mut h = CMat::zeros(dim(n), dim(n));
    for (alpha, rate) in [(Spin::Lower, spec.gamma_minus), (Spin::Raise, spec.gamma_plus)] {
        if rate == 0.0 {
            continue;
        }
        let anti = alpha.adjoint();
        let term = momentum(n, anti, q) * momentum(n, alpha, -q)
            + momentum(n, anti, -q) * momentum(n, alpha, q);
        h += term * c(rate / 2.0);
    }
    h
}

/// H₀ = Γ^(-) S⁺S⁻ + Γ^(+) S⁻S⁺.
pub fn cm_hamiltonian_q0(n: usize, gamma_minus: f64, gamma_plus: f64) -> CMat {
    let sp = total(n, Spin::Raise);
    let sm = total(n, Spin::Lower);
    &sp * &sm * c(gamma_minus) + &sm * &sp * c(gamma_plus)
}

/// ½ Σ_η U_{ηQ} H₀ U_{ηQ}†.
pub fn cm_hamiltonian_conjugated(spec: &CMSpec) -> CMat {
    let n = spec.num_sites;
    let h0 = cm_hamiltonian_q0(n, spec.gamma_minus, spec.gamma_plus);
    let mut h = CMat::zeros(dim(n), dim(n));
    for eta in [-1.0, 1.0] {
        let u = momentum_shift(n, eta * spec.q);
        h += &u * &h0 * u.adjoint();
    }
    h * c(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub max_defect: f64,
    pub pass: bool,
}

/// Checks [S_Q^±, S_{Q'}^∓] = ±2S^z_{Q+Q'}, [S^z, S_Q^±] = ±S_Q^± and the
/// graded form [S^z_Q, S^±_{Q'}] = ±S^±_{Q+Q'} as dense matrices.
pub fn verify_commutators(n: usize, q: f64, q_prime: f64) -> Result<CommutatorReport> {
    check_sites(n)?;
    if n > 8 {
        return Err(Error::Unsupported(format!("commutator check limited to N <= 8, got {n}")));
    }
    let sp = |k: f64| momentum(n, Spin::Raise, k);
    let sm = |k: f64| momentum(n, Spin::Lower, k);
    let sz = |k: f64| momentum(n, Spin::Z, k);
    let checks = [
        commutator(&sp(q), &sm(q_prime)) - sz(q + q_prime) * c(2.0),
        commutator(&sm(q), &sp(q_prime)) + sz(q + q_prime) * c(2.0),
        commutator(&sz(0.0), &sp(q)) - sp(q),
        commutator(&sz(0.0), &sm(q)) + sm(q),
        commutator(&sz(q), &sp(q_prime)) - sp(q + q_prime),
        commutator(&sz(q), &sm(q_prime)) + sm(q + q_prime),
    ];
    let max_defect = checks.iter().map(max_abs).fold(0.0, f64::max);
    Ok(CommutatorReport {
        max_defect,
        pass: max_defect < 1e-12,
    })
}

/// Element of ⊕ᵢ sl(2)ᵢ as per-site coefficients of (σ⁺, σ⁻, σᶻ), laid
/// out `[plus; minus; z]`.
fn bracket(x: &[C64], y: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![ZERO; 3 * n];
    for i in 0..n {
        let (p, m, z) = (x[i], x[n + i], x[2 * n + i]);
        let (p2, m2, z2) = (y[i], y[n + i], y[2 * n + i]);
        // [σ⁺,σ⁻] = 2σᶻ, [σᶻ,σ±] = ±σ±
        out[i] = z * p2 - p * z2;
        out[n + i] = m * z2 - z * m2;
        out[2 * n + i] = (p * m2 - m * p2) * 2.0;
    }
    out
}

fn momentum_coeffs(n: usize, kind: Spin, q: f64) -> Vec<C64> {
    let mut v = vec![ZERO; 3 * n];
    let offset = match kind {
        Spin::Raise => 0,
        Spin::Lower => n,
        Spin::Z => 2 * n,
    };
    for j in 0..n {
        v[offset + j] = C64::from_polar(1.0, q * (j + 1) as f64);
    }
    v
}

/// Projects `v` off the orthonormal set and returns the residual.
fn residual(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut r = v.to_vec();
    // two passes of modified Gram–Schmidt
    for _ in 0..2 {
        for b in basis {
            let proj: C64 = b.iter().zip(&r).map(|(bi, ri)| bi.conj() * ri).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= proj * bi;
            }
        }
    }
    r
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lie closure of `generators` under `bracket_fn`, as an orthonormal basis.
pub fn lie_closure<F>(generators: &[Vec<C64>], bracket_fn: F, max_dim: usize) -> Result<Vec<Vec<C64>>>
where
    F: Fn(&[C64], &[C64]) -> Vec<C64>,
{
    let scale = generators.iter().map(|g| norm(g)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let tol = 1e-10 * scale;
    let mut ortho: Vec<Vec<C64>> = Vec::new();
    let mut pending: Vec<Vec<C64>> = generators.to_vec();
    while let Some(v) = pending.pop() {
        let r = residual(&v, &ortho);
        let rn = norm(&r);
        if rn <= tol * norm(&v).max(1.0) {
            continue;
        }
        if ortho.len() >= max_dim {
            return Err(Error::Numerical(format!(
                "Lie closure exceeded the ambient dimension {max_dim}"
            )));
        }
        let unit: Vec<C64> = r.iter().map(|z| z / rn).collect();
        for other in &ortho {
            pending.push(bracket_fn(&unit, other));
        }
        ortho.push(unit);
    }
    Ok(ortho)
}

/// Dimension of the complex Lie algebra generated by S^±_{±Q}.
pub fn lindblad_algebra_dim(n: usize, q: f64) -> Result<usize> {
    check_sites(n)?;
    if n > 8 {
        return Err(Error::Unsupported(format!("algebra closure limited to N <= 8, got {n}")));
    }
    let gens: Vec<Vec<C64>> = [Spin::Raise, Spin::Lower]
        .into_iter()
        .flat_map(|kind| [q, -q].map(|k| momentum_coeffs(n, kind, k)))
        .collect();
    let basis = lie_closure(&gens, |x, y| bracket(x, y, n), 3 * n)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let m = CMat::from_fn(3 * n, basis.len(), |r, col| basis[col][r]);
    Ok(numerical_rank(&m, 1e-10))
}

/// Kernel and ground-state data of an effective Hamiltonian.
#[derive(Debug, Clone)]
pub struct CodeReport {
    pub ground_energy: f64,
    pub kernel_dimension: usize,
    /// Orthonormal kernel basis.
    pub kernel_basis: Vec<CVec>,
    /// Full spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors matching `eigenvalues`.
    pub eigenvectors: Vec<CVec>,
    pub threshold: f64,
}

/// Diagonalises `h` (per excitation-number sector when it conserves Σσᶻ)
/// and collects eigenvectors with eigenvalue below 1e-10·λ_max.
pub fn kernel_report(h: &CMat) -> Result<CodeReport> {
    let d = h.nrows();
    if d != h.ncols() || !d.is_power_of_two() {
        return Err(Error::Domain("effective Hamiltonian must be 2^N x 2^N".into()));
    }
    let n = d.trailing_zeros() as usize;
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for b in 0..d {
        sectors[excitations(b) as usize].push(b);
    }
    let mut conserves = true;
    'outer: for r in 0..d {
        for col in 0..d {
            if excitations(r) != excitations(col) && h[(r, col)].norm() > 0.0 {
                conserves = false;
                break 'outer;
            }
        }
    }
    if !conserves {
        sectors = vec![(0..d).collect()];
    }
    let mut pairs: Vec<(f64, CVec)> = Vec::with_capacity(d);
    for idx in &sectors {
        let k = idx.len();
        let block = CMat::from_fn(k, k, |r, col| h[(idx[r], idx[col])]);
        let eig = hermitian_eigen(&block);
        for (m, &val) in eig.values.iter().enumerate() {
            let mut v = CVec::zeros(d);
            for (r, &b) in idx.iter().enumerate() {
                v[b] = eig.vectors[(r, m)];
            }
            pairs.push((val, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let top = pairs.last().map_or(0.0, |p| p.0);
    let threshold = 1e-10 * top.abs();
    let kernel_basis: Vec<CVec> = pairs
        .iter()
        .filter(|(v, _)| *v < threshold)
        .map(|(_, vec)| vec.clone())
        .collect();
    Ok(CodeReport {
        ground_energy: pairs.first().map_or(0.0, |p| p.0),
        kernel_dimension: kernel_basis.len(),
        kernel_basis,
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        eigenvectors: pairs.into_iter().map(|p| p.1).collect(),
        threshold,
    })
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// n(J, N) = N!(2J+1)/((N/2+J+1)!(N/2-J)!), with J = `two_j`/2.
pub fn sl2_multiplicity(two_j: u32, n: u32) -> Result<u64> {
    if two_j > n || !(n - two_j).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "J = {}/2 is not an allowed total spin for {n} spins",
            two_j
        )));
    }
    // = C(N, N/2 - J)·(2J+1)/(N/2 + J + 1)
    let lower = ((n - two_j) / 2) as u64;
    let upper = ((n + two_j) / 2) as u64;
    let value = binomial(n as u64, lower) * (two_j as u128 + 1) / (upper as u128 + 1);
    Ok(value as u64)
}

/// Allowed values of 2J for N spins, ascending.
pub fn allowed_two_j(n: u32) -> Vec<u32> {
    (n % 2..=n).step_by(2).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    pub two_j: u32,
    pub two_m: i32,
    pub multiplicity: u64,
    pub energy: f64,
}

/// Closed-form spectrum of H₀: E = Σ_α Γ^(α)[J(J+1) - M(M+α)].
pub fn cm_spectrum_q0_levels(n: u32, gamma_minus: f64, gamma_plus: f64) -> Result<Vec<SpectrumLevel>> {
    let mut out = Vec::new();
    for two_j in allowed_two_j(n) {
        let mult = sl2_multiplicity(two_j, n)?;
        let j = two_j as f64 / 2.0;
        for two_m in (-(two_j as i32)..=two_j as i32).step_by(2) {
            let m = two_m as f64 / 2.0;
            let energy =
                gamma_minus * (j * (j + 1.0) - m * (m - 1.0)) + gamma_plus * (j * (j + 1.0) - m * (m + 1.0));
            out.push(SpectrumLevel {
                two_j,
                two_m,
                multiplicity: mult,
                energy,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub levels: Vec<SpectrumLevel>,
    pub max_deviation: f64,
    pub state_count: u64,
}

/// Closed-form Q = 0 spectrum matched against dense diagonalisation of H₀,
/// counting each level with its multiplicity.
pub fn cm_spectrum_q0(n: usize, gamma_minus: f64, gamma_plus: f64) -> Result<SpectrumCheck> {
    check_sites(n)?;
    if !n.is_multiple_of(2) || n > 8 {
        return Err(Error::Domain(format!("closed-form spectrum check needs even N <= 8, got {n}")));
    }
    let levels = cm_spectrum_q0_levels(n as u32, gamma_minus, gamma_plus)?;
    let mut expected: Vec<f64> = levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity as usize))
        .collect();
    expected.sort_by(f64::total_cmp);
    let state_count = expected.len() as u64;
    let numeric = kernel_report(&cm_hamiltonian_q0(n, gamma_minus, gamma_plus))?.eigenvalues;
    if numeric.len() != expected.len() {
        return Err(Error::Numerical(format!(
            "closed form lists {} states, Hilbert space has {}",
            expected.len(),
            numeric.len()
        )));
    }
    let max_deviation = numeric
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = gamma_minus.abs().max(gamma_plus.abs()).max(1.0);
    if max_deviation > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "closed-form spectrum deviates from diagonalisation by {max_deviation:.3e}"
        )));
    }
    Ok(SpectrumCheck {
        levels,
        max_deviation,
        state_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoQubitLevel {
    BothExcited,
    BothGround,
    Triplet,
    Singlet,
}

#[derive(Debug, Clone)]
pub struct TwoQubitSpectrum {
    pub e11: f64,
    pub e00: f64,
    pub triplet: f64,
    pub singlet: f64,
    pub beta_c: f64,
    /// Eigenstates in the order |11⟩, |00⟩, triplet, singlet.
    pub states: [CVec; 4],
    pub ground: TwoQubitLevel,
}

impl TwoQubitSpectrum {
    pub fn energies(&self) -> [f64; 4] {
        [self.e11, self.e00, self.triplet, self.singlet]
    }
}

/// Two qubits with Γ^(±)₁₂ = βΓ^(±).
pub fn n2_spectrum(gamma_minus: f64, gamma_plus: f64, beta: f64) -> Result<TwoQubitSpectrum> {
    if !(beta.abs() <= 1.0) {
        return Err(Error::Domain(format!("|beta| must not exceed 1, got {beta}")));
    }
    if !(gamma_plus >= 0.0 && gamma_minus >= gamma_plus) {
        return Err(Error::InvalidCoupling(format!(
            "need gamma_minus >= gamma_plus >= 0, got {gamma_minus}, {gamma_plus}"
        )));
    }
    let sum = gamma_minus + gamma_plus;
    let beta_c = if sum > 0.0 { (gamma_minus - gamma_plus) / sum } else { 0.0 };
    let e11 = 2.0 * gamma_minus;
    let e00 = 2.0 * gamma_plus;
    let triplet = sum * (1.0 + beta);
    let singlet = sum * (1.0 - beta);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let basis = |amps: [f64; 4]| CVec::from_iterator(4, amps.iter().map(|&a| c(a)));
    let states = [
        basis([0.0, 0.0, 0.0, 1.0]),
        basis([1.0, 0.0, 0.0, 0.0]),
        basis([0.0, r, r, 0.0]),
        basis([0.0, r, -r, 0.0]),
    ];
    let ground = if beta > beta_c {
        TwoQubitLevel::Singlet
    } else if beta < -beta_c {
        TwoQubitLevel::Triplet
    } else {
        TwoQubitLevel::BothGround
    };
    Ok(TwoQubitSpectrum {
        e11,
        e00,
        triplet,
        singlet,
        beta_c,
        states,
        ground,
    })
}

/// |ψ_j⟩ = ⊗_{i=1}^{N/2} (|01⟩ - (-1)^j |10⟩) on pairs (i, i + N/2).
pub fn antipodal_kernel_state(n: usize, j: usize) -> Result<CVec> {
    let spec = crate::codes::DimerSpec::antipodal(n, (j % 2) as u8)?;
    crate::codes::dimer_state(&spec)
}

/// gcd-based test for e^{iQ_j} ∈ 𝒵₄, i.e. 4j ≡ 0 (mod N).
pub fn in_z4(n: usize, j: usize) -> bool {
    (4 * j).is_multiple_of(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::effective_hamiltonian;
    use crate::linalg::hermiticity_defect;

    #[test]
    fn hamiltonian_forms_agree() {
        for (n, q) in [(3, 0.7), (4, PI / 2.0), (5, 2.1)] {
            let spec = CMSpec::new(n, q, 1.0, 0.4).unwrap();
            let h = cm_hamiltonian(&spec);
            let via_rates = effective_hamiltonian(&cm_coupling(&spec).unwrap());
            let via_shift = cm_hamiltonian_conjugated(&spec);
            assert!(max_abs(&(&h - via_rates)) < 1e-12);
            assert!(max_abs(&(&h - via_shift)) < 1e-12);
            assert!(hermiticity_defect(&h) < 1e-13);
        }
    }

    #[test]
    fn replica_point() {
        let spec = CMSpec::new(4, 0.0, 1.0, 0.3).unwrap();
        assert!(max_abs(&(cm_hamiltonian(&spec) - cm_hamiltonian_q0(4, 1.0, 0.3))) < 1e-12);
    }

    #[test]
    fn sublattices_decouple_at_quarter_turn() {
        let spec = CMSpec::new(6, PI / 2.0, 1.0, 0.0).unwrap();
        let g = cm_coupling(&spec).unwrap().gamma.minus;
        for i in 0..6usize {
            for j in 0..6usize {
                let d = i.abs_diff(j);
                let expected = if d % 2 == 1 { 0.0 } else if (d / 2) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((g[(i, j)].re - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bracket_matches_matrices() {
        let n = 2;
        let x = momentum_coeffs(n, Spin::Raise, 0.3);
        let y = momentum_coeffs(n, Spin::Lower, 1.1);
        let z = bracket(&x, &y, n);
        let expected = momentum_coeffs(n, Spin::Z, 1.4);
        for (a, b) in z.iter().zip(&expected) {
            assert!((a - b * 2.0).norm() < 1e-14);
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(sl2_multiplicity(0, 4).unwrap(), 2);
        assert_eq!(sl2_multiplicity(2, 4).unwrap(), 3);
        assert_eq!(sl2_multiplicity(4, 4).unwrap(), 1);
        assert_eq!(sl2_multiplicity(1, 3).unwrap(), 2);
        assert!(sl2_multiplicity(1, 4).is_err());
        assert!(sl2_multiplicity(6, 4).is_err());
        for n in 1..=10u32 {
            let count: u64 = allowed_two_j(n)
                .into_iter()
                .map(|tj| sl2_multiplicity(tj, n).unwrap() * (tj as u64 + 1))
                .sum();
            assert_eq!(count, 1 << n);
        }
    }

    #[test]
    fn two_qubit_regimes() {
        let s = n2_spectrum(1.0, 0.0, 1.0).unwrap();
        assert_eq!(s.singlet, 0.0);
        let s = n2_spectrum(1.0, 1.0, 0.0).unwrap();
        assert_eq!(s.energies(), [2.0, 2.0, 2.0, 2.0]);
        let s = n2_spectrum(1.0, 0.5, 0.2).unwrap();
        assert!((s.beta_c - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.ground, TwoQubitLevel::BothGround);
        assert_eq!(n2_spectrum(1.0, 0.5, 0.5).unwrap().ground, TwoQubitLevel::Singlet);
        assert_eq!(n2_spectrum(1.0, 0.5, -0.5).unwrap().ground, TwoQubitLevel::Triplet);
        assert!(n2_spectrum(1.0, 0.5, 1.5).is_err());
    }

    #[test]
    fn z4_membership() {
        assert!(in_z4(4, 1));
        assert!(in_z4(8, 2));
        assert!(!in_z4(8, 1));
        assert!(!in_z4(6, 1));
        assert!(in_z4(6, 3));
        assert!(in_z4(6, 0));
    }
}
