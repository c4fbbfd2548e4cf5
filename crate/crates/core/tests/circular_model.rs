mod common;

use std::f64::consts::PI;

use common::{dense_lie_dimension, momentum_op, site_op};
use nalgebra::DMatrix;
use subdeco_core::circular::{
    antipodal_kernel_state, cm_coupling, cm_hamiltonian, cm_hamiltonian_q0, cm_spectrum_q0, in_z4, kernel_report,
    lindblad_algebra_dim, n2_spectrum, sl2_multiplicity, verify_commutators, CMSpec, TwoQubitLevel,
};
use subdeco_core::lindblad::{canonical_lindblad, effective_hamiltonian, tau1_inverse};
use subdeco_core::linalg::hermitian_eigen;

const GM: f64 = 1.0;
const GP: f64 = 0.5;

fn kernel_dim(n: usize, q: f64) -> usize {
    let spec = CMSpec::new(n, q, GM, GP).unwrap();
    kernel_report(&effective_hamiltonian(&cm_coupling(&spec).unwrap()))
        .unwrap()
        .kernel_dimension
}

fn expected_kernel_dim(n: usize, j: usize) -> usize {
    if n % 2 == 1 {
        return 0;
    }
    if j == 0 || 2 * j == n {
        return sl2_multiplicity(0, n as u32).unwrap() as usize;
    }
    if in_z4(n, j) {
        let half = sl2_multiplicity(0, (n / 2) as u32).unwrap() as usize;
        return half * half;
    }
    1
}

#[test]
fn kernel_dimension_on_roots_of_unity() {
    for n in [2usize, 4, 6, 8] {
        for j in 0..n {
            let q = 2.0 * PI * j as f64 / n as f64;
            assert_eq!(kernel_dim(n, q), expected_kernel_dim(n, j), "N={n} j={j}");
        }
    }
    assert_eq!(kernel_dim(8, PI / 2.0), 4);
    assert_eq!(kernel_dim(4, 0.0), 2);
}

#[test]
fn odd_registers_have_no_kernel() {
    for n in [3usize, 5, 7] {
        for j in 0..n {
            assert_eq!(kernel_dim(n, 2.0 * PI * j as f64 / n as f64), 0, "N={n} j={j}");
        }
        for q in [1.0, PI / 2f64.sqrt()] {
            assert_eq!(kernel_dim(n, q), 0);
        }
    }
}

#[test]
fn generic_wavevectors_have_no_kernel() {
    for n in [2usize, 4, 6, 8] {
        for q in [1.0, PI / 2f64.sqrt(), PI * (5f64.sqrt() - 1.0)] {
            assert_eq!(kernel_dim(n, q), 0, "N={n} Q={q}");
        }
    }
}

#[test]
fn antipodal_states_lie_in_the_kernel() {
    for n in [2usize, 4, 6, 8] {
        for j in 0..n {
            let spec = CMSpec::root_of_unity(n, j, GM, GP).unwrap();
            let h = effective_hamiltonian(&cm_coupling(&spec).unwrap());
            let psi = antipodal_kernel_state(n, j).unwrap();
            assert!((&h * &psi).norm() < 1e-10, "N={n} j={j}");
        }
    }
}

#[test]
fn kernel_states_do_not_decohere() {
    for (n, j) in [(4usize, 1usize), (4, 0), (6, 2), (8, 3)] {
        let spec = CMSpec::root_of_unity(n, j, GM, GP).unwrap();
        let coupling = cm_coupling(&spec).unwrap();
        let model = canonical_lindblad(&coupling, 5.0).unwrap();
        let report = kernel_report(&effective_hamiltonian(&coupling)).unwrap();
        for v in &report.kernel_basis {
            assert!(tau1_inverse(&model, v) < 1e-10, "N={n} j={j}");
        }
    }
}

#[test]
fn half_turn_is_unitarily_equivalent_to_zero() {
    for n in [2usize, 3, 4, 6] {
        let h0 = cm_hamiltonian(&CMSpec::new(n, 0.0, GM, GP).unwrap());
        let hpi = cm_hamiltonian(&CMSpec::new(n, PI, GM, GP).unwrap());
        let a = hermitian_eigen(&h0).values;
        let b = hermitian_eigen(&hpi).values;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn circular_hamiltonian_matches_rate_matrix_form() {
    for n in [2usize, 4, 5] {
        for q in [0.0, 0.7, PI / 2.0, 2.0 * PI / 3.0] {
            let spec = CMSpec::new(n, q, GM, GP).unwrap();
            let a = cm_hamiltonian(&spec);
            let b = effective_hamiltonian(&cm_coupling(&spec).unwrap());
            let diff = (&a - &b).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            assert!(diff < 1e-12, "N={n} Q={q}: {diff}");
        }
    }
}

fn dense_generators(n: usize, q: f64) -> Vec<DMatrix<common::C>> {
    vec![
        momentum_op(n, '+', q),
        momentum_op(n, '+', -q),
        momentum_op(n, '-', q),
        momentum_op(n, '-', -q),
    ]
}

#[test]
fn lie_closure_matches_dense_oracle() {
    for n in [2usize, 3, 4, 5] {
        let mut qs = vec![1.0, PI / 2.0];
        qs.extend((0..n).map(|j| 2.0 * PI * j as f64 / n as f64));
        for q in qs {
            let fast = lindblad_algebra_dim(n, q).unwrap();
            let dense = dense_lie_dimension(&dense_generators(n, q), 3 * n + 2);
            assert_eq!(fast, dense, "N={n} Q={q}");
        }
    }
}

#[test]
fn algebra_dimensions_follow_the_grading() {
    for n in [2usize, 4, 6, 8] {
        for j in 0..n {
            let q = 2.0 * PI * j as f64 / n as f64;
            let want = if j == 0 || 2 * j == n {
                3
            } else if in_z4(n, j) {
                6
            } else {
                3 * n / 2
            };
            assert_eq!(lindblad_algebra_dim(n, q).unwrap(), want, "N={n} j={j}");
        }
        assert_eq!(lindblad_algebra_dim(n, 1.0).unwrap(), 3 * n);
    }
}

#[test]
fn graded_commutators_hold() {
    for n in [2usize, 4, 6] {
        for (q, qp) in [(0.3, 1.1), (PI / 2.0, PI), (2.0 * PI / 3.0, 0.0)] {
            let r = verify_commutators(n, q, qp).unwrap();
            assert!(r.pass && r.max_defect < 1e-12, "N={n}: {}", r.max_defect);
        }
    }
}

#[test]
fn dense_site_operators_agree_with_library() {
    let n = 3;
    for j in 0..n {
        for (kind, spin) in [('+', subdeco_core::operators::Spin::Raise), ('-', subdeco_core::operators::Spin::Lower)] {
            let a = site_op(n, j, kind);
            let b = subdeco_core::operators::site(n, j, spin);
            assert!((&a - &b).norm() < 1e-15);
        }
    }
}

#[test]
fn q0_spectrum_matches_dense_diagonalisation() {
    for n in [2usize, 4, 6] {
        let check = cm_spectrum_q0(n, GM, GP).unwrap();
        assert!(check.max_deviation < 1e-10);
        assert_eq!(check.state_count, 1 << n);
        let dense = hermitian_eigen(&cm_hamiltonian_q0(n, GM, GP)).values;
        let mut predicted: Vec<f64> = check
            .levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity as usize))
            .collect();
        predicted.sort_by(f64::total_cmp);
        assert_eq!(predicted.len(), dense.len());
        for (p, d) in predicted.iter().zip(&dense) {
            assert!((p - d).abs() < 1e-10);
        }
    }
}

#[test]
fn multiplicities_fill_the_hilbert_space() {
    for n in 1u32..=8 {
        let total: u64 = subdeco_core::circular::allowed_two_j(n)
            .into_iter()
            .map(|tj| sl2_multiplicity(tj, n).unwrap() * (tj as u64 + 1))
            .sum();
        assert_eq!(total, 1 << n);
    }
}

#[test]
fn two_qubit_regimes_change_at_beta_c() {
    let s = n2_spectrum(GM, GP, 0.0).unwrap();
    let bc = s.beta_c;
    assert!(bc > 0.0);
    assert_eq!(n2_spectrum(GM, GP, 0.5 * bc).unwrap().ground, TwoQubitLevel::BothGround);
    assert_eq!(n2_spectrum(GM, GP, 2.0 * bc).unwrap().ground, TwoQubitLevel::Singlet);
    assert_eq!(n2_spectrum(GM, GP, -2.0 * bc).unwrap().ground, TwoQubitLevel::Triplet);
}

#[test]
fn two_qubit_closed_form_matches_dense() {
    use subdeco_core::linalg::{c, toeplitz};
    use subdeco_core::{CouplingMatrices, MatrixPair};
    for beta in [-0.9, -0.2, 0.0, 0.3, 0.8] {
        let s = n2_spectrum(GM, GP, beta).unwrap();
        let g = toeplitz(&[1.0, beta]);
        let coupling = CouplingMatrices::dissipative(MatrixPair {
            minus: &g * c(GM),
            plus: &g * c(GP),
        })
        .unwrap();
        let h = effective_hamiltonian(&coupling);
        let mut want = hermitian_eigen(&h).values.as_slice().to_vec();
        let mut got = s.energies().to_vec();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "beta={beta}");
        }
        for (state, e) in s.states.iter().zip(s.energies()) {
            assert!((&h * state - state * c(e)).norm() < 1e-12);
        }
    }
}
