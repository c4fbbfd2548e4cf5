mod common;

use subdeco_core::codes::{dimer_state, symmetric_state, DimerSpec};
use subdeco_core::lindblad::{
    canonical_lindblad, evolve_with, initial_slopes, tau1_inverse, EvolveOptions, LindbladModel, RegisterState,
};
use subdeco_core::linalg::CVec;
use subdeco_core::phonon::coupling_matrices;
use subdeco_core::{CouplingMatrices, DeviceParams, MaterialParams};

fn physical_coupling() -> CouplingMatrices {
    coupling_matrices(&DeviceParams::default(), &MaterialParams::gaas()).unwrap()
}

pub fn probe_states(seed: u64) -> Vec<(String, CVec)> {
    let mut rng = common::rng(seed);
    let mut out: Vec<(String, CVec)> = (0..5)
        .map(|k| (format!("random {k}"), common::random_state(16, &mut rng)))
        .collect();
    out.push(("D1 singlet".into(), dimer_state(&DimerSpec::adjacent_singlets(4).unwrap()).unwrap()));
    out.push((
        "D2 mixed signature".into(),
        dimer_state(&DimerSpec::from_one_based(4, &[(1, 3), (2, 4)], &[0, 1]).unwrap()).unwrap(),
    ));
    out.push(("symmetric".into(), symmetric_state(4).unwrap()));
    out
}

fn check_slopes(model: &LindbladModel, label: &str) {
    for (name, psi) in probe_states(7) {
        let rate = tau1_inverse(model, &psi);
        let (df, dd) = initial_slopes(model, &psi, 1e-4).unwrap();
        assert!((df + rate).abs() <= 0.02 * rate, "{label} {name}: dF/dt={df:e} tau1={rate:e}");
        assert!((dd - 2.0 * rate).abs() <= 0.05 * 2.0 * rate, "{label} {name}: dδ/dt={dd:e}");
    }
}

#[test]
fn fidelity_and_entropy_slopes_match_tau1() {
    let coupling = physical_coupling();
    let e = DeviceParams::default().level_splitting;
    check_slopes(&canonical_lindblad(&coupling, e).unwrap(), "with shift");
    check_slopes(&canonical_lindblad(&coupling.without_lamb_shift(), e).unwrap(), "without shift");
}

#[test]
fn tau1_ignores_the_lamb_shift() {
    let coupling = physical_coupling();
    let a = canonical_lindblad(&coupling, 5.0).unwrap();
    let b = canonical_lindblad(&coupling.without_lamb_shift(), 5.0).unwrap();
    for (_, psi) in probe_states(11) {
        assert_eq!(tau1_inverse(&a, &psi), tau1_inverse(&b, &psi));
    }
}

#[test]
fn evolution_keeps_trace_and_positivity() {
    let coupling = physical_coupling();
    let model = canonical_lindblad(&coupling, 5.0).unwrap();
    let times: Vec<f64> = (0..=20).map(|k| k as f64 * 25.0).collect();
    for (name, psi) in probe_states(3).into_iter().step_by(2) {
        let traj = evolve_with(&model, &RegisterState::pure(psi).unwrap(), &times, &EvolveOptions::default()).unwrap();
        for p in &traj.points {
            assert!(p.trace_error < 1e-8, "{name}: trace error {}", p.trace_error);
            assert!(p.min_eigenvalue > -1e-8, "{name}: eigenvalue {}", p.min_eigenvalue);
        }
        assert!((traj.points[0].fidelity - 1.0).abs() < 1e-12);
        assert!(traj.points[0].linear_entropy.abs() < 1e-14);
    }
}

#[test]
fn ground_state_relaxes_to_thermal_population() {
    // a single qubit approaches the detailed-balance ratio Γ⁺/Γ⁻
    let dev = DeviceParams {
        num_dots: 1,
        ..DeviceParams::default()
    };
    let coupling = coupling_matrices(&dev, &MaterialParams::gaas()).unwrap();
    let model = canonical_lindblad(&coupling, dev.level_splitting).unwrap();
    let gm = coupling.gamma.minus[(0, 0)].re;
    let gp = coupling.gamma.plus[(0, 0)].re;
    let excited = subdeco_core::operators::basis_state(1, 1);
    let t_end = 20.0 / (gm + gp);
    let traj = evolve_with(
        &model,
        &RegisterState::pure(excited).unwrap(),
        &[0.0, t_end],
        &EvolveOptions::default(),
    )
    .unwrap();
    let p_up = traj.final_state[(1, 1)].re;
    let want = gp / (gm + gp);
    assert!((p_up - want).abs() < 1e-6, "{p_up} vs {want}");
}
