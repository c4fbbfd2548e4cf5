//! The five experiments. Grid points run on the rayon pool; results are
//! collected in grid order so output never depends on scheduling.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use subdeco_core::circular::{
    antipodal_kernel_state, cm_coupling, cm_hamiltonian, cm_spectrum_q0, in_z4, kernel_report,
    lindblad_algebra_dim, n2_spectrum, sl2_multiplicity, verify_commutators, CMSpec,
};
use subdeco_core::codes::{all_dimer_specs, f_factor, rate_from_factors, spacing_presets, symmetric_state, EncodedState};
use subdeco_core::lindblad::{
    canonical_lindblad, effective_hamiltonian, evolve_with, tau1_inverse, tau_u_inverse, EvolveOptions,
    RegisterState,
};
use subdeco_core::linalg::{c, hermitian_eigen, toeplitz, CMat, CVec};
use subdeco_core::operators::{basis_state, index_of};
use subdeco_core::phonon::{coupling_matrices_with, gamma_rows};
use subdeco_core::{CouplingMatrices, DeviceParams, MaterialParams, MatrixPair};

use crate::config::{CaseLabel, Experiment, InitialState, Range, RunConfig, StateKind};
use crate::error::CliError;
use crate::output::{self, Cell, ConfigEcho};

/// Files written by a run and the check clauses that failed.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

pub struct Context<'a> {
    pub config: &'a RunConfig,
    pub seed: u64,
    pub out_dir: &'a Path,
}

impl Context<'_> {
    fn echo(&self) -> ConfigEcho<'_> {
        ConfigEcho {
            seed: self.seed,
            config: self.config,
        }
    }
}

pub fn run(experiment: Experiment, ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    match experiment {
        Experiment::SweepRate => sweep_rate(ctx),
        Experiment::SweepDistance => sweep_distance(ctx),
        Experiment::Evolve => evolve(ctx),
        Experiment::CmVerify => cm_verify(ctx),
        Experiment::Codes => codes(ctx),
    }
}

fn period(device: &DeviceParams, mat: &MaterialParams) -> f64 {
    2.0 * PI / device.resonant_wavevector(mat)
}

/// Spacing grid of the distance sweep, [d, d + 3·2π/Q] unless configured.
pub fn spacing_grid(cfg: &RunConfig) -> Vec<f64> {
    match &cfg.sweep.spacing_nm {
        Some(r) => r.points(),
        None => {
            let dev = cfg.device.params();
            let d = dev.well_width;
            Range {
                start: d,
                stop: d + 3.0 * period(&dev, &cfg.material.params()),
                count: 128,
            }
            .points()
        }
    }
}

pub fn initial_vector(state: &InitialState, n: usize) -> Result<CVec, CliError> {
    let v = match state.kind {
        StateKind::Dimer => subdeco_core::codes::dimer_state(&state.dimer_spec(n)?),
        StateKind::Sym => symmetric_state(n),
        StateKind::Product => Ok(basis_state(n, index_of(&state.bits))),
    };
    v.map_err(|e| CliError::config("initial_state", e))
}

/// Coupling with every inter-dot element removed: each dot sees its own bath.
fn uncorrelated(cpl: &CouplingMatrices) -> Result<CouplingMatrices, subdeco_core::Error> {
    let diag = |m: &CMat| CMat::from_diagonal(&m.diagonal());
    CouplingMatrices::new(
        MatrixPair {
            minus: diag(&cpl.gamma.minus),
            plus: diag(&cpl.gamma.plus),
        },
        MatrixPair {
            minus: diag(&cpl.delta.minus),
            plus: diag(&cpl.delta.plus),
        },
    )
}

fn sweep_rate(ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    let cfg = ctx.config;
    let mat = cfg.material.params();
    let opts = cfg.tolerances.coupling();
    let energies = cfg.sweep.energy_mev.points();
    let grid: Vec<(f64, f64)> = cfg
        .sweep
        .well_widths_nm
        .iter()
        .flat_map(|&d| energies.iter().map(move |&e| (e, d)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(e, d)| {
            let dev = single_dot(e, d, cfg.device.temperature_k);
            let (minus, plus) = gamma_rows(&dev, &mat, &[0.0], &opts)
                .map_err(|err| CliError::numerical(format!("E = {e} meV, d = {d} nm"), err))?;
            Ok(vec![Cell::Num(e), Cell::Num(d), Cell::Num(minus[0] + plus[0])])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let path = ctx.out_dir.join("rate.csv");
    output::write_csv(&path, &output::RATE_COLUMNS, &rows)?;
    Ok(RunOutcome {
        files: vec![path],
        failures: Vec::new(),
    })
}

pub fn single_dot(level_splitting: f64, well_width: f64, temperature: f64) -> DeviceParams {
    DeviceParams {
        num_dots: 1,
        level_splitting,
        well_width,
        dot_spacing: well_width,
        temperature,
    }
}

fn sweep_distance(ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    let cfg = ctx.config;
    let base = cfg.device.params();
    let opts = cfg.tolerances.coupling();
    let psi = initial_vector(&cfg.initial_state, base.num_dots)?;
    let spacings = spacing_grid(cfg);
    let grid: Vec<(f64, f64)> = cfg
        .sweep
        .mass_multipliers
        .iter()
        .flat_map(|&m| spacings.iter().map(move |&a| (m, a)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(m, a)| {
            let context = format!("a = {a} nm, mass multiplier {m}");
            let err = |e| CliError::numerical(&context, e);
            let mat = cfg.material.params().with_mass_multiplier(m);
            let dev = base.with_spacing(a);
            let cpl = coupling_matrices_with(&dev, &mat, &opts).map_err(err)?;
            let model = canonical_lindblad(&cpl, dev.level_splitting).map_err(err)?;
            let rate = tau1_inverse(&model, &psi);
            let indep = canonical_lindblad(&uncorrelated(&cpl).map_err(err)?, dev.level_splitting).map_err(err)?;
            let baseline = tau1_inverse(&indep, &psi);
            let tau_u = tau_u_inverse(model.lamb_shift(), &psi).map_err(err)?;
            Ok(vec![
                Cell::Num(a),
                Cell::Num(m),
                Cell::Num(rate),
                Cell::Num(baseline),
                Cell::Num(tau_u),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let path = ctx.out_dir.join("distance.csv");
    output::write_csv(&path, &output::DISTANCE_COLUMNS, &rows)?;
    Ok(RunOutcome {
        files: vec![path],
        failures: Vec::new(),
    })
}

pub fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect()
}

fn evolve(ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    let cfg = ctx.config;
    let base = cfg.device.params();
    let mat = cfg.material.params();
    let opts = cfg.tolerances.coupling();
    let presets = spacing_presets(&base, &mat).map_err(|e| CliError::numerical("spacing presets", e))?;
    let psi = initial_vector(&cfg.initial_state, base.num_dots)?;
    let state = RegisterState::pure(psi).map_err(|e| CliError::config("initial_state", e))?;
    let times = time_grid(cfg.evolve.t_max_ps, cfg.evolve.sample_count);
    let evolve_opts = EvolveOptions {
        control: cfg.tolerances.step_control(),
        ..EvolveOptions::default()
    };
    let blocks = cfg
        .evolve
        .cases
        .par_iter()
        .map(|&case| {
            let a = preset_spacing(&presets, case);
            let context = format!("case {} (a = {a} nm)", case.as_str());
            let err = |e| CliError::numerical(&context, e);
            let dev = base.with_spacing(a);
            let mut cpl = coupling_matrices_with(&dev, &mat, &opts).map_err(err)?;
            if !cfg.evolve.include_lamb_shift {
                cpl = cpl.without_lamb_shift();
            }
            let model = canonical_lindblad(&cpl, dev.level_splitting).map_err(err)?;
            let traj = evolve_with(&model, &state, &times, &evolve_opts).map_err(err)?;
            Ok(traj
                .points
                .iter()
                .map(|p| {
                    vec![
                        Cell::Text(case.as_str().to_string()),
                        Cell::Num(p.time),
                        Cell::Num(p.fidelity),
                        Cell::Num(p.linear_entropy),
                        Cell::Num(p.trace_error),
                        Cell::Num(p.min_eigenvalue),
                    ]
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows: Vec<Vec<Cell>> = blocks.into_iter().flatten().collect();
    let path = ctx.out_dir.join("evolve.csv");
    output::write_csv(&path, &output::EVOLVE_COLUMNS, &rows)?;
    Ok(RunOutcome {
        files: vec![path],
        failures: Vec::new(),
    })
}

fn preset_spacing(p: &subdeco_core::codes::SpacingPresets, case: CaseLabel) -> f64 {
    match case {
        CaseLabel::A => p.a,
        CaseLabel::B => p.b,
        CaseLabel::C => p.c,
    }
}

// ---------------------------------------------------------------- cm-verify

const KERNEL_TOL: f64 = 1e-10;

#[derive(Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Clause {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Clause {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WavevectorEntry {
    pub num_dots: usize,
    /// Root-of-unity index j with Q = 2πj/N; absent for random samples.
    pub j: Option<usize>,
    pub q: f64,
    pub kernel_dimension: usize,
    pub expected_kernel_dimension: usize,
    pub algebra_dimension: usize,
    pub expected_algebra_dimension: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Serialize)]
pub struct SizeEntry {
    pub num_dots: usize,
    pub clauses: Vec<Clause>,
    pub wavevectors: Vec<WavevectorEntry>,
}

#[derive(Debug, Serialize)]
pub struct CmResults {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub sizes: Vec<SizeEntry>,
    pub two_qubit: Vec<Clause>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Kernel dimension of the circular model at Q = 2πj/N.
pub fn expected_kernel_dim(n: usize, j: usize) -> Result<usize, subdeco_core::Error> {
    if n % 2 == 1 {
        return Ok(0);
    }
    if j.is_multiple_of(n) || 2 * j == n {
        return Ok(sl2_multiplicity(0, n as u32)? as usize);
    }
    if in_z4(n, j) {
        let half = sl2_multiplicity(0, (n / 2) as u32)? as usize;
        return Ok(half * half);
    }
    Ok(1)
}

/// Dimension of the Lie algebra generated by the collective jump
/// operators at Q = 2πj/N: with m the order of e^{iQ}, 3m for odd m and
/// 3m/2 for even m.
pub fn expected_algebra_dim(n: usize, j: usize) -> usize {
    let m = n / gcd(j % n, n);
    if m % 2 == 1 {
        3 * m
    } else {
        3 * m / 2
    }
}

fn wavevector_entry(
    n: usize,
    j: Option<usize>,
    q: f64,
    gm: f64,
    gp: f64,
) -> Result<WavevectorEntry, subdeco_core::Error> {
    let spec = CMSpec::new(n, q, gm, gp)?;
    let coupling = cm_coupling(&spec)?;
    let h = effective_hamiltonian(&coupling);
    let report = kernel_report(&h)?;
    let model = canonical_lindblad(&coupling, 1.0)?;
    let algebra = lindblad_algebra_dim(n, q)?;
    let (expected_kernel, expected_algebra) = match j {
        Some(j) => (expected_kernel_dim(n, j)?, expected_algebra_dim(n, j)),
        None => (0, 3 * n),
    };
    let mut clauses = vec![
        Clause::new(
            "kernel_dimension",
            report.kernel_dimension == expected_kernel,
            format!("measured {} expected {}", report.kernel_dimension, expected_kernel),
        ),
        Clause::new(
            "algebra_dimension",
            algebra == expected_algebra,
            format!("measured {algebra} expected {expected_algebra}"),
        ),
    ];
    let worst = report
        .kernel_basis
        .iter()
        .map(|v| tau1_inverse(&model, v))
        .fold(0.0f64, f64::max);
    clauses.push(Clause::new(
        "kernel_states_stable",
        worst < KERNEL_TOL,
        format!("max tau1^-1 over kernel {worst:.3e}"),
    ));
    if let Some(j) = j {
        if n.is_multiple_of(2) {
            let psi = antipodal_kernel_state(n, j)?;
            let residual = (&h * &psi).norm();
            clauses.push(Clause::new(
                "antipodal_state_in_kernel",
                residual < KERNEL_TOL,
                format!("|H psi| = {residual:.3e}"),
            ));
        }
        let q_next = 2.0 * PI * ((j + 1) % n) as f64 / n as f64;
        let comm = verify_commutators(n, q, q_next)?;
        clauses.push(Clause::new(
            "graded_commutators",
            comm.pass,
            format!("max defect {:.3e}", comm.max_defect),
        ));
    }
    Ok(WavevectorEntry {
        num_dots: n,
        j,
        q,
        kernel_dimension: report.kernel_dimension,
        expected_kernel_dimension: expected_kernel,
        algebra_dimension: algebra,
        expected_algebra_dimension: expected_algebra,
        clauses,
    })
}

fn size_clauses(n: usize, gm: f64, gp: f64) -> Result<Vec<Clause>, subdeco_core::Error> {
    let mut out = Vec::new();
    let total: u64 = subdeco_core::circular::allowed_two_j(n as u32)
        .into_iter()
        .map(|tj| sl2_multiplicity(tj, n as u32).map(|m| m * (tj as u64 + 1)))
        .sum::<Result<u64, _>>()?;
    out.push(Clause::new(
        "multiplicities_fill_space",
        total == 1u64 << n,
        format!("sum (2J+1) n(J) = {total}"),
    ));
    if n.is_multiple_of(2) {
        let check = cm_spectrum_q0(n, gm, gp)?;
        out.push(Clause::new(
            "q0_spectrum_closed_form",
            check.max_deviation < 1e-9 && check.state_count == 1u64 << n,
            format!("max deviation {:.3e} over {} states", check.max_deviation, check.state_count),
        ));
    }
    let e0 = hermitian_eigen(&cm_hamiltonian(&CMSpec::new(n, 0.0, gm, gp)?)).values;
    let epi = hermitian_eigen(&cm_hamiltonian(&CMSpec::new(n, PI, gm, gp)?)).values;
    let dev = e0.iter().zip(epi.iter()).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    out.push(Clause::new(
        "half_turn_equivalent_to_zero",
        dev < 1e-9,
        format!("max spectral difference {dev:.3e}"),
    ));
    Ok(out)
}

fn two_qubit_clauses(gm: f64, gp: f64) -> Result<Vec<Clause>, subdeco_core::Error> {
    let mut out = Vec::new();
    for beta in [-0.9, -0.3, 0.0, 0.3, 0.9] {
        let s = n2_spectrum(gm, gp, beta)?;
        let g = toeplitz(&[1.0, beta]);
        let coupling = CouplingMatrices::dissipative(MatrixPair {
            minus: &g * c(gm),
            plus: &g * c(gp),
        })?;
        let h = effective_hamiltonian(&coupling);
        let mut dense = hermitian_eigen(&h).values.as_slice().to_vec();
        let mut closed = s.energies().to_vec();
        dense.sort_by(f64::total_cmp);
        closed.sort_by(f64::total_cmp);
        let dev = dense.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        out.push(Clause::new(
            &format!("two_qubit_spectrum_beta_{beta}"),
            dev < 1e-10,
            format!("max deviation {dev:.3e}, ground {:?}, beta_c {:.6}", s.ground, s.beta_c),
        ));
    }
    Ok(out)
}

fn cm_verify(ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    let cfg = ctx.config;
    let cm = &cfg.cm_verify;
    let (gm, gp) = (cm.gamma_minus, cm.gamma_plus);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut jobs: Vec<(usize, Option<usize>, f64)> = Vec::new();
    for &n in &cm.sizes {
        for j in 0..n {
            jobs.push((n, Some(j), 2.0 * PI * j as f64 / n as f64));
        }
        for _ in 0..cm.random_q_samples {
            jobs.push((n, None, rng.random_range(0.05..PI - 0.05)));
        }
    }
    let entries = jobs
        .par_iter()
        .map(|&(n, j, q)| {
            wavevector_entry(n, j, q, gm, gp).map_err(|e| CliError::numerical(format!("N = {n}, Q = {q}"), e))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut sizes = Vec::new();
    let mut entries = entries.into_iter().peekable();
    for &n in &cm.sizes {
        let clauses = size_clauses(n, gm, gp).map_err(|e| CliError::numerical(format!("N = {n}"), e))?;
        let mut wavevectors = Vec::new();
        while let Some(e) = entries.next_if(|e| e.num_dots == n) {
            wavevectors.push(e);
        }
        sizes.push(SizeEntry {
            num_dots: n,
            clauses,
            wavevectors,
        });
    }
    let two_qubit = two_qubit_clauses(gm, gp).map_err(|e| CliError::numerical("two-qubit spectrum", e))?;
    let results = CmResults {
        gamma_minus: gm,
        gamma_plus: gp,
        sizes,
        two_qubit,
    };
    let failures = cm_failures(&results);
    let path = ctx.out_dir.join("cm_report.json");
    output::write_report(&path, ctx.echo(), &results, failures.is_empty())?;
    Ok(RunOutcome {
        files: vec![path],
        failures,
    })
}

fn cm_failures(r: &CmResults) -> Vec<String> {
    let mut out = Vec::new();
    for size in &r.sizes {
        for cl in size.clauses.iter().filter(|c| !c.pass) {
            out.push(format!("N = {}: {} ({})", size.num_dots, cl.name, cl.detail));
        }
        for w in &size.wavevectors {
            for cl in w.clauses.iter().filter(|c| !c.pass) {
                let at = match w.j {
                    Some(j) => format!("j = {j}"),
                    None => format!("Q = {}", w.q),
                };
                out.push(format!("N = {}, {at}: {} ({})", w.num_dots, cl.name, cl.detail));
            }
        }
    }
    for cl in r.two_qubit.iter().filter(|c| !c.pass) {
        out.push(format!("{} ({})", cl.name, cl.detail));
    }
    out
}

// -------------------------------------------------------------------- codes

#[derive(Debug, Serialize)]
pub struct EigenstateEntry {
    pub energy: f64,
    pub tau1_inv_per_ps: f64,
}

#[derive(Debug, Serialize)]
pub struct EncodedEntry {
    /// `sym`, or one-based pairs with s (singlet) / t (triplet) marks.
    pub label: String,
    pub tau1_inv_per_ps: f64,
    pub tau1_inv_from_factors_per_ps: f64,
    pub f_factor: f64,
    pub suppression: f64,
}

#[derive(Debug, Serialize)]
pub struct CodesResults {
    pub dot_spacing_nm: f64,
    pub ground_energy: f64,
    pub kernel_dimension: usize,
    pub kernel_threshold: f64,
    pub lowest_states: Vec<EigenstateEntry>,
    pub uncorrelated_baseline_per_ps: f64,
    pub encoded_states: Vec<EncodedEntry>,
    pub clauses: Vec<Clause>,
}

fn codes(ctx: &Context<'_>) -> Result<RunOutcome, CliError> {
    let results = codes_results(ctx.config)?;
    let failures: Vec<String> = results
        .clauses
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    let path = ctx.out_dir.join("codes.json");
    output::write_report(&path, ctx.echo(), &results, failures.is_empty())?;
    Ok(RunOutcome {
        files: vec![path],
        failures,
    })
}

pub fn codes_results(cfg: &RunConfig) -> Result<CodesResults, CliError> {
    let mat = cfg.material.params();
    let mut dev = cfg.device.params();
    let num = |what: &str| {
        let what = what.to_string();
        move |e| CliError::numerical(&what, e)
    };
    if let Some(case) = cfg.codes.spacing_preset {
        let presets = spacing_presets(&dev, &mat).map_err(num("spacing presets"))?;
        dev = dev.with_spacing(preset_spacing(&presets, case));
    }
    let n = dev.num_dots;
    let mut cpl = coupling_matrices_with(&dev, &mat, &cfg.tolerances.coupling()).map_err(num("coupling"))?;
    if !cfg.codes.include_lamb_shift {
        cpl = cpl.without_lamb_shift();
    }
    let model = canonical_lindblad(&cpl, dev.level_splitting).map_err(num("master equation"))?;
    let report = kernel_report(&effective_hamiltonian(&cpl)).map_err(num("kernel"))?;
    let lowest_states = report
        .eigenvalues
        .iter()
        .zip(&report.eigenvectors)
        .take(cfg.codes.lowest_states)
        .map(|(&energy, v)| EigenstateEntry {
            energy,
            tau1_inv_per_ps: tau1_inverse(&model, v),
        })
        .collect();

    let g0 = cpl.gamma.minus[(0, 0)].re + cpl.gamma.plus[(0, 0)].re;
    let baseline = g0 * n as f64 / 2.0;
    let mut states = Vec::new();
    if n.is_multiple_of(2) {
        states.push(EncodedState::Symmetric);
        states.extend(
            all_dimer_specs(n)
                .map_err(num("dimer partitions"))?
                .into_iter()
                .map(EncodedState::Dimer),
        );
    }
    let tilde = &cpl.gamma.minus / c(cpl.gamma.minus[(0, 0)].re);
    let encoded_states = states
        .par_iter()
        .map(|s| {
            let label = s.to_string();
            let err = |e| CliError::numerical(format!("state {label}"), e);
            let psi = s.vector(n).map_err(err)?;
            let direct = tau1_inverse(&model, &psi);
            Ok(EncodedEntry {
                tau1_inv_from_factors_per_ps: rate_from_factors(&cpl, s).map_err(err)?,
                f_factor: f_factor(&tilde, s).map_err(err)?,
                suppression: direct / baseline,
                tau1_inv_per_ps: direct,
                label,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut clauses = Vec::new();
    let worst = encoded_states
        .iter()
        .map(|e| (e.tau1_inv_per_ps - e.tau1_inv_from_factors_per_ps).abs() / baseline)
        .fold(0.0f64, f64::max);
    clauses.push(Clause::new(
        "factor_formula_matches_master_equation",
        worst < 1e-8,
        format!("max deviation {worst:.3e} of the baseline"),
    ));
    if cfg.codes.spacing_preset == Some(CaseLabel::C) && n == 4 {
        let find = |label: &str| encoded_states.iter().find(|e| e.label == label);
        if let (Some(d1), Some(d2)) = (find("(1,2)s(3,4)s"), find("(1,3)s(2,4)s")) {
            clauses.push(Clause::new(
                "magic_spacing_suppression",
                d1.suppression <= 1e-2,
                format!("D1 singlet at {:.3e} of the baseline", d1.suppression),
            ));
            clauses.push(Clause::new(
                "crossed_partition_decays_faster",
                d2.tau1_inv_per_ps >= d1.tau1_inv_per_ps,
                format!("{:.4e} vs {:.4e} per ps", d2.tau1_inv_per_ps, d1.tau1_inv_per_ps),
            ));
        }
    }
    Ok(CodesResults {
        dot_spacing_nm: dev.dot_spacing,
        ground_energy: report.ground_energy,
        kernel_dimension: report.kernel_dimension,
        kernel_threshold: report.threshold,
        lowest_states,
        uncorrelated_baseline_per_ps: baseline,
        encoded_states,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_rule_on_small_cases() {
        assert_eq!(expected_algebra_dim(4, 0), 3);
        assert_eq!(expected_algebra_dim(4, 2), 3);
        assert_eq!(expected_algebra_dim(4, 1), 6);
        assert_eq!(expected_algebra_dim(8, 1), 12);
        assert_eq!(expected_algebra_dim(5, 2), 15);
        assert_eq!(expected_algebra_dim(6, 2), 9);
    }

    #[test]
    fn kernel_rule_on_small_cases() {
        assert_eq!(expected_kernel_dim(4, 0).unwrap(), 2);
        assert_eq!(expected_kernel_dim(8, 2).unwrap(), 4);
        assert_eq!(expected_kernel_dim(8, 1).unwrap(), 1);
        assert_eq!(expected_kernel_dim(5, 0).unwrap(), 0);
    }

    #[test]
    fn grids_have_the_configured_size() {
        let cfg = RunConfig::default();
        let g = spacing_grid(&cfg);
        assert_eq!(g.len(), 128);
        assert_eq!(g[0], cfg.device.well_width_nm);
        assert_eq!(time_grid(1000.0, 11), (0..=10).map(|k| 100.0 * k as f64).collect::<Vec<_>>());
    }
}
