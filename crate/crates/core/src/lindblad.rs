//! Register master equation in canonical Lindblad form, short-time
//! decoherence functionals and time evolution.
//!
//! Rates are in ps⁻¹ and energies in meV. For each sign η the coupling
//! matrix is diagonalised, Γ^(η) = Σ_μ λ_μ ū^μ (u^μ)ᵀ, giving jump operators
//! L_μ^η = Σᵢ uᵢ^μ σᵢ^η and the dissipator Σ λ (LρL† - ½{L†L, ρ}).
//! The coherent part is (i/ħ)[ρ, H_R + δH_R] with H_R = E Σᵢ σᵢᶻ.

use crate::error::{Error, Result};
use crate::integrator::{self, StepControl, StepStats};
use crate::linalg::{
    c, commutator, expectation, hermitian_eigen, hermiticity_defect, max_abs, min_eigenvalue,
    projector, trace, CMat, CVec, C64, I,
};
use crate::operators::{self, bilinear, check_sites, collective, dim, total, Spin};
use crate::phonon::CouplingMatrices;
use crate::units::HBAR;
use serde::{Deserialize, Serialize};

/// Pure or mixed register state.
#[derive(Debug, Clone, PartialEq)]
pub enum RegisterState {
    Pure(CVec),
    Mixed(CMat),
}

fn sites_of(d: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {d} is not 2^N")));
    }
    let n = d.trailing_zeros() as usize;
    check_sites(n)?;
    Ok(n)
}

impl RegisterState {
    pub fn pure(psi: CVec) -> Result<Self> {
        sites_of(psi.len())?;
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
        }
        Ok(RegisterState::Pure(psi))
    }

    /// Normalises `psi` first.
    pub fn pure_normalized(psi: CVec) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        Self::pure(psi / c(norm))
    }

    pub fn mixed(rho: CMat) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        sites_of(rho.nrows())?;
        let herm = hermiticity_defect(&rho);
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({herm:.2e})")));
        }
        let tr = trace(&rho).re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lo = min_eigenvalue(&rho);
        if lo < -1e-8 {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(RegisterState::Mixed(rho))
    }

    pub fn dimension(&self) -> usize {
        match self {
            RegisterState::Pure(v) => v.len(),
            RegisterState::Mixed(m) => m.nrows(),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.dimension().trailing_zeros() as usize
    }

    pub fn density(&self) -> CMat {
        match self {
            RegisterState::Pure(v) => projector(v),
            RegisterState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&CVec> {
        match self {
            RegisterState::Pure(v) => Some(v),
            RegisterState::Mixed(_) => None,
        }
    }
}

/// One dissipation channel λ·(LρL† - ½{L†L, ρ}).
#[derive(Debug, Clone)]
pub struct Channel {
    /// -1 for emission (σ⁻), +1 for absorption (σ⁺).
    pub sign: i8,
    pub rate: f64,
    /// Site weights uᵢ of L = Σᵢ uᵢ σᵢ^η.
    pub weights: Vec<C64>,
    pub operator: CMat,
}

#[derive(Debug, Clone)]
pub struct LindbladModel {
    num_sites: usize,
    channels: Vec<Channel>,
    register_hamiltonian: CMat,
    lamb_shift: CMat,
    /// Σ λ L†L.
    effective: CMat,
    /// (i/ħ)(H_R + δH_R) + ½ Σ λ L†L.
    drift: CMat,
    /// Same without H_R.
    drift_rotating: CMat,
}

/// Frame for [`evolve_with`]. Every channel moves exactly one excitation
/// and δH_R conserves Σσᶻ, so in the frame co-rotating with H_R the
/// generator is the lab one minus the H_R commutator. Populations and all
/// Sᶻ-diagonal quantities coincide in both frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    #[default]
    Rotating,
}

/// Smallest eigenvalue tolerated (relative to ‖Γ‖) before clipping turns
/// into an error.
pub const NEGATIVE_RATE_TOLERANCE: f64 = 1e-6;

/// Eigen-decomposes Γ^(η) into (λ_μ, u^μ) with Σ_μ λ_μ ū_i u_j = Γ_ij.
pub fn decompose_rates(gamma: &CMat) -> Result<Vec<(f64, Vec<C64>)>> {
    let eig = hermitian_eigen(gamma);
    let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(eig.values.len());
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda < -NEGATIVE_RATE_TOLERANCE * norm {
            return Err(Error::InvalidCoupling(format!(
                "rate matrix has eigenvalue {lambda:.3e} below -{NEGATIVE_RATE_TOLERANCE:e}·{norm:.3e}"
            )));
        }
        let u = eig.vectors.column(k).iter().map(|z| z.conj()).collect();
        out.push((lambda.max(0.0), u));
    }
    Ok(out)
}

/// δH_R = Σᵢⱼ Δ^(-)ᵢⱼ σᵢ⁺σⱼ⁻ + Δ^(+)ᵢⱼ σᵢ⁻σⱼ⁺, meV.
pub fn lamb_shift_hamiltonian(coupling: &CouplingMatrices) -> CMat {
    let n = coupling.num_sites();
    bilinear(n, Spin::Raise, Spin::Lower, &coupling.delta.minus)
        + bilinear(n, Spin::Lower, Spin::Raise, &coupling.delta.plus)
}

/// H̃ = Σᵢⱼ Γ^(-)ᵢⱼ σᵢ⁺σⱼ⁻ + Γ^(+)ᵢⱼ σᵢ⁻σⱼ⁺, ps⁻¹.
pub fn effective_hamiltonian(coupling: &CouplingMatrices) -> CMat {
    let n = coupling.num_sites();
    bilinear(n, Spin::Raise, Spin::Lower, &coupling.gamma.minus)
        + bilinear(n, Spin::Lower, Spin::Raise, &coupling.gamma.plus)
}

/// Builds the canonical model for a register with qubit splitting
/// `level_splitting` (meV).
pub fn canonical_lindblad(coupling: &CouplingMatrices, level_splitting: f64) -> Result<LindbladModel> {
    let n = coupling.num_sites();
    check_sites(n)?;
    let mut channels = Vec::new();
    for sign in [-1i8, 1] {
        for (rate, weights) in decompose_rates(coupling.gamma.get(sign))? {
            if rate == 0.0 {
                continue;
            }
            let operator = collective(n, Spin::from_sign(sign), &weights);
            channels.push(Channel {
                sign,
                rate,
                weights,
                operator,
            });
        }
    }
    let register_hamiltonian = total(n, Spin::Z) * c(level_splitting);
    let lamb_shift = lamb_shift_hamiltonian(coupling);
    let d = dim(n);
    let mut effective = CMat::zeros(d, d);
    for ch in &channels {
        effective += ch.operator.adjoint() * &ch.operator * c(ch.rate);
    }
    let drift_rotating = &lamb_shift * (I / HBAR) + &effective * c(0.5);
    let drift = &register_hamiltonian * (I / HBAR) + &drift_rotating;
    Ok(LindbladModel {
        num_sites: n,
        channels,
        register_hamiltonian,
        lamb_shift,
        effective,
        drift,
        drift_rotating,
    })
}

impl LindbladModel {
    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn register_hamiltonian(&self) -> &CMat {
        &self.register_hamiltonian
    }

    pub fn lamb_shift(&self) -> &CMat {
        &self.lamb_shift
    }

    /// Σ λ L†L; equals H̃ of the coupling up to clipped eigenvalues.
    pub fn effective_hamiltonian(&self) -> &CMat {
        &self.effective
    }

    /// Σ_μ λ_μ ū^μ_i u^μ_j for sign η.
    pub fn reconstruct_rates(&self, sign: i8) -> CMat {
        let n = self.num_sites;
        let mut g = CMat::zeros(n, n);
        for ch in self.channels.iter().filter(|ch| ch.sign == sign) {
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] += ch.weights[i].conj() * ch.weights[j] * ch.rate;
                }
            }
        }
        g
    }
}

/// dρ/dt in ps⁻¹ (lab frame).
pub fn liouvillian_apply(model: &LindbladModel, rho: &CMat) -> CMat {
    liouvillian_apply_in(model, rho, Frame::Lab)
}

pub fn liouvillian_apply_in(model: &LindbladModel, rho: &CMat, frame: Frame) -> CMat {
    let drift = match frame {
        Frame::Lab => &model.drift,
        Frame::Rotating => &model.drift_rotating,
    };
    let g_rho = drift * rho;
    let mut out = -(&g_rho + g_rho.adjoint());
    for ch in &model.channels {
        out += &ch.operator * rho * ch.operator.adjoint() * c(ch.rate);
    }
    out
}

/// ⟨ψ₀|ρ|ψ₀⟩ clipped to [0, 1].
pub fn fidelity(rho: &CMat, psi0: &CVec) -> f64 {
    expectation(rho, psi0).re.clamp(0.0, 1.0)
}

/// tr(ρ₀ρ) for a mixed reference, clipped to [0, 1].
pub fn overlap_fidelity(rho: &CMat, rho0: &CMat) -> f64 {
    trace(&(rho0 * rho)).re.clamp(0.0, 1.0)
}

/// δ = 1 - tr ρ².
pub fn linear_entropy(rho: &CMat) -> f64 {
    // tr ρ² = Σ |ρᵢⱼ|² for Hermitian ρ
    1.0 - rho.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// τ₁⁻¹ = Σ λ (‖Lψ‖² - |⟨ψ|L|ψ⟩|²), ps⁻¹.
pub fn tau1_inverse(model: &LindbladModel, psi: &CVec) -> f64 {
    model
        .channels
        .iter()
        .map(|ch| {
            let l_psi = &ch.operator * psi;
            ch.rate * (l_psi.norm_squared() - psi.dotc(&l_psi).norm_sqr())
        })
        .sum::<f64>()
        .max(0.0)
}

/// τ₁⁻¹ = ⟨ψ|H̃|ψ⟩, valid for Sᶻ eigenstates only.
pub fn tau1_inverse_via_heff(coupling: &CouplingMatrices, psi: &CVec) -> Result<f64> {
    let n = coupling.num_sites();
    if psi.len() != dim(n) {
        return Err(Error::InvalidState(format!(
            "state dimension {} does not match {n} sites",
            psi.len()
        )));
    }
    if operators::sz_eigenvalue(n, psi, 1e-10).is_none() {
        return Err(Error::InvalidState(
            "the effective-Hamiltonian rate needs an Sz eigenstate".into(),
        ));
    }
    Ok(expectation(&effective_hamiltonian(coupling), psi).re / psi.norm_squared())
}

/// τ_U⁻¹ = √(Var_ψ(δH)/2)/ħ, ps⁻¹.
pub fn tau_u_inverse(lamb_shift: &CMat, psi: &CVec) -> Result<f64> {
    let h_psi = lamb_shift * psi;
    let mean = psi.dotc(&h_psi).re;
    let var = h_psi.norm_squared() - mean * mean;
    let scale = h_psi.norm_squared().max(f64::MIN_POSITIVE);
    if var < -1e-12 * scale.max(1.0) {
        return Err(Error::Numerical(format!("negative energy variance {var:.3e}")));
    }
    Ok((var.max(0.0) / 2.0).sqrt() / HBAR)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub fidelity: f64,
    pub linear_entropy: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub control: StepControl,
    /// Abort when an eigenvalue of ρ falls below this.
    pub positivity_floor: f64,
    pub frame: Frame,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            control: StepControl::default(),
            positivity_floor: -1e-6,
            frame: Frame::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub stats: StepStats,
    pub final_state: CMat,
}

/// Integrates the master equation and samples observables at `times`
/// (increasing, starting at 0).
pub fn evolve(model: &LindbladModel, rho0: &RegisterState, times: &[f64]) -> Result<Vec<TrajectoryPoint>> {
    Ok(evolve_with(model, rho0, times, &EvolveOptions::default())?.points)
}

pub fn evolve_with(
    model: &LindbladModel,
    rho0: &RegisterState,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if rho0.dimension() != dim(model.num_sites) {
        return Err(Error::InvalidState(format!(
            "state dimension {} does not match {} sites",
            rho0.dimension(),
            model.num_sites
        )));
    }
    match times.first() {
        Some(&t0) if t0 == 0.0 => {}
        _ => return Err(Error::Integrator("time grid must start at 0".into())),
    }
    let reference = rho0.density();
    let mut points = Vec::with_capacity(times.len());
    let mut final_state = reference.clone();
    let stats = integrator::integrate(
        |_, rho| liouvillian_apply_in(model, rho, opts.frame),
        reference.clone(),
        times,
        &opts.control,
        |rho| {
            let sym = (&*rho + rho.adjoint()) * c(0.5);
            *rho = sym;
            Ok(())
        },
        |t, rho| {
            let lo = min_eigenvalue(rho);
            if lo < opts.positivity_floor {
                return Err(Error::Numerical(format!(
                    "density matrix eigenvalue {lo:.3e} below {:e} at t = {t} ps",
                    opts.positivity_floor
                )));
            }
            let fid = match rho0.as_pure() {
                Some(psi) => fidelity(rho, psi),
                None => overlap_fidelity(rho, &reference),
            };
            points.push(TrajectoryPoint {
                time: t,
                fidelity: fid,
                linear_entropy: linear_entropy(rho),
                trace_error: (trace(rho) - c(1.0)).norm(),
                min_eigenvalue: lo,
            });
            final_state = rho.clone();
            Ok(())
        },
    )?;
    Ok(Trajectory {
        points,
        stats,
        final_state,
    })
}

/// Initial slopes (dF/dt, dδ/dt) at t = 0 from a Richardson-extrapolated
/// forward difference of an actual integration with step `h` (ps).
pub fn initial_slopes(model: &LindbladModel, psi: &CVec, h: f64) -> Result<(f64, f64)> {
    let state = RegisterState::pure(psi.clone())?;
    let pts = evolve(model, &state, &[0.0, h, 2.0 * h])?;
    let slope = |f0: f64, f1: f64, f2: f64| (4.0 * (f1 - f0) - (f2 - f0)) / (2.0 * h);
    let f = slope(pts[0].fidelity, pts[1].fidelity, pts[2].fidelity);
    let d = slope(pts[0].linear_entropy, pts[1].linear_entropy, pts[2].linear_entropy);
    Ok((f, d))
}

/// Commutator check [δH_R, Σσᶻ] for diagnostics.
pub fn conserves_excitations(h: &CMat, n: usize) -> f64 {
    max_abs(&commutator(h, &total(n, Spin::Z)))
}
