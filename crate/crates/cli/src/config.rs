//! Run configuration: a single JSON document. Every field has a default, so
//! `{}` is a valid configuration for any experiment.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use subdeco_core::codes::DimerSpec;
use subdeco_core::units;
use subdeco_core::{DeviceParams, MaterialParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SweepRate,
    SweepDistance,
    Evolve,
    CmVerify,
    Codes,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepRate => "sweep-rate",
            Experiment::SweepDistance => "sweep-distance",
            Experiment::Evolve => "evolve",
            Experiment::CmVerify => "cm-verify",
            Experiment::Codes => "codes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceConfig {
    pub num_dots: usize,
    pub level_splitting_mev: f64,
    pub well_width_nm: f64,
    pub dot_spacing_nm: f64,
    pub temperature_k: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        let d = DeviceParams::default();
        DeviceConfig {
            num_dots: d.num_dots,
            level_splitting_mev: d.level_splitting,
            well_width_nm: d.well_width,
            dot_spacing_nm: d.dot_spacing,
            temperature_k: d.temperature,
        }
    }
}

impl DeviceConfig {
    pub fn params(&self) -> DeviceParams {
        DeviceParams {
            num_dots: self.num_dots,
            level_splitting: self.level_splitting_mev,
            well_width: self.well_width_nm,
            dot_spacing: self.dot_spacing_nm,
            temperature: self.temperature_k,
        }
    }
}

/// Material constants in laboratory units; GaAs by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub effective_mass_multiplier: f64,
    pub sound_velocity_m_per_s: f64,
    pub mass_density_kg_per_m3: f64,
    pub deformation_potential_ev: f64,
    /// ħ²/2m* of the unscaled carrier, meV·nm².
    pub kinetic_scale_mev_nm2: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let m = MaterialParams::gaas();
        MaterialConfig {
            effective_mass_multiplier: m.effective_mass_multiplier,
            sound_velocity_m_per_s: units::velocity_to_m_per_s(m.sound_velocity),
            mass_density_kg_per_m3: units::density_to_kg_per_m3(m.mass_density),
            deformation_potential_ev: units::energy_to_ev(m.deformation_constant),
            kinetic_scale_mev_nm2: m.reference_mass_energy,
        }
    }
}

impl MaterialConfig {
    pub fn params(&self) -> MaterialParams {
        MaterialParams {
            effective_mass_multiplier: self.effective_mass_multiplier,
            sound_velocity: units::velocity_from_m_per_s(self.sound_velocity_m_per_s),
            mass_density: units::density_from_kg_per_m3(self.mass_density_kg_per_m3),
            deformation_constant: units::energy_from_ev(self.deformation_potential_ev),
            reference_mass_energy: self.kinetic_scale_mev_nm2,
        }
    }
}

/// Inclusive linear grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64)
            .collect()
    }

    fn validate(&self, field: &str) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::config(field, "count must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::config(field, "start and stop must be finite"));
        }
        if self.count > 1 && self.start >= self.stop {
            return Err(CliError::config(
                field,
                format!("start ({}) must be below stop ({})", self.start, self.stop),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Qubit splittings for `sweep-rate`, meV.
    pub energy_mev: Range,
    /// Well widths for `sweep-rate`, nm.
    pub well_widths_nm: Vec<f64>,
    /// Dot spacings for `sweep-distance`, nm. Defaults to
    /// [d, d + 3·2π/Q] with 128 points.
    pub spacing_nm: Option<Range>,
    pub mass_multipliers: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            energy_mev: Range {
                start: 1.0,
                stop: 10.0,
                count: 64,
            },
            well_widths_nm: vec![3.0, 4.0, 5.0],
            spacing_nm: None,
            mass_multipliers: vec![1.0, 5.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Dimer,
    Sym,
    Product,
}

/// Initial register state. `partition` pairs are 1-based site labels;
/// `signature` holds 0 (singlet) or 1 (triplet) per pair; `bits` gives the
/// per-site occupation of a product state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialState {
    pub kind: StateKind,
    pub partition: Vec<[usize; 2]>,
    pub signature: Vec<u8>,
    pub bits: Vec<u8>,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState {
            kind: StateKind::Dimer,
            partition: vec![[1, 2], [3, 4]],
            signature: vec![0, 0],
            bits: Vec::new(),
        }
    }
}

impl InitialState {
    pub fn dimer_spec(&self, n: usize) -> Result<DimerSpec, CliError> {
        let pairs: Vec<(usize, usize)> = self.partition.iter().map(|p| (p[0], p[1])).collect();
        DimerSpec::from_one_based(n, &pairs, &self.signature)
            .map_err(|e| CliError::config("initial_state.partition", e.to_string()))
    }

    fn validate(&self, n: usize) -> Result<(), CliError> {
        match self.kind {
            StateKind::Dimer => self.dimer_spec(n).map(|_| ()),
            StateKind::Sym => {
                if n % 2 == 1 {
                    Err(CliError::config("initial_state.kind", "the symmetric state needs an even number of dots"))
                } else {
                    Ok(())
                }
            }
            StateKind::Product => {
                if self.bits.len() != n || self.bits.iter().any(|&b| b > 1) {
                    Err(CliError::config(
                        "initial_state.bits",
                        format!("expected {n} entries of 0 or 1"),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
    C,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::A => "A",
            CaseLabel::B => "B",
            CaseLabel::C => "C",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    pub cases: Vec<CaseLabel>,
    pub t_max_ps: f64,
    pub sample_count: usize,
    pub include_lamb_shift: bool,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            cases: vec![CaseLabel::A, CaseLabel::B, CaseLabel::C],
            t_max_ps: 1000.0,
            sample_count: 101,
            include_lamb_shift: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CmVerifyConfig {
    pub sizes: Vec<usize>,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    /// Extra wavevectors drawn uniformly from (0, π) with the run seed.
    pub random_q_samples: usize,
}

impl Default for CmVerifyConfig {
    fn default() -> Self {
        CmVerifyConfig {
            sizes: vec![2, 3, 4, 5, 6, 7, 8],
            gamma_minus: 1.0,
            gamma_plus: 0.5,
            random_q_samples: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodesConfig {
    /// Replaces `device.dot_spacing_nm` with one of the evolve presets.
    pub spacing_preset: Option<CaseLabel>,
    pub lowest_states: usize,
    pub include_lamb_shift: bool,
}

impl Default for CodesConfig {
    fn default() -> Self {
        CodesConfig {
            spacing_preset: None,
            lowest_states: 5,
            include_lamb_shift: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub integrator_rel: f64,
    pub integrator_abs: f64,
    pub angular_rel: f64,
    pub radial_rel: f64,
    pub cutoff_factor: f64,
    pub cutoff_rel_change: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let c = subdeco_core::phonon::CouplingOptions::default();
        let s = subdeco_core::integrator::StepControl::default();
        Tolerances {
            integrator_rel: s.rel_tol,
            integrator_abs: s.abs_tol,
            angular_rel: c.angular_rel_tol,
            radial_rel: c.radial_rel_tol,
            cutoff_factor: c.cutoff_factor,
            cutoff_rel_change: c.cutoff_rel_change,
        }
    }
}

impl Tolerances {
    pub fn coupling(&self) -> subdeco_core::phonon::CouplingOptions {
        subdeco_core::phonon::CouplingOptions {
            angular_rel_tol: self.angular_rel,
            radial_rel_tol: self.radial_rel,
            cutoff_factor: self.cutoff_factor,
            cutoff_rel_change: self.cutoff_rel_change,
        }
    }

    pub fn step_control(&self) -> subdeco_core::integrator::StepControl {
        subdeco_core::integrator::StepControl {
            rel_tol: self.integrator_rel,
            abs_tol: self.integrator_abs,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[derive(Default)]
pub struct RunConfig {
    /// Optional; must match the experiment named on the command line.
    pub experiment: Option<Experiment>,
    pub device: DeviceConfig,
    pub material: MaterialConfig,
    pub sweep: SweepConfig,
    pub initial_state: InitialState,
    pub evolve: EvolveConfig,
    pub cm_verify: CmVerifyConfig,
    pub codes: CodesConfig,
    pub tolerances: Tolerances,
    /// Used when `--out` is not given.
    pub output_dir: Option<PathBuf>,
}


impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Config(format!(
                "line {}, column {}, field `{}`: {}",
                inner.line(),
                inner.column(),
                path,
                inner
            ))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks cross-field constraints for the given experiment.
    pub fn validate(&self, experiment: Experiment) -> Result<(), CliError> {
        if let Some(e) = self.experiment {
            if e != experiment {
                return Err(CliError::config(
                    "experiment",
                    format!("config is for `{}` but `{}` was requested", e.name(), experiment.name()),
                ));
            }
        }
        let device = self.device.params();
        device.check().map_err(|e| CliError::config("device", e.to_string()))?;
        self.material
            .params()
            .check()
            .map_err(|e| CliError::config("material", e.to_string()))?;
        let t = &self.tolerances;
        for (name, v) in [
            ("tolerances.integrator_rel", t.integrator_rel),
            ("tolerances.integrator_abs", t.integrator_abs),
            ("tolerances.angular_rel", t.angular_rel),
            ("tolerances.radial_rel", t.radial_rel),
            ("tolerances.cutoff_rel_change", t.cutoff_rel_change),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::config(name, format!("must be positive, got {v}")));
            }
        }
        if !(t.cutoff_factor.is_finite() && t.cutoff_factor > 2.0) {
            return Err(CliError::config("tolerances.cutoff_factor", "must exceed 2"));
        }
        match experiment {
            Experiment::SweepRate => {
                self.sweep.energy_mev.validate("sweep.energy_mev")?;
                if self.sweep.energy_mev.start <= 0.0 {
                    return Err(CliError::config("sweep.energy_mev.start", "energies must be positive"));
                }
                if self.sweep.well_widths_nm.is_empty() {
                    return Err(CliError::config("sweep.well_widths_nm", "list must not be empty"));
                }
                for (k, &d) in self.sweep.well_widths_nm.iter().enumerate() {
                    if !(d.is_finite() && d > 0.0) {
                        return Err(CliError::config(
                            &format!("sweep.well_widths_nm[{k}]"),
                            format!("must be positive, got {d}"),
                        ));
                    }
                    for e in [self.sweep.energy_mev.start, self.sweep.energy_mev.stop] {
                        DeviceParams {
                            num_dots: 1,
                            level_splitting: e,
                            well_width: d,
                            dot_spacing: d,
                            temperature: device.temperature,
                        }
                        .check()
                        .map_err(|err| CliError::config("sweep.energy_mev", err))?;
                    }
                }
            }
            Experiment::SweepDistance => {
                if let Some(r) = &self.sweep.spacing_nm {
                    r.validate("sweep.spacing_nm")?;
                    if r.start < device.well_width {
                        return Err(CliError::config(
                            "sweep.spacing_nm.start",
                            format!("spacing {} nm is below the well width {} nm", r.start, device.well_width),
                        ));
                    }
                }
                if self.sweep.mass_multipliers.is_empty() {
                    return Err(CliError::config("sweep.mass_multipliers", "list must not be empty"));
                }
                for (k, &m) in self.sweep.mass_multipliers.iter().enumerate() {
                    if !(m.is_finite() && m > 0.0) {
                        return Err(CliError::config(
                            &format!("sweep.mass_multipliers[{k}]"),
                            format!("must be positive, got {m}"),
                        ));
                    }
                }
                self.initial_state.validate(device.num_dots)?;
            }
            Experiment::Evolve => {
                if self.evolve.cases.is_empty() {
                    return Err(CliError::config("evolve.cases", "list must not be empty"));
                }
                if !(self.evolve.t_max_ps.is_finite() && self.evolve.t_max_ps > 0.0) {
                    return Err(CliError::config("evolve.t_max_ps", "must be positive"));
                }
                if self.evolve.sample_count < 2 {
                    return Err(CliError::config("evolve.sample_count", "need at least 2 samples"));
                }
                self.initial_state.validate(device.num_dots)?;
            }
            Experiment::CmVerify => {
                if self.cm_verify.sizes.is_empty() {
                    return Err(CliError::config("cm_verify.sizes", "list must not be empty"));
                }
                for (k, &n) in self.cm_verify.sizes.iter().enumerate() {
                    if !(2..=8).contains(&n) {
                        return Err(CliError::config(
                            &format!("cm_verify.sizes[{k}]"),
                            format!("sizes must lie in 2..=8, got {n}"),
                        ));
                    }
                }
                let c = &self.cm_verify;
                if !(c.gamma_plus > 0.0 && c.gamma_minus >= c.gamma_plus && c.gamma_minus.is_finite()) {
                    return Err(CliError::config(
                        "cm_verify.gamma_plus",
                        "need gamma_minus >= gamma_plus > 0 for a strict kernel test",
                    ));
                }
            }
            Experiment::Codes => {
                if device.num_dots > 8 {
                    return Err(CliError::config("device.num_dots", "code search is limited to 8 dots"));
                }
            }
        }
        Ok(())
    }
}
