//! Quantum-dot array geometry, material constants and the single-particle
//! form factors that enter every phonon integral.
//!
//! Each dot confines the carrier with an infinite square well of width `d`
//! along the array axis `z` and an isotropic 2D harmonic potential in the
//! `xy` plane. The two qubit levels are the in-plane ground state and the
//! first `y`-excited state, both in the well ground state, so the qubit
//! splitting equals the in-plane confinement energy `E = ħω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, HBAR, OPTICAL_PHONON_ENERGY};

/// Crystal constants in internal units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Scales the reference conduction-band mass.
    pub effective_mass_multiplier: f64,
    /// nm/ps.
    pub sound_velocity: f64,
    /// meV·ps²/nm⁵.
    pub mass_density: f64,
    /// Deformation-potential constant, meV.
    pub deformation_constant: f64,
    /// ħ²/2m* of the unscaled material, meV·nm².
    pub reference_mass_energy: f64,
}

impl MaterialParams {
    /// GaAs: m* = 0.067 mₑ, c = 5110 m/s, ρ = 5.3 g/cm³, D = 7 eV.
    pub fn gaas() -> Self {
        MaterialParams {
            effective_mass_multiplier: 1.0,
            sound_velocity: units::velocity_from_m_per_s(5110.0),
            mass_density: units::density_from_g_per_cm3(5.3),
            deformation_constant: units::energy_from_ev(7.0),
            reference_mass_energy: 569.0,
        }
    }

    pub fn with_mass_multiplier(mut self, multiplier: f64) -> Self {
        self.effective_mass_multiplier = multiplier;
        self
    }

    /// ħ²/2m* for the scaled mass, meV·nm².
    pub fn kinetic_scale(&self) -> f64 {
        self.reference_mass_energy / self.effective_mass_multiplier
    }

    pub fn check(&self) -> Result<()> {
        let fields = [
            ("effective_mass_multiplier", self.effective_mass_multiplier),
            ("sound_velocity", self.sound_velocity),
            ("mass_density", self.mass_density),
            ("deformation_constant", self.deformation_constant),
            ("reference_mass_energy", self.reference_mass_energy),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidMaterial(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::gaas()
    }
}

/// Geometry and operating point of the dot array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub num_dots: usize,
    /// Qubit splitting E, meV.
    pub level_splitting: f64,
    /// Quantum-well width d, nm.
    pub well_width: f64,
    /// Inter-dot distance a, nm.
    pub dot_spacing: f64,
    /// Lattice temperature, K.
    pub temperature: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            num_dots: 4,
            level_splitting: 5.0,
            well_width: 4.0,
            dot_spacing: 6.0,
            temperature: 10.0,
        }
    }
}

impl DeviceParams {
    /// Hard invariants; see [`validate`] for the soft ones.
    pub fn check(&self) -> Result<()> {
        if self.num_dots == 0 {
            return Err(Error::InvalidDevice("num_dots must be positive".into()));
        }
        for (name, value) in [
            ("level_splitting", self.level_splitting),
            ("well_width", self.well_width),
            ("dot_spacing", self.dot_spacing),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidDevice(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidDevice(format!(
                "temperature must be non-negative, got {}",
                self.temperature
            )));
        }
        if self.level_splitting >= OPTICAL_PHONON_ENERGY {
            return Err(Error::InvalidDevice(format!(
                "level_splitting {} meV is not below the optical-phonon energy {} meV",
                self.level_splitting, OPTICAL_PHONON_ENERGY
            )));
        }
        if self.num_dots > 1 && self.dot_spacing < self.well_width {
            return Err(Error::InvalidDevice(format!(
                "dot_spacing {} nm is smaller than well_width {} nm: neighbouring wavefunctions overlap",
                self.dot_spacing, self.well_width
            )));
        }
        Ok(())
    }

    /// In-plane Gaussian parameter a0 = m*ω/2ħ = E / (4·ħ²/2m*), nm⁻².
    pub fn a0(&self, mat: &MaterialParams) -> f64 {
        self.level_splitting / (4.0 * mat.kinetic_scale())
    }

    /// In-plane confinement length λ⊥ = a0^(-1/2), nm.
    pub fn perpendicular_length(&self, mat: &MaterialParams) -> f64 {
        self.a0(mat).powf(-0.5)
    }

    /// q0 = 2π/d, nm⁻¹.
    pub fn q0(&self) -> f64 {
        2.0 * PI / self.well_width
    }

    /// On-shell phonon wavevector Q = E/ħc, nm⁻¹.
    pub fn resonant_wavevector(&self, mat: &MaterialParams) -> f64 {
        self.level_splitting / (HBAR * mat.sound_velocity)
    }

    /// Position of dot `i` (0-based) along the array axis, nm.
    pub fn dot_position(&self, i: usize) -> f64 {
        i as f64 * self.dot_spacing
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.dot_spacing = spacing;
        self
    }
}

/// Orbital quantum numbers (n_x, n_y, ν) of a single-dot level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub nx: u32,
    pub ny: u32,
    pub nu: u32,
}

impl Level {
    pub const fn new(nx: u32, ny: u32, nu: u32) -> Self {
        Level { nx, ny, nu }
    }
}

/// Single-particle energies ε = (n_x + n_y + 1)·E + π²·(ħ²/2m*)·ν²/d², meV.
pub fn qubit_energies(device: &DeviceParams, mat: &MaterialParams, levels: &[Level]) -> Vec<f64> {
    let parallel_unit = PI * PI * mat.kinetic_scale() / (device.well_width * device.well_width);
    levels
        .iter()
        .map(|l| {
            (l.nx + l.ny + 1) as f64 * device.level_splitting
                + parallel_unit * (l.nu as f64).powi(2)
        })
        .collect()
}

/// Matrix elements ⟨final| e^{iq·r} |initial⟩ factorised along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactors {
    pub gx: Complex64,
    pub gy: Complex64,
    pub gz: Complex64,
}

impl FormFactors {
    pub fn product(&self) -> Complex64 {
        self.gx * self.gy * self.gz
    }
}

/// sin(x)/x, accurate through x = 0.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Well-ground-state overlap ⟨φ₀| e^{i qz z} |φ₀⟩ for a well centred at the
/// origin. Even in `qz`, equal to 1 at `qz = 0` and 1/2 at `|qz| = q0`.
///
/// Both removable points are evaluated through `sinc`, so there is no
/// cancellation near them.
pub fn well_overlap(qz: f64, well_width: f64) -> f64 {
    let d = well_width;
    let q0 = 2.0 * PI / d;
    let q = qz.abs();
    let u = q0 - q;
    if u.abs() < 0.5 * q0 {
        // sin(qd/2) = sin((q0 - q)d/2) near the first zero
        4.0 * PI * PI / (d * d * q * (q0 + q)) * sinc(u * d / 2.0)
    } else {
        4.0 * PI * PI / (d * d) * sinc(q * d / 2.0) / ((q0 - q) * (q0 + q))
    }
}

/// In-plane ground-to-ground overlap exp(-qx²/8a0).
pub fn inplane_gx(qx: f64, a0: f64) -> f64 {
    (-qx * qx / (8.0 * a0)).exp()
}

/// In-plane ground-to-first-excited overlap i·qy/(2√a0)·exp(-qy²/8a0).
pub fn inplane_gy(qy: f64, a0: f64) -> Complex64 {
    Complex64::new(0.0, qy / (2.0 * a0.sqrt()) * (-qy * qy / (8.0 * a0)).exp())
}

/// Form factors of dot `dot_index` at wavevector `q = (qx, qy, qz)` in nm⁻¹.
pub fn form_factors(
    q: [f64; 3],
    dot_index: usize,
    device: &DeviceParams,
    mat: &MaterialParams,
) -> FormFactors {
    let a0 = device.a0(mat);
    let [qx, qy, qz] = q;
    let phase = Complex64::from_polar(1.0, qz * device.dot_position(dot_index));
    FormFactors {
        gx: Complex64::new(inplane_gx(qx, a0), 0.0),
        gy: inplane_gy(qy, a0),
        gz: phase * well_overlap(qz, device.well_width),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// E < 5 k_B T: thermal leakage out of the qubit manifold is not negligible.
    Leakage { splitting_over_kt: f64 },
    /// Q·λ⊥ < 10: the single-mode (cosine) description of Γ degrades.
    CosineDegraded { q_over_sqrt_a0: f64 },
}

/// Soft checks on a device. Overlapping dots and other hard invariant
/// violations are returned as errors.
pub fn validate(device: &DeviceParams, mat: &MaterialParams) -> Result<Vec<Warning>> {
    device.check()?;
    mat.check()?;
    let mut warnings = Vec::new();
    if device.temperature > 0.0 {
        let ratio = device.level_splitting / units::thermal_energy(device.temperature);
        if ratio < 5.0 {
            warnings.push(Warning::Leakage {
                splitting_over_kt: ratio,
            });
        }
    }
    let ratio = device.resonant_wavevector(mat) / device.a0(mat).sqrt();
    if ratio < 10.0 {
        warnings.push(Warning::CosineDegraded {
            q_over_sqrt_a0: ratio,
        });
    }
    Ok(warnings)
}
