//! Internal unit system: energies in meV, lengths in nm, times in ps,
//! temperatures in K. Rates come out in ps⁻¹.

/// Reduced Planck constant in meV·ps.
pub const HBAR: f64 = 0.658_211_9;

/// Boltzmann constant in meV/K.
pub const K_B: f64 = 0.086_173_3;

/// Optical-phonon energy of GaAs in meV; qubit splittings must stay below it.
pub const OPTICAL_PHONON_ENERGY: f64 = 36.0;

const MEV_PER_JOULE: f64 = 6.241_509_074e21;
const PS_PER_SECOND: f64 = 1e12;
const NM_PER_METRE: f64 = 1e9;

/// kg/m³ → meV·ps²/nm⁵ (1 kg = 1 J·s²/m²).
pub fn density_from_kg_per_m3(rho: f64) -> f64 {
    rho * MEV_PER_JOULE * PS_PER_SECOND.powi(2) / NM_PER_METRE.powi(5)
}

pub fn density_to_kg_per_m3(rho: f64) -> f64 {
    rho / (MEV_PER_JOULE * PS_PER_SECOND.powi(2) / NM_PER_METRE.powi(5))
}

/// g/cm³ → meV·ps²/nm⁵.
pub fn density_from_g_per_cm3(rho: f64) -> f64 {
    density_from_kg_per_m3(rho * 1e3)
}

pub fn density_to_g_per_cm3(rho: f64) -> f64 {
    density_to_kg_per_m3(rho) * 1e-3
}

/// m/s → nm/ps.
pub fn velocity_from_m_per_s(v: f64) -> f64 {
    v * NM_PER_METRE / PS_PER_SECOND
}

pub fn velocity_to_m_per_s(v: f64) -> f64 {
    v * PS_PER_SECOND / NM_PER_METRE
}

/// eV → meV.
pub fn energy_from_ev(e: f64) -> f64 {
    e * 1e3
}

pub fn energy_to_ev(e: f64) -> f64 {
    e * 1e-3
}

/// Thermal energy k_B·T in meV.
pub fn thermal_energy(temperature: f64) -> f64 {
    K_B * temperature
}
