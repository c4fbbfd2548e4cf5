//! Acoustic-phonon deformation-potential coupling of the dot array.
//!
//! With energy conservation the emission/absorption matrices reduce to an
//! integral over the sphere |q| = Q = E/ħc. The azimuthal integral is done
//! analytically: only |g_y|² depends on φ, through q_y² = q⊥² sin²φ, so
//!
//! ```text
//! ∫dφ |gx|²|gy|² = π β(1 - t²) exp(-β(1 - t²)),   β = q²/4a0,  t = cos θ
//! ```
//!
//! leaving a 1-D quadrature over `t` weighted by |gz(qt)|² cos(q t z_ij).
//! The Lamb-shift matrices need the same angular integral off shell and a
//! principal-value integral over |q|.
//!
//! Coupling strength: |g̃(q)|² = ħD²q / (2ρVc). The crystal volume cancels
//! against the mode density V/(2π)³.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::device::{well_overlap, DeviceParams, MaterialParams};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermiticity_defect, max_abs, toeplitz, toeplitz_defect, CMat,
};
use crate::quadrature::{integrate_vec, Tolerance};
use crate::units::{thermal_energy, HBAR};

/// Bose–Einstein occupation 1/(e^{E/k_BT} - 1); zero at T = 0.
pub fn bose_occupation(energy: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = energy / thermal_energy(temperature);
    1.0 / x.exp_m1()
}

/// An emission (`minus`) / absorption (`plus`) pair of N×N matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair {
    pub minus: CMat,
    pub plus: CMat,
}

impl MatrixPair {
    pub fn zeros(n: usize) -> Self {
        MatrixPair {
            minus: CMat::zeros(n, n),
            plus: CMat::zeros(n, n),
        }
    }

    pub fn get(&self, sign: i8) -> &CMat {
        if sign < 0 {
            &self.minus
        } else {
            &self.plus
        }
    }
}

/// Master-equation input data: Γ^(±) in ps⁻¹ and Δ^(±) in meV.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrices {
    pub gamma: MatrixPair,
    pub delta: MatrixPair,
}

impl CouplingMatrices {
    pub fn new(gamma: MatrixPair, delta: MatrixPair) -> Result<Self> {
        let n = gamma.minus.nrows();
        for (name, m) in [
            ("gamma_minus", &gamma.minus),
            ("gamma_plus", &gamma.plus),
            ("delta_minus", &delta.minus),
            ("delta_plus", &delta.plus),
        ] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidCoupling(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let scale = max_abs(m).max(f64::MIN_POSITIVE);
            if hermiticity_defect(m) > 1e-12 * scale {
                return Err(Error::InvalidCoupling(format!("{name} is not Hermitian")));
            }
        }
        Ok(CouplingMatrices { gamma, delta })
    }

    /// Dissipation only, no Lamb shift.
    pub fn dissipative(gamma: MatrixPair) -> Result<Self> {
        let n = gamma.minus.nrows();
        Self::new(gamma, MatrixPair::zeros(n))
    }

    pub fn num_sites(&self) -> usize {
        self.gamma.minus.nrows()
    }

    pub fn without_lamb_shift(&self) -> Self {
        CouplingMatrices {
            gamma: self.gamma.clone(),
            delta: MatrixPair::zeros(self.num_sites()),
        }
    }

    /// Checks Γ^(±) ⪰ 0, Γ^(-) - Γ^(+) ⪰ 0 and the Toeplitz structure of
    /// all four matrices. Returns the violated properties.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let psd = |m: &CMat| {
            let scale = max_abs(m).max(f64::MIN_POSITIVE);
            hermitian_eigen(m).values[0] >= -1e-10 * scale
        };
        if !psd(&self.gamma.minus) {
            out.push("gamma_minus is not positive semidefinite".into());
        }
        if !psd(&self.gamma.plus) {
            out.push("gamma_plus is not positive semidefinite".into());
        }
        if !psd(&(&self.gamma.minus - &self.gamma.plus)) {
            out.push("gamma_minus - gamma_plus is not positive semidefinite".into());
        }
        for (name, m) in [
            ("gamma_minus", &self.gamma.minus),
            ("gamma_plus", &self.gamma.plus),
            ("delta_minus", &self.delta.minus),
            ("delta_plus", &self.delta.plus),
        ] {
            let scale = max_abs(m).max(f64::MIN_POSITIVE);
            if toeplitz_defect(m) > 1e-12 * scale {
                out.push(format!("{name} is not Toeplitz"));
            }
        }
        out
    }
}

/// Numerical controls for the phonon integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingOptions {
    /// Relative tolerance of the angular (t) quadrature.
    pub angular_rel_tol: f64,
    /// Relative tolerance of the radial principal-value quadrature.
    pub radial_rel_tol: f64,
    /// Radial cutoff in units of q0 = 2π/d.
    pub cutoff_factor: f64,
    /// Maximum relative change allowed when the cutoff is doubled.
    pub cutoff_rel_change: f64,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        CouplingOptions {
            angular_rel_tol: 1e-12,
            radial_rel_tol: 1e-8,
            cutoff_factor: 20.0,
            cutoff_rel_change: 1e-3,
        }
    }
}

/// Break points on t ∈ [0, 1] for the angular integrand at radius `q`:
/// the removable point t = q0/q and a geometric ladder approaching t = 1
/// where the in-plane Gaussian concentrates the weight.
fn angular_breaks(q: f64, a0: f64, q0: f64) -> Vec<f64> {
    let beta = q * q / (4.0 * a0);
    let mut pts = vec![0.0, 1.0];
    if q > 0.0 && q0 / q < 1.0 {
        pts.push(q0 / q);
    }
    // s = 1 - t² ≈ c/β for c = 1/16 .. 256
    let mut cval = 1.0 / 16.0;
    while cval <= 256.0 {
        let s = cval / beta;
        if s < 1.0 {
            pts.push((1.0 - s).sqrt());
        }
        cval *= 2.0;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    pts
}

/// ∫dΩ |gx gy gz|² cos(q t z) on the sphere of radius `q`, one entry per
/// distance in `distances`.
pub fn angular_integral(
    q: f64,
    distances: &[f64],
    a0: f64,
    well_width: f64,
    rel_tol: f64,
) -> Result<Vec<f64>> {
    angular_integral_tol(q, distances, a0, well_width, rel_tol, 1e-300)
}

/// [`angular_integral`] with an absolute error floor.
pub fn angular_integral_tol(
    q: f64,
    distances: &[f64],
    a0: f64,
    well_width: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Vec<f64>> {
    let n = distances.len();
    if q == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let beta = q * q / (4.0 * a0);
    let q0 = 2.0 * PI / well_width;
    let breaks = angular_breaks(q, a0, q0);
    // both halves of t ∈ [-1, 1] contribute equally
    let res = integrate_vec(
        |t, out| {
            let s = 1.0 - t * t;
            let w = 2.0 * PI * beta * s * (-beta * s).exp();
            let gz = well_overlap(q * t, well_width);
            let base = w * gz * gz;
            for (o, z) in out.iter_mut().zip(distances) {
                *o = base * (q * t * z).cos();
            }
        },
        &breaks,
        n,
        Tolerance {
            abs: abs_tol,
            rel: rel_tol,
            max_intervals: 20_000,
        },
    )?;
    Ok(res.value)
}

/// Distances z_k = k·a, k = 0..N-1.
fn lattice_distances(device: &DeviceParams) -> Vec<f64> {
    (0..device.num_dots).map(|k| device.dot_position(k)).collect()
}

/// D²/(8π²ρc²ħ) in ps⁻¹·nm³: Γ = prefactor · Q³ · (n + θ) · ∫dΩ(...).
fn rate_prefactor(mat: &MaterialParams) -> f64 {
    mat.deformation_constant.powi(2)
        / (8.0 * PI * PI * mat.mass_density * mat.sound_velocity.powi(2) * HBAR)
}

/// ħD²/(16π³ρc) in meV·nm³·(meV): Δ = prefactor · P∫dq q³ ∫dΩ(...) (n+θ)/(ħcq - E).
fn shift_prefactor(mat: &MaterialParams) -> f64 {
    HBAR * mat.deformation_constant.powi(2) / (16.0 * PI.powi(3) * mat.mass_density * mat.sound_velocity)
}

/// First rows of Γ^(∓) (emission, absorption) for the given distances.
pub fn gamma_rows(
    device: &DeviceParams,
    mat: &MaterialParams,
    distances: &[f64],
    opts: &CouplingOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    device.check()?;
    mat.check()?;
    let q = device.resonant_wavevector(mat);
    let a0 = device.a0(mat);
    let ang = angular_integral(q, distances, a0, device.well_width, opts.angular_rel_tol)?;
    let n = bose_occupation(device.level_splitting, device.temperature);
    let scale = rate_prefactor(mat) * q.powi(3);
    let minus = ang.iter().map(|v| scale * (n + 1.0) * v).collect();
    let plus = ang.iter().map(|v| scale * n * v).collect();
    Ok((minus, plus))
}

/// Γ^(-) (emission, factor n+1) and Γ^(+) (absorption, factor n) in ps⁻¹.
pub fn gamma_pair(device: &DeviceParams, mat: &MaterialParams) -> Result<MatrixPair> {
    gamma_pair_with(device, mat, &CouplingOptions::default())
}

pub fn gamma_pair_with(
    device: &DeviceParams,
    mat: &MaterialParams,
    opts: &CouplingOptions,
) -> Result<MatrixPair> {
    let (minus, plus) = gamma_rows(device, mat, &lattice_distances(device), opts)?;
    Ok(MatrixPair {
        minus: toeplitz(&minus),
        plus: toeplitz(&plus),
    })
}

/// Absolute error floor for off-shell angular integrals: the relative
/// tolerance times the on-shell z = 0 value.
fn angular_floor(device: &DeviceParams, mat: &MaterialParams, opts: &CouplingOptions) -> Result<f64> {
    let q = device.resonant_wavevector(mat);
    let a = angular_integral(q, &[0.0], device.a0(mat), device.well_width, 1e-6)?;
    Ok(opts.angular_rel_tol * a[0].abs())
}

/// Radial integrand q³ ∫dΩ(...)·(n(ħcq) + θ) for both signs, stacked as
/// `[minus_0..minus_{k}, plus_0..plus_{k}]`.
fn radial_integrand(
    q: f64,
    device: &DeviceParams,
    mat: &MaterialParams,
    distances: &[f64],
    opts: &CouplingOptions,
    floor: f64,
    out: &mut [f64],
) -> Result<()> {
    let k = distances.len();
    if q <= 0.0 {
        out.iter_mut().for_each(|o| *o = 0.0);
        return Ok(());
    }
    let ang = angular_integral_tol(
        q,
        distances,
        device.a0(mat),
        device.well_width,
        opts.angular_rel_tol,
        floor,
    )?;
    let occ = bose_occupation(HBAR * mat.sound_velocity * q, device.temperature);
    let q3 = q.powi(3);
    for (i, a) in ang.iter().enumerate() {
        out[i] = q3 * a * (occ + 1.0);
        out[k + i] = q3 * a * occ;
    }
    Ok(())
}

/// Value of the pole-subtracted (folded) principal-value integrand at
/// offset `s` from the pole: [h(Q+s) - h(Q-s)]/s. Finite as s → 0.
pub fn folded_pv_integrand(
    s: f64,
    device: &DeviceParams,
    mat: &MaterialParams,
    distances: &[f64],
    opts: &CouplingOptions,
) -> Result<Vec<f64>> {
    let pole = device.resonant_wavevector(mat);
    let k = 2 * distances.len();
    let mut hp = vec![0.0; k];
    let mut hm = vec![0.0; k];
    let s = s.max(1e-6 * pole);
    let floor = angular_floor(device, mat, opts)?;
    radial_integrand(pole + s, device, mat, distances, opts, floor, &mut hp)?;
    radial_integrand(pole - s, device, mat, distances, opts, floor, &mut hm)?;
    Ok(hp.iter().zip(&hm).map(|(a, b)| (a - b) / s).collect())
}

/// P∫₀^{q_max} h(q)/(q - Q) dq for all components of the radial integrand.
///
/// The window [Q/2, 3Q/2] around the pole is folded onto s ∈ [0, Q/2] as
/// [h(Q+s) - h(Q-s)]/s, which is regular at s = 0.
fn principal_value(
    device: &DeviceParams,
    mat: &MaterialParams,
    distances: &[f64],
    q_max: f64,
    opts: &CouplingOptions,
) -> Result<Vec<f64>> {
    let pole = device.resonant_wavevector(mat);
    let half = 0.5 * pole;
    if q_max <= pole + half {
        return Err(Error::Quadrature(format!(
            "radial cutoff {q_max} nm^-1 does not clear the pole window around {pole} nm^-1"
        )));
    }
    let k = 2 * distances.len();
    let floor = angular_floor(device, mat, opts)?;
    let failure = std::cell::RefCell::new(None::<Error>);
    let eval = |q: f64, out: &mut [f64]| {
        if let Err(e) = radial_integrand(q, device, mat, distances, opts, floor, out) {
            failure.borrow_mut().get_or_insert(e);
        }
    };
    let tol = Tolerance {
        abs: 1e-300,
        rel: opts.radial_rel_tol,
        max_intervals: 4_000,
    };
    let q0 = device.q0();

    let mut lower_breaks = vec![0.0, pole - half];
    let mut upper_breaks = vec![pole + half, q_max];
    for feature in [q0, 2.0 * q0, 3.0 * q0] {
        if feature < pole - half {
            lower_breaks.push(feature);
        } else if feature > pole + half && feature < q_max {
            upper_breaks.push(feature);
        }
    }
    lower_breaks.sort_by(f64::total_cmp);
    upper_breaks.sort_by(f64::total_cmp);

    let lower = integrate_vec(
        |q, out| {
            eval(q, out);
            out.iter_mut().for_each(|o| *o /= q - pole);
        },
        &lower_breaks,
        k,
        tol,
    )?;
    let upper = integrate_vec(
        |q, out| {
            eval(q, out);
            out.iter_mut().for_each(|o| *o /= q - pole);
        },
        &upper_breaks,
        k,
        tol,
    )?;
    let window = integrate_vec(
        |s, out| {
            let mut below = vec![0.0; k];
            eval(pole + s, out);
            eval(pole - s, &mut below);
            for (o, b) in out.iter_mut().zip(&below) {
                *o = (*o - b) / s;
            }
        },
        &[0.0, half],
        k,
        tol,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((0..k)
        .map(|c| lower.value[c] + upper.value[c] + window.value[c])
        .collect())
}

/// First rows of Δ^(∓) for the given distances at a fixed radial cutoff.
pub fn delta_rows_at_cutoff(
    device: &DeviceParams,
    mat: &MaterialParams,
    distances: &[f64],
    q_max: f64,
    opts: &CouplingOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    device.check()?;
    mat.check()?;
    let pv = principal_value(device, mat, distances, q_max, opts)?;
    // 1/(ħcq - E) = 1/(ħc (q - Q))
    let scale = shift_prefactor(mat) / (HBAR * mat.sound_velocity);
    let k = distances.len();
    let minus = pv[..k].iter().map(|v| scale * v).collect();
    let plus = pv[k..].iter().map(|v| scale * v).collect();
    Ok((minus, plus))
}

/// Result of the cutoff-doubling convergence check.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaResult {
    pub delta: MatrixPair,
    /// max|Δ(2q_max) - Δ(q_max)| / max|Δ(2q_max)|.
    pub cutoff_rel_change: f64,
}

/// Δ^(-) and Δ^(+) (meV) with the cutoff-doubling check.
pub fn delta_pair(device: &DeviceParams, mat: &MaterialParams) -> Result<MatrixPair> {
    Ok(delta_pair_with(device, mat, &CouplingOptions::default())?.delta)
}

pub fn delta_pair_with(
    device: &DeviceParams,
    mat: &MaterialParams,
    opts: &CouplingOptions,
) -> Result<DeltaResult> {
    let distances = lattice_distances(device);
    let q_max = opts.cutoff_factor * device.q0();
    let (m1, p1) = delta_rows_at_cutoff(device, mat, &distances, q_max, opts)?;
    let (m2, p2) = delta_rows_at_cutoff(device, mat, &distances, 2.0 * q_max, opts)?;
    let scale = m2.iter().chain(&p2).fold(0.0f64, |acc, v| acc.max(v.abs()));
    let change = m1
        .iter()
        .zip(&m2)
        .chain(p1.iter().zip(&p2))
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    let rel = if scale > 0.0 { change / scale } else { 0.0 };
    if rel > opts.cutoff_rel_change {
        return Err(Error::Quadrature(format!(
            "Lamb shift changed by {rel:.3e} (relative) when doubling the radial cutoff"
        )));
    }
    Ok(DeltaResult {
        delta: MatrixPair {
            minus: toeplitz(&m2),
            plus: toeplitz(&p2),
        },
        cutoff_rel_change: rel,
    })
}

/// Full coupling data for a device.
pub fn coupling_matrices(device: &DeviceParams, mat: &MaterialParams) -> Result<CouplingMatrices> {
    coupling_matrices_with(device, mat, &CouplingOptions::default())
}

pub fn coupling_matrices_with(
    device: &DeviceParams,
    mat: &MaterialParams,
    opts: &CouplingOptions,
) -> Result<CouplingMatrices> {
    let gamma = gamma_pair_with(device, mat, opts)?;
    let delta = delta_pair_with(device, mat, opts)?.delta;
    CouplingMatrices::new(gamma, delta)
}

/// Total single-dot scattering rate Γ^(-)_11 + Γ^(+)_11 in ps⁻¹.
pub fn single_dot_rate(
    level_splitting: f64,
    well_width: f64,
    temperature: f64,
    mat: &MaterialParams,
) -> Result<f64> {
    let device = DeviceParams {
        num_dots: 1,
        level_splitting,
        well_width,
        dot_spacing: well_width,
        temperature,
    };
    let (minus, plus) = gamma_rows(&device, mat, &[0.0], &CouplingOptions::default())?;
    Ok(minus[0] + plus[0])
}

/// Least-squares fit of Γ_ij/Γ_11 to cos(Q z_ij).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularFit {
    pub gamma_11: f64,
    pub q_eff: f64,
    pub max_residual: f64,
}

fn fit_residual(ratios: &[f64], spacing: f64, q: f64) -> f64 {
    ratios
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, r)| (r - (q * k as f64 * spacing).cos()).powi(2))
        .sum()
}

pub(crate) fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * a.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Fits the effective wavevector of a Toeplitz Γ on a lattice with the
/// given spacing. On a lattice cos(Qka) cannot tell Q from its aliases
/// 2πm/a ± Q, so the fit searches [Q_nom/2, 3Q_nom/2] and prefers the
/// minimiser closest to the nominal wavevector.
pub fn circular_fit(gamma: &CMat, spacing: f64, q_nominal: f64) -> Result<CircularFit> {
    let n = gamma.nrows();
    if n < 2 {
        return Err(Error::Domain("circular fit needs at least two dots".into()));
    }
    let gamma_11 = gamma[(0, 0)].re;
    if gamma_11 <= 0.0 {
        return Err(Error::Domain("circular fit needs a positive diagonal".into()));
    }
    let ratios: Vec<f64> = (0..n).map(|k| gamma[(0, k)].re / gamma_11).collect();

    let q_eff = if n == 2 {
        // one equation, solved exactly; pick the branch nearest q_nominal
        let base = ratios[1].clamp(-1.0, 1.0).acos() / spacing;
        let period = 2.0 * PI / spacing;
        let m = (q_nominal / period).round();
        let candidates = [
            base,
            m * period + base,
            m * period - base,
            (m + 1.0) * period - base,
            (m - 1.0) * period + base,
        ];
        candidates
            .into_iter()
            .filter(|c| *c >= 0.0)
            .min_by(|a, b| (a - q_nominal).abs().total_cmp(&(b - q_nominal).abs()))
            .unwrap_or(base)
    } else {
        let lo = 0.5 * q_nominal;
        let hi = 1.5 * q_nominal;
        let steps = 4000;
        let h = (hi - lo) / steps as f64;
        let grid: Vec<f64> = (0..=steps)
            .map(|k| fit_residual(&ratios, spacing, lo + k as f64 * h))
            .collect();
        let mut minima = Vec::new();
        for k in 0..=steps {
            let left = if k == 0 { f64::INFINITY } else { grid[k - 1] };
            let right = if k == steps { f64::INFINITY } else { grid[k + 1] };
            if grid[k] <= left && grid[k] <= right {
                let q = lo + k as f64 * h;
                let refined = golden_section(
                    |x| fit_residual(&ratios, spacing, x),
                    (q - h).max(lo),
                    (q + h).min(hi),
                    1e-15,
                );
                minima.push((fit_residual(&ratios, spacing, refined), refined));
            }
        }
        let best = minima.iter().fold(f64::INFINITY, |m, (r, _)| m.min(*r));
        minima
            .into_iter()
            .filter(|(r, _)| *r <= best + 1e-12 * (1.0 + best))
            .map(|(_, q)| q)
            .min_by(|a, b| (a - q_nominal).abs().total_cmp(&(b - q_nominal).abs()))
            .unwrap_or(q_nominal)
    };

    let mut max_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let z = i.abs_diff(j) as f64 * spacing;
            let r = (gamma[(i, j)].re / gamma_11 - (q_eff * z).cos()).abs();
            max_residual = max_residual.max(r);
        }
    }
    Ok(CircularFit {
        gamma_11,
        q_eff,
        max_residual,
    })
}

/// Fit of nearest-neighbour Lamb-shift entries Δ_12(a) ≈ A sin(Q a + φ)
/// across a set of spacings. Returns (A, φ) with φ ∈ (-π/2, π/2].
pub fn sine_phase_fit(spacings: &[f64], values: &[f64], q: f64) -> (f64, f64) {
    // linear least squares in (α, β) for α sin(Qa) + β cos(Qa)
    let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&a, &y) in spacings.iter().zip(values) {
        let (s, c) = (q * a).sin_cos();
        ss += s * s;
        sc += s * c;
        cc += c * c;
        ys += y * s;
        yc += y * c;
    }
    let det = ss * cc - sc * sc;
    let alpha = (ys * cc - yc * sc) / det;
    let beta = (yc * ss - ys * sc) / det;
    let amplitude = alpha.signum() * alpha.hypot(beta);
    let phase = (beta / alpha).atan();
    (amplitude, phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaas_device() -> DeviceParams {
        DeviceParams::default()
    }

    #[test]
    fn bose_factor_values() {
        assert_eq!(bose_occupation(5.0, 0.0), 0.0);
        let n = bose_occupation(5.0, 10.0);
        // 1/(exp(5/0.861733) - 1)
        assert_relative_eq!(n, 1.0 / ((5.0f64 / 0.861_733).exp() - 1.0), max_relative = 1e-12);
        assert!((n - 3.03e-3).abs() < 1e-5, "{n}");
        let mut prev = 0.0;
        for t in 1..100 {
            let v = bose_occupation(5.0, t as f64);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn gamma_structure() {
        let dev = gaas_device();
        let mat = MaterialParams::gaas();
        let g = gamma_pair(&dev, &mat).unwrap();
        let c = CouplingMatrices::dissipative(g.clone()).unwrap();
        assert!(c.structural_violations().is_empty(), "{:?}", c.structural_violations());
        for i in 0..dev.num_dots {
            assert_eq!(g.minus[(i, i)], g.minus[(0, 0)]);
        }
        // detailed balance entrywise
        let n = bose_occupation(dev.level_splitting, dev.temperature);
        for i in 0..4 {
            for j in 0..4 {
                let m = g.minus[(i, j)].re;
                if m.abs() > 0.0 {
                    assert_relative_eq!(g.plus[(i, j)].re / m, n / (n + 1.0), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_temperature_kills_absorption() {
        let dev = DeviceParams {
            temperature: 0.0,
            ..gaas_device()
        };
        let g = gamma_pair(&dev, &MaterialParams::gaas()).unwrap();
        assert_eq!(max_abs(&g.plus), 0.0);
    }

    #[test]
    fn cosine_law_holds_for_gaas() {
        let dev = gaas_device();
        let mat = MaterialParams::gaas();
        let g = gamma_pair(&dev, &mat).unwrap();
        let q = dev.resonant_wavevector(&mat);
        assert!((q - 1.49).abs() < 0.01);
        let fit = circular_fit(&g.minus, dev.dot_spacing, q).unwrap();
        assert!(fit.max_residual < 0.1);
        assert!((fit.q_eff / q - 1.0).abs() < 0.02);
        // off-shell angular spread pulls Q_eff slightly below E/ħc
        assert!(fit.q_eff < q);
        for j in 0..4 {
            let ratio = g.minus[(0, j)].re / g.minus[(0, 0)].re;
            assert!((ratio - (q * dev.dot_position(j)).cos()).abs() < 0.12);
        }
    }

    #[test]
    fn circular_fit_recovers_exact_model() {
        let q = 1.3;
        let a = 2.5;
        let row: Vec<f64> = (0..5).map(|k| 0.7 * (q * a * k as f64).cos()).collect();
        let fit = circular_fit(&toeplitz(&row), a, 1.35).unwrap();
        assert_relative_eq!(fit.q_eff, q, epsilon = 1e-9);
        assert!(fit.max_residual < 1e-9);
        assert_relative_eq!(fit.gamma_11, 0.7);
    }

    #[test]
    fn circular_fit_two_dots_is_arccos() {
        let a = 3.0;
        let row = [2.0, 2.0 * 0.4];
        let fit = circular_fit(&toeplitz(&row), a, 0.4).unwrap();
        assert_relative_eq!(fit.q_eff, 0.4f64.acos() / a, epsilon = 1e-14);
        assert!(fit.max_residual < 1e-14);
    }

    #[test]
    fn circular_fit_needs_two_dots() {
        assert!(circular_fit(&toeplitz(&[1.0]), 1.0, 1.0).is_err());
    }

    #[test]
    fn folded_integrand_finite_at_pole() {
        let dev = gaas_device();
        let mat = MaterialParams::gaas();
        let opts = CouplingOptions::default();
        let at_pole = folded_pv_integrand(0.0, &dev, &mat, &[0.0, 6.0], &opts).unwrap();
        let near = folded_pv_integrand(1e-3, &dev, &mat, &[0.0, 6.0], &opts).unwrap();
        for (a, b) in at_pole.iter().zip(&near) {
            assert!(a.is_finite());
            assert!((a - b).abs() <= 1e-2 * b.abs().max(1e-30));
        }
    }

    #[test]
    fn delta_hermitian_toeplitz() {
        let dev = gaas_device();
        let mat = MaterialParams::gaas();
        let res = delta_pair_with(&dev, &mat, &CouplingOptions::default()).unwrap();
        assert!(res.cutoff_rel_change < 1e-3);
        for m in [&res.delta.minus, &res.delta.plus] {
            assert_eq!(hermiticity_defect(m), 0.0);
            assert_eq!(toeplitz_defect(m), 0.0);
        }
    }

    #[test]
    fn rate_falls_past_form_factor_peak() {
        let mat = MaterialParams::gaas();
        let mut prev = f64::INFINITY;
        for k in 0..11 {
            let e = 5.0 + 0.5 * k as f64;
            let r = single_dot_rate(e, 4.0, 10.0, &mat).unwrap();
            assert!(r < prev);
            prev = r;
        }
        let r3 = single_dot_rate(5.0, 3.0, 10.0, &mat).unwrap();
        let r4 = single_dot_rate(5.0, 4.0, 10.0, &mat).unwrap();
        let r5 = single_dot_rate(5.0, 5.0, 10.0, &mat).unwrap();
        assert!(r3 > r4 && r4 > r5, "{r3} {r4} {r5}");
    }

    #[test]
    fn thermal_ratio_is_two_n_plus_one() {
        let mat = MaterialParams::gaas();
        let cold = single_dot_rate(5.0, 4.0, 0.0, &mat).unwrap();
        let warm = single_dot_rate(5.0, 4.0, 10.0, &mat).unwrap();
        let n = bose_occupation(5.0, 10.0);
        assert_relative_eq!(warm / cold, 2.0 * n + 1.0, max_relative = 1e-12);
    }
}
