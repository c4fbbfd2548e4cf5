//! Candidate encodings: dimer pair-product states, the symmetric Sᶻ = 0
//! state, and closed-form rate factors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, ONE};
use crate::operators::{basis_state, check_sites, dim, is_excited, total, Spin};
use crate::device::{DeviceParams, MaterialParams};
use crate::phonon::{gamma_pair, golden_section, CouplingMatrices};

/// A dimer partition with a singlet (0) / triplet (1) signature per pair.
///
/// Sites are 0-based internally. Pairs are kept sorted within and across,
/// with the signature permuted alongside.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimerSpec {
    num_sites: usize,
    pairs: Vec<(usize, usize)>,
    signature: Vec<u8>,
}

impl DimerSpec {
    pub fn new(num_sites: usize, pairs: &[(usize, usize)], signature: &[u8]) -> Result<Self> {
        if num_sites == 0 || !num_sites.is_multiple_of(2) {
            return Err(Error::InvalidPartition(format!(
                "dimer partitions need an even number of sites, got {num_sites}"
            )));
        }
        if pairs.len() != num_sites / 2 {
            return Err(Error::InvalidPartition(format!(
                "{} pairs cannot cover {num_sites} sites",
                pairs.len()
            )));
        }
        if signature.len() != pairs.len() {
            return Err(Error::InvalidPartition(format!(
                "signature has {} entries for {} pairs",
                signature.len(),
                pairs.len()
            )));
        }
        if let Some(g) = signature.iter().find(|&&g| g > 1) {
            return Err(Error::InvalidPartition(format!("signature entry {g} is not 0 or 1")));
        }
        let mut seen = vec![false; num_sites];
        for &(i, j) in pairs {
            for s in [i, j] {
                if s >= num_sites {
                    return Err(Error::InvalidPartition(format!(
                        "site {s} outside 0..{num_sites}"
                    )));
                }
                if seen[s] {
                    return Err(Error::InvalidPartition(format!("site {s} appears twice")));
                }
                seen[s] = true;
            }
        }
        let mut tagged: Vec<((usize, usize), u8)> = pairs
            .iter()
            .map(|&(i, j)| if i < j { (i, j) } else { (j, i) })
            .zip(signature.iter().copied())
            .collect();
        tagged.sort();
        Ok(DimerSpec {
            num_sites,
            pairs: tagged.iter().map(|t| t.0).collect(),
            signature: tagged.iter().map(|t| t.1).collect(),
        })
    }

    /// Same as [`DimerSpec::new`] with sites numbered from 1.
    pub fn from_one_based(num_sites: usize, pairs: &[(usize, usize)], signature: &[u8]) -> Result<Self> {
        if pairs.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::InvalidPartition("one-based sites start at 1".into()));
        }
        let shifted: Vec<_> = pairs.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
        Self::new(num_sites, &shifted, signature)
    }

    /// Nearest-neighbour pairing {(1,2), (3,4), ...} with all singlets.
    pub fn adjacent_singlets(num_sites: usize) -> Result<Self> {
        let pairs: Vec<_> = (0..num_sites / 2).map(|p| (2 * p, 2 * p + 1)).collect();
        Self::new(num_sites, &pairs, &vec![0; pairs.len()])
    }

    /// Pairs (i, i + N/2) with a uniform signature.
    pub fn antipodal(num_sites: usize, gamma: u8) -> Result<Self> {
        let half = num_sites / 2;
        let pairs: Vec<_> = (0..half).map(|i| (i, i + half)).collect();
        Self::new(num_sites, &pairs, &vec![gamma; half])
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn signature(&self) -> &[u8] {
        &self.signature
    }

    pub fn with_signature(&self, signature: &[u8]) -> Result<Self> {
        Self::new(self.num_sites, &self.pairs, signature)
    }
}

impl fmt::Display for DimerSpec {
    /// One-based, e.g. `(1,2)s(3,4)t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(i, j), &g) in self.pairs.iter().zip(&self.signature) {
            write!(f, "({},{}){}", i + 1, j + 1, if g == 0 { 's' } else { 't' })?;
        }
        Ok(())
    }
}

/// ⊗ over pairs of (|0ᵢ1ⱼ⟩ - (-1)^γ |1ᵢ0ⱼ⟩)/√2.
pub fn dimer_state(spec: &DimerSpec) -> Result<CVec> {
    let n = spec.num_sites;
    check_sites(n)?;
    let amp = (0.5f64).powf(spec.pairs.len() as f64 / 2.0);
    let mut psi = CVec::zeros(dim(n));
    'basis: for b in 0..dim(n) {
        let mut a = c(amp);
        for (&(i, j), &g) in spec.pairs.iter().zip(&spec.signature) {
            match (is_excited(b, i), is_excited(b, j)) {
                (false, true) => {}
                (true, false) => {
                    if g == 0 {
                        a = -a;
                    }
                }
                _ => continue 'basis,
            }
        }
        psi[b] = a;
    }
    Ok(psi)
}

fn apply_x(psi: &mut CVec, site: usize) {
    for b in 0..psi.len() {
        if !is_excited(b, site) {
            psi.swap_rows(b, b | 1 << site);
        }
    }
}

fn apply_hadamard(psi: &mut CVec, site: usize) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..psi.len() {
        if !is_excited(b, site) {
            let b1 = b | 1 << site;
            let (a0, a1) = (psi[b], psi[b1]);
            psi[b] = (a0 + a1) * r;
            psi[b1] = (a0 - a1) * r;
        }
    }
}

fn apply_cnot(psi: &mut CVec, control: usize, target: usize) {
    for b in 0..psi.len() {
        if is_excited(b, control) && !is_excited(b, target) {
            psi.swap_rows(b, b | 1 << target);
        }
    }
}

/// Builds the dimer state with a gate sequence: per pair (l, m), prepare
/// |γ+1 mod 2⟩_l |1⟩_m, apply a Hadamard on l, then CNOT l → m.
pub fn synthesize_dimer(spec: &DimerSpec) -> Result<CVec> {
    let n = spec.num_sites;
    check_sites(n)?;
    let mut psi = basis_state(n, 0);
    for (&(l, m), &g) in spec.pairs.iter().zip(&spec.signature) {
        if (g + 1) % 2 == 1 {
            apply_x(&mut psi, l);
        }
        apply_x(&mut psi, m);
    }
    for &(l, m) in &spec.pairs {
        apply_hadamard(&mut psi, l);
        apply_cnot(&mut psi, l, m);
    }
    Ok(psi)
}

/// Normalised (S⁺)^{N/2}|0…0⟩.
pub fn symmetric_state(num_sites: usize) -> Result<CVec> {
    if num_sites == 0 || !num_sites.is_multiple_of(2) {
        return Err(Error::InvalidState(format!(
            "symmetric Sz = 0 state needs an even number of sites, got {num_sites}"
        )));
    }
    check_sites(num_sites)?;
    let raise = total(num_sites, Spin::Raise);
    let mut psi = basis_state(num_sites, 0);
    for _ in 0..num_sites / 2 {
        psi = &raise * psi;
    }
    let norm = psi.norm();
    Ok(psi / c(norm))
}

/// All perfect matchings of `0..n`, in canonical order.
pub fn dimer_partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn recurse(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return;
        };
        for k in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let partner = remaining.remove(k);
            acc.push((first, partner));
            recurse(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        let sites: Vec<usize> = (0..n).collect();
        recurse(&sites, &mut Vec::new(), &mut out);
    }
    out
}

/// Every (partition, signature) pair for `n` sites.
pub fn all_dimer_specs(n: usize) -> Result<Vec<DimerSpec>> {
    let mut out = Vec::new();
    for pairs in dimer_partitions(n) {
        let k = pairs.len();
        for mask in 0..1u32 << k {
            let sig: Vec<u8> = (0..k).map(|p| (mask >> p & 1) as u8).collect();
            out.push(DimerSpec::new(n, &pairs, &sig)?);
        }
    }
    Ok(out)
}

/// Encoded states with a closed-form rate factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodedState {
    Symmetric,
    Dimer(DimerSpec),
}

impl EncodedState {
    pub fn vector(&self, n: usize) -> Result<CVec> {
        match self {
            EncodedState::Symmetric => symmetric_state(n),
            EncodedState::Dimer(spec) if spec.num_sites() == n => dimer_state(spec),
            EncodedState::Dimer(spec) => Err(Error::InvalidPartition(format!(
                "partition for {} sites used with {n}",
                spec.num_sites()
            ))),
        }
    }
}

impl fmt::Display for EncodedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodedState::Symmetric => write!(f, "sym"),
            EncodedState::Dimer(spec) => write!(f, "{spec}"),
        }
    }
}

/// Correlation factor f with τ₁⁻¹ = f·Γ₀N/2, from a normalised rate matrix
/// (unit diagonal).
pub fn f_factor(gamma_tilde: &CMat, state: &EncodedState) -> Result<f64> {
    let n = gamma_tilde.nrows();
    if n < 2 || gamma_tilde.ncols() != n {
        return Err(Error::Domain("normalised rate matrix must be square with N ≥ 2".into()));
    }
    if (0..n).any(|i| (gamma_tilde[(i, i)] - ONE).norm() > 1e-10) {
        return Err(Error::Domain("normalised rate matrix must have unit diagonal".into()));
    }
    match state {
        EncodedState::Symmetric => {
            let mut s = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    s += gamma_tilde[(i, j)].re;
                }
            }
            Ok(1.0 + s / (n as f64 - 1.0))
        }
        EncodedState::Dimer(spec) => {
            if spec.num_sites() != n {
                return Err(Error::InvalidPartition(format!(
                    "partition for {} sites used with a {n}x{n} matrix",
                    spec.num_sites()
                )));
            }
            let s: f64 = spec
                .pairs()
                .iter()
                .zip(spec.signature())
                .map(|(&(i, j), &g)| {
                    let sign = if g == 0 { 1.0 } else { -1.0 };
                    sign * gamma_tilde[(i, j)].re
                })
                .sum();
            Ok(1.0 - 2.0 / n as f64 * s)
        }
    }
}

/// τ₁⁻¹ = Σ_η f(Γ^(η)/Γ^(η)_11)·Γ^(η)_11·N/2 for an encoded state.
pub fn rate_from_factors(coupling: &CouplingMatrices, state: &EncodedState) -> Result<f64> {
    let n = coupling.num_sites();
    let mut total_rate = 0.0;
    for sign in [-1i8, 1] {
        let g = coupling.gamma.get(sign);
        let g0 = g[(0, 0)].re;
        if g0 == 0.0 {
            continue;
        }
        let tilde = g / c(g0);
        total_rate += f_factor(&tilde, state)? * g0 * n as f64 / 2.0;
    }
    Ok(total_rate)
}

/// Spacing near 2πn/Q (n = `order` ≥ 1) where τ₁⁻¹ of the adjacent-singlet
/// state is smallest. The minimum sits at 2πn/Q_eff rather than the nominal
/// value; the search covers ±5% of 2πn/Q, cut off at the well width.
pub fn magic_spacing(device: &DeviceParams, mat: &MaterialParams, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::Domain("magic spacing order must be at least 1".into()));
    }
    device.check()?;
    mat.check()?;
    let nominal = 2.0 * std::f64::consts::PI * order as f64 / device.resonant_wavevector(mat);
    let state = EncodedState::Dimer(DimerSpec::adjacent_singlets(device.num_dots)?);
    let failure = std::cell::RefCell::new(None::<Error>);
    let rate = |a: f64| -> f64 {
        let eval = || -> Result<f64> {
            let g = gamma_pair(&device.with_spacing(a), mat)?;
            rate_from_factors(&CouplingMatrices::dissipative(g)?, &state)
        };
        eval().unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::INFINITY
        })
    };
    let lower = (0.95 * nominal).max(device.well_width);
    let upper = 1.05 * nominal;
    if lower >= upper {
        return Err(Error::Domain(format!(
            "magic spacing of order {order} ({nominal:.4} nm) lies below the well width"
        )));
    }
    let best = golden_section(rate, lower, upper, 1e-9);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Spacings of the three reference cases: C at the first magic spacing not
/// below the well width, B
/// half a period beyond it (rate maximum) and A at 0.75·C, moved up by
/// whole periods 2π/Q until it clears the well width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacingPresets {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SpacingPresets {
    pub fn labelled(&self) -> [(&'static str, f64); 3] {
        [("A", self.a), ("B", self.b), ("C", self.c)]
    }
}

pub fn spacing_presets(device: &DeviceParams, mat: &MaterialParams) -> Result<SpacingPresets> {
    let period = 2.0 * std::f64::consts::PI / device.resonant_wavevector(mat);
    let order = ((device.well_width / period).ceil() as usize).max(1);
    let c_spacing = magic_spacing(device, mat, order)?;
    let mut a_spacing = 0.75 * c_spacing;
    while a_spacing < device.well_width {
        a_spacing += period;
    }
    Ok(SpacingPresets {
        a: a_spacing,
        b: c_spacing + 0.5 * period,
        c: c_spacing,
    })
}

/// |⟨a|b⟩|, the phase-insensitive comparison used for synthesised states.
pub fn state_overlap(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).norm()
}
