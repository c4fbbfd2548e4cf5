#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite rule over the given panel edges.
pub fn composite(edges: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(0.5 * (a + b) + 0.5 * (b - a) * xi);
            weights.push(0.5 * (b - a) * wi);
        }
    }
    (nodes, weights)
}

/// Infinite-wall ground-state overlap written straight from the closed
/// form (8π²/(d³qz))·sin(qz d/2)/(q0² - qz²).
pub fn gz_closed_form(qz: f64, d: f64) -> f64 {
    let q0 = 2.0 * PI / d;
    8.0 * PI * PI / (d.powi(3) * qz) * (qz * d / 2.0).sin() / (q0 * q0 - qz * qz)
}

/// Brute 2-D quadrature over polar angle θ ∈ [0, π] and azimuth φ ∈ [0, 2π]
/// of |gx|²|gy|²|gz|² e^{i qz z} on the sphere of radius q.
pub fn brute_angular(q: f64, z: f64, a0: f64, d: f64, refine: usize) -> f64 {
    // θ panels graded geometrically toward both poles
    let mut edges = vec![0.0];
    edges.extend((1..30).rev().map(|k| 0.5 * PI * 0.5f64.powi(k)));
    edges.push(0.5 * PI);
    edges.extend((1..30).map(|k| PI - 0.5 * PI * 0.5f64.powi(k)));
    edges.push(PI);
    let mut fine = Vec::new();
    for w in edges.windows(2) {
        for k in 0..refine {
            fine.push(w[0] + (w[1] - w[0]) * k as f64 / refine as f64);
        }
    }
    fine.push(PI);
    let (th, wth) = composite(&fine, 24);
    let phi_edges: Vec<f64> = (0..=8).map(|k| 2.0 * PI * k as f64 / 8.0).collect();
    let (ph, wph) = composite(&phi_edges, 12);

    let mut acc = C::new(0.0, 0.0);
    for (t, wt) in th.iter().zip(&wth) {
        let (st, ct) = t.sin_cos();
        let qz = q * ct;
        let gz = gz_closed_form(qz, d);
        let phase = C::from_polar(1.0, qz * z);
        for (p, wp) in ph.iter().zip(&wph) {
            let qx = q * st * p.cos();
            let qy = q * st * p.sin();
            let gx2 = (-qx * qx / (4.0 * a0)).exp();
            let gy2 = qy * qy / (4.0 * a0) * (-qy * qy / (4.0 * a0)).exp();
            acc += phase * (gx2 * gy2 * gz * gz * st * wt * wp);
        }
    }
    assert!(acc.im.abs() <= 1e-9 * acc.re.abs().max(1e-300));
    acc.re
}

/// Γ^(-)_{1,k+1} from first principles in SI, converted to ps⁻¹.
pub struct GammaOracle {
    pub e_mev: f64,
    pub d_nm: f64,
    pub a_nm: f64,
    pub t_k: f64,
    pub mass_multiplier: f64,
}

impl GammaOracle {
    pub fn emission_row(&self, n: usize) -> Vec<f64> {
        const MEV: f64 = 1.602_176_634e-22;
        const HBAR_SI: f64 = 0.658_211_9 * MEV * 1e-12;
        const KB_SI: f64 = 0.086_173_3 * MEV;
        let rho = 5300.0;
        let c = 5110.0;
        let dpot = 7.0 * 1e3 * MEV;
        let kinetic = 569.0 * MEV * 1e-18 / self.mass_multiplier;
        let e = self.e_mev * MEV;
        let q = e / (HBAR_SI * c);
        let a0 = e / (4.0 * kinetic);
        let occ = 1.0 / ((e / (KB_SI * self.t_k)).exp() - 1.0);
        // brute angular integral in nm units
        let q_nm = q * 1e-9;
        let a0_nm = a0 * 1e-18;
        (0..n)
            .map(|k| {
                let ang = brute_angular(q_nm, k as f64 * self.a_nm, a0_nm, self.d_nm, 2);
                let rate = dpot * dpot * q.powi(3) * (occ + 1.0) * ang / (8.0 * PI * PI * rho * c * c * HBAR_SI);
                rate * 1e-12
            })
            .collect()
    }
}

/// Dense 2^N representation of σⱼ^± and σⱼᶻ/2 via Kronecker products.
pub fn site_op(n: usize, j: usize, kind: char) -> DMatrix<C> {
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let local = match kind {
        '+' => DMatrix::from_row_slice(2, 2, &[zero, zero, one, zero]),
        '-' => DMatrix::from_row_slice(2, 2, &[zero, one, zero, zero]),
        _ => DMatrix::from_row_slice(2, 2, &[C::new(-0.5, 0.0), zero, zero, C::new(0.5, 0.0)]),
    };
    let id = DMatrix::<C>::identity(2, 2);
    // site j is bit j of the basis index: site 0 is the rightmost factor
    let mut m = DMatrix::<C>::identity(1, 1);
    for s in (0..n).rev() {
        m = m.kronecker(if s == j { &local } else { &id });
    }
    m
}

pub fn momentum_op(n: usize, kind: char, q: f64) -> DMatrix<C> {
    let d = 1 << n;
    let mut m = DMatrix::<C>::zeros(d, d);
    for j in 0..n {
        m += site_op(n, j, kind) * C::from_polar(1.0, q * (j + 1) as f64);
    }
    m
}

/// Dimension of the complex Lie algebra generated by `gens` (dense matrices),
/// by breadth-first bracketing and Gram–Schmidt on vectorised matrices.
pub fn dense_lie_dimension(gens: &[DMatrix<C>], cap: usize) -> usize {
    let mut basis: Vec<DMatrix<C>> = Vec::new();
    let add = |m: &DMatrix<C>, basis: &mut Vec<DMatrix<C>>| -> bool {
        let mut v = m.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum::<C>();
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-9 * m.norm().max(1e-300) && norm > 1e-12 {
            basis.push(v / C::new(norm, 0.0));
            true
        } else {
            false
        }
    };
    for g in gens {
        add(g, &mut basis);
    }
    let mut frontier = 0;
    while frontier < basis.len() && basis.len() <= cap {
        let x = basis[frontier].clone();
        let snapshot: Vec<DMatrix<C>> = basis.clone();
        for y in &snapshot {
            let br = &x * y - y * &x;
            add(&br, &mut basis);
        }
        frontier += 1;
    }
    basis.len()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalised random complex vector, components uniform in the unit square.
pub fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> nalgebra::DVector<C> {
    let v = nalgebra::DVector::from_fn(dim, |_, _| {
        C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let n = v.norm();
    v / C::new(n, 0.0)
}
