//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs, rel·‖I‖∞)` or the rounding level of the
//! panel sums. The estimate on each interval
//! is the difference between the 15-point Kronrod and embedded 7-point Gauss
//! rules, i.e. the change between two refinement levels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 20_000,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Vec<f64>,
    pub error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &F, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> Panel
where
    F: Fn(f64, &mut [f64]),
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];

    f(centre, buf);
    for c in 0..dim {
        k[c] += WGK[7] * buf[c];
        g[c] += WG[3] * buf[c];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        for x in [centre - dx, centre + dx] {
            f(x, buf);
            for c in 0..dim {
                k[c] += WGK[j] * buf[c];
                if j % 2 == 1 {
                    g[c] += WG[j / 2] * buf[c];
                }
            }
        }
    }
    let mut error: f64 = 0.0;
    for c in 0..dim {
        k[c] *= half;
        g[c] *= half;
        error = error.max((k[c] - g[c]).abs());
    }
    Panel {
        a,
        b,
        value: k,
        error,
    }
}

/// Integrates `f` over `[points[0], points[last]]`, splitting first at every
/// interior point. `f(x, out)` writes `dim` components into `out`.
pub fn integrate_vec<F>(f: F, points: &[f64], dim: usize, tol: Tolerance) -> Result<QuadResult>
where
    F: Fn(f64, &mut [f64]),
{
    if points.len() < 2 {
        return Err(Error::Quadrature("need at least two break points".into()));
    }
    let mut buf = vec![0.0; dim];
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&f, w[0], w[1], dim, &mut buf));
        } else if w[1] < w[0] {
            return Err(Error::Quadrature("break points must be non-decreasing".into()));
        }
    }
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for p in heap.iter() {
            for c in 0..dim {
                total[c] += p.value[c];
            }
            err += p.error;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // panel sums cannot be resolved below rounding of their magnitudes
        let rounding: f64 = heap
            .iter()
            .map(|p| p.value.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .sum::<f64>()
            * 50.0
            * f64::EPSILON;
        let target = tol.abs.max(tol.rel * scale).max(rounding);
        if err <= target || heap.is_empty() {
            return Ok(QuadResult {
                value: total,
                error: err,
                intervals: heap.len(),
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:.3e} above target {target:.3e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Quadrature(format!(
                "interval [{}, {}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        heap.push(kronrod(&f, worst.a, mid, dim, &mut buf));
        heap.push(kronrod(&f, mid, worst.b, dim, &mut buf));
    }
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_vec(|x, out| out[0] = f(x), &[a, b], 1, tol)?;
    Ok((r.value[0], r.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::default()).unwrap();
        let exact = (2f64.powi(6) - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn sharp_peak() {
        let beta = 1e4;
        let (v, _) = integrate(|x| (-beta * x * x).exp(), -1.0, 1.0, Tolerance::relative(1e-12)).unwrap();
        assert!((v - (PI / beta).sqrt()).abs() < 1e-12 * v);
    }

    #[test]
    fn vector_components_share_panels() {
        let r = integrate_vec(
            |x, out| {
                out[0] = x.cos();
                out[1] = (3.0 * x).sin();
            },
            &[0.0, 1.0, PI],
            2,
            Tolerance::default(),
        )
        .unwrap();
        assert!(r.value[0].abs() < 1e-12);
        assert!((r.value[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-14,
            max_intervals: 4,
        };
        let r = integrate(|x| (50.0 * x).sin().abs(), 0.0, 10.0, tol);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }
}
