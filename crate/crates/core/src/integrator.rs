//! Dormand–Prince 5(4) with PI step-size control for dense complex
//! matrix ODEs `dy/dt = f(t, y)`.

use crate::error::{Error, Result};
use crate::linalg::CMat;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Steps below `min_step_fraction · span` count as underflow.
    pub min_step_fraction: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            min_step_fraction: 1e-14,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy(y: &CMat, h: f64, terms: &[(f64, &CMat)]) -> CMat {
    let mut out = y.clone();
    for (w, k) in terms {
        if *w != 0.0 {
            out.zip_apply(*k, |o, kv| *o += kv * (h * w));
        }
    }
    out
}

fn error_norm(err: &CMat, y0: &CMat, y1: &CMat, ctl: &StepControl) -> f64 {
    let mut acc = 0.0;
    for ((e, a), b) in err.iter().zip(y0.iter()).zip(y1.iter()) {
        let sc = ctl.abs_tol + ctl.rel_tol * a.norm().max(b.norm());
        acc += (e.norm() / sc).powi(2);
    }
    (acc / err.len() as f64).sqrt()
}

/// Integrates from `times[0]` through every entry of `times` (strictly
/// increasing), calling `observe(t, y)` at each. `post_step` may project
/// the state after every accepted step.
pub fn integrate<F, P, O>(
    rhs: F,
    y0: CMat,
    times: &[f64],
    ctl: &StepControl,
    mut post_step: P,
    mut observe: O,
) -> Result<StepStats>
where
    F: Fn(f64, &CMat) -> CMat,
    P: FnMut(&mut CMat) -> Result<()>,
    O: FnMut(f64, &CMat) -> Result<()>,
{
    let mut stats = StepStats::default();
    let Some(&t_start) = times.first() else {
        return Ok(stats);
    };
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Integrator("output times must be strictly increasing".into()));
    }
    let span = times.last().unwrap() - t_start;
    let h_min = ctl.min_step_fraction * span.max(f64::MIN_POSITIVE);

    let mut t = t_start;
    let mut y = y0;
    observe(t, &y)?;
    let mut k1 = rhs(t, &y);

    // initial step from the derivative scale
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let dscale = k1.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let mut h = if dscale > 0.0 {
        0.01 * (ctl.abs_tol + ctl.rel_tol * scale).powf(0.2) * scale.max(1.0) / dscale
    } else {
        span
    };
    h = h.min(span.max(f64::MIN_POSITIVE));
    let mut err_prev: f64 = 1e-4;

    for &target in &times[1..] {
        while t < target {
            if stats.accepted + stats.rejected >= ctl.max_steps {
                return Err(Error::Integrator(format!(
                    "step budget of {} exhausted at t = {t}",
                    ctl.max_steps
                )));
            }
            let last = h >= target - t;
            let step = if last { target - t } else { h };

            let k2 = rhs(t + C2 * step, &axpy(&y, step, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * step, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(
                t + C4 * step,
                &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * step,
                &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + step,
                &axpy(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                step,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = rhs(t + step, &y_new);
            let err = axpy(
                &CMat::zeros(y.nrows(), y.ncols()),
                step,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let en = error_norm(&err, &y, &y_new, ctl);
            if !en.is_finite() {
                return Err(Error::Integrator(format!("non-finite state at t = {t}")));
            }

            if en <= 1.0 {
                stats.accepted += 1;
                t = if last { target } else { t + step };
                y = y_new;
                post_step(&mut y)?;
                k1 = rhs(t, &y);
                let en = en.max(1e-10);
                let factor = 0.9 * en.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
                if !last || step >= h {
                    h = step * factor.clamp(0.2, 5.0);
                }
                err_prev = en;
            } else {
                stats.rejected += 1;
                h = step * (0.9 * en.powf(-0.2)).max(0.2);
            }
            if h < h_min && t < target {
                return Err(Error::Integrator(format!(
                    "step size underflow ({h:.3e} ps) at t = {t}"
                )));
            }
        }
        observe(t, &y)?;
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, C64};

    #[test]
    fn exponential_decay() {
        let y0 = CMat::from_element(1, 1, c(1.0));
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let mut out = Vec::new();
        integrate(
            |_, y| y * c(-1.3),
            y0,
            &times,
            &StepControl::default(),
            |_| Ok(()),
            |t, y| {
                out.push((t, y[(0, 0)].re));
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(out.len(), times.len());
        for (t, v) in out {
            assert!((v - (-1.3 * t).exp()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn rotation_keeps_modulus() {
        let y0 = CMat::from_element(1, 1, c(1.0));
        let omega = 7.6;
        let mut last = C64::new(0.0, 0.0);
        integrate(
            |_, y| y * C64::new(0.0, -omega),
            y0,
            &[0.0, 100.0],
            &StepControl::default(),
            |_| Ok(()),
            |_, y| {
                last = y[(0, 0)];
                Ok(())
            },
        )
        .unwrap();
        let exact = C64::from_polar(1.0, -omega * 100.0);
        assert!((last - exact).norm() < 1e-5);
    }

    #[test]
    fn rejects_unsorted_times() {
        let y0 = CMat::from_element(1, 1, c(1.0));
        let r = integrate(|_, y| y.clone(), y0, &[0.0, 2.0, 1.0], &StepControl::default(), |_| Ok(()), |_, _| Ok(()));
        assert!(matches!(r, Err(Error::Integrator(_))));
    }

    #[test]
    fn reports_underflow() {
        let y0 = CMat::from_element(1, 1, c(1.0));
        // blows up at t = 1
        let ctl = StepControl {
            min_step_fraction: 1e-10,
            ..StepControl::default()
        };
        let r = integrate(|_, y| y * y * y[(0, 0)] * c(0.5), y0, &[0.0, 2.0], &ctl, |_| Ok(()), |_, _| Ok(()));
        assert!(r.is_err());
    }
}
