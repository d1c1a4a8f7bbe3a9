//! Adaptive Dormand–Prince 5(4) integrator for complex linear systems.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Local error target per step, applied to every component as
    /// `tol·(1 + |y|)` in the max norm.
    pub tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            initial_step: 1e-4,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0`, calling `observe(t, y)` at `t0` and
/// at each requested output time (which must be increasing and ≥ `t0`).
pub fn integrate(
    mut f: impl FnMut(f64, &[C64], &mut [C64]),
    t0: f64,
    y0: &[C64],
    outputs: &[f64],
    opts: &OdeOptions,
    mut observe: impl FnMut(f64, &[C64]),
) -> Result<OdeStats> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut k = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    let mut ynew = vec![C64::new(0.0, 0.0); n];
    let mut t = t0;
    let mut h = opts.initial_step;
    let mut stats = OdeStats::default();

    f(t, &y, &mut k[0]);
    for &target in outputs {
        if target < t - 1e-12 {
            return Err(Error::Precondition(format!(
                "output times must be increasing (got {target} after {t})"
            )));
        }
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::IntegratorDivergence {
                    time: t,
                    reason: format!("step budget of {} exhausted", opts.max_steps),
                });
            }
            let last = target - t <= h * 1.0001;
            let step = if last { target - t } else { h };

            stage(&mut tmp, &y, step, &[(A21, &k[0])]);
            f(t + C2 * step, &tmp, &mut k[1]);
            stage(&mut tmp, &y, step, &[(A31, &k[0]), (A32, &k[1])]);
            f(t + C3 * step, &tmp, &mut k[2]);
            stage(&mut tmp, &y, step, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
            f(t + C4 * step, &tmp, &mut k[3]);
            stage(
                &mut tmp,
                &y,
                step,
                &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])],
            );
            f(t + C5 * step, &tmp, &mut k[4]);
            stage(
                &mut tmp,
                &y,
                step,
                &[
                    (A61, &k[0]),
                    (A62, &k[1]),
                    (A63, &k[2]),
                    (A64, &k[3]),
                    (A65, &k[4]),
                ],
            );
            f(t + step, &tmp, &mut k[5]);
            stage(
                &mut ynew,
                &y,
                step,
                &[
                    (B1, &k[0]),
                    (B3, &k[2]),
                    (B4, &k[3]),
                    (B5, &k[4]),
                    (B6, &k[5]),
                ],
            );
            f(t + step, &ynew, &mut k[6]);

            let mut err: f64 = 0.0;
            for i in 0..n {
                let e = step
                    * (E1 * k[0][i]
                        + E3 * k[2][i]
                        + E4 * k[3][i]
                        + E5 * k[4][i]
                        + E6 * k[5][i]
                        + E7 * k[6][i]);
                let scale = opts.tol * (1.0 + y[i].norm().max(ynew[i].norm()));
                err = err.max(e.norm() / scale);
            }
            if !err.is_finite() {
                return Err(Error::IntegratorDivergence {
                    time: t,
                    reason: "non-finite state".into(),
                });
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut ynew);
                k.swap(0, 6);
                stats.accepted += 1;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if !last || grow < 1.0 {
                    h = step * grow;
                }
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::IntegratorDivergence {
                    time: t,
                    reason: "step size underflow".into(),
                });
            }
        }
        observe(t, &y);
    }
    Ok(stats)
}

fn stage(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &Vec<C64>)]) {
    out.copy_from_slice(y);
    for (a, k) in terms {
        let s = h * a;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += s * ki;
        }
    }
}
