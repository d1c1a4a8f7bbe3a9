//! Frequency-resolved emission amplitudes as functions of a photon detuning.

use num_complex::Complex64 as C64;

use super::residue::{residue_sum_with, Horizon, Poly, DEFAULT_DEGENERACY_TOL, MAX_POLES};
use crate::error::{Error, Result};

/// Imaginary parts closer to zero than this count as undamped.
const UNDAMPED: f64 = 1e-12;

/// Smallest pole separation, relative to the pole spread, at which partial
/// fractions are trusted.
const PARTIAL_FRACTION_SEPARATION: f64 = 1e-4;

/// Fixed-capacity list of complex poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poles {
    buf: [C64; 4],
    len: usize,
}

impl Poles {
    pub fn new(poles: &[C64]) -> Self {
        assert!(poles.len() <= 4, "at most four poles per group");
        let mut buf = [C64::new(0.0, 0.0); 4];
        buf[..poles.len()].copy_from_slice(poles);
        Self {
            buf,
            len: poles.len(),
        }
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.buf[..self.len]
    }
}

/// Amplitude `Σ Res N_x(z)e^{-izt} / (Π(z − x − a_j) Π(z − b_k))` of one
/// emission channel, where `x` is the photon detuning.
///
/// The `a_j` are offsets of poles that move with the photon frequency, the
/// `b_k` are fixed system poles, and the numerator may drift linearly with
/// `x`. The density is `prefactor·|amplitude|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralKernel {
    pub prefactor: f64,
    pub numerator: Poly,
    pub drift: C64,
    pub moving: Poles,
    pub fixed: Poles,
    pub horizon: Horizon,
    pub tol: f64,
}

impl SpectralKernel {
    /// Kernel with the photon itself as the only moving pole.
    pub fn photon(prefactor: f64, numerator: Poly, fixed: &[C64], horizon: Horizon) -> Self {
        Self {
            prefactor,
            numerator,
            drift: C64::new(0.0, 0.0),
            moving: Poles::new(&[C64::new(0.0, 0.0)]),
            fixed: Poles::new(fixed),
            horizon,
            tol: DEFAULT_DEGENERACY_TOL,
        }
    }

    pub fn numerator_at(&self, x: f64) -> Poly {
        self.numerator.shifted(self.drift * x)
    }

    /// Splits the amplitude at `x` into `(moving, fixed)` with
    /// `amplitude = moving·e^{-ixt} + fixed`. In the steady state only the
    /// undamped moving residues survive and `fixed` is zero.
    pub fn tones(&self, x: f64) -> (C64, C64) {
        let numer = self.numerator_at(x);
        let mut moving = [C64::new(0.0, 0.0); MAX_POLES];
        let nm = self.moving.len;
        for (slot, a) in moving.iter_mut().zip(self.moving.as_slice()) {
            *slot = x + a;
        }
        let fixed = self.fixed.as_slice();
        match self.horizon {
            Horizon::At(t) => {
                let m = residue_sum_with(&numer, &moving[..nm], fixed, t, x, self.tol);
                let f = residue_sum_with(&numer, fixed, &moving[..nm], t, 0.0, self.tol);
                (m, f)
            }
            Horizon::Steady => {
                let mut live = [C64::new(0.0, 0.0); MAX_POLES];
                let mut spect = [C64::new(0.0, 0.0); MAX_POLES];
                let (mut nl, mut ns) = (0, 0);
                for (p, a) in moving[..nm].iter().zip(self.moving.as_slice()) {
                    if a.im.abs() <= UNDAMPED {
                        live[nl] = *p;
                        nl += 1;
                    } else {
                        spect[ns] = *p;
                        ns += 1;
                    }
                }
                for b in fixed {
                    spect[ns] = *b;
                    ns += 1;
                }
                let m = residue_sum_with(&numer, &live[..nl], &spect[..ns], 0.0, 0.0, self.tol);
                (m, C64::new(0.0, 0.0))
            }
        }
    }

    pub fn amplitude(&self, x: f64) -> C64 {
        let (m, f) = self.tones(x);
        match self.horizon {
            Horizon::At(t) => m * (-C64::i() * x * t).exp() + f,
            Horizon::Steady => m,
        }
    }

    /// Probability density at detuning `x`.
    pub fn density(&self, x: f64) -> f64 {
        if self.prefactor == 0.0 {
            return 0.0;
        }
        self.prefactor * self.amplitude(x).norm_sqr()
    }

    /// Detunings where a moving pole passes closest to a fixed pole, with the
    /// distance of closest approach. These are the peaks of the density.
    pub fn hints(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for a in self.moving.as_slice() {
            for b in self.fixed.as_slice() {
                let d = b - a;
                out.push((d.re, d.im.abs()));
            }
        }
        out
    }

    /// Closed-form `∫ density dx` for a kernel whose only moving pole is the
    /// photon itself.
    ///
    /// Writing the amplitude as `Σ r_k (e^{-ixt} − e^{-ib_k t})/(x − b_k)`
    /// makes it the Fourier transform of a sum of exponentials on `[0, t]`,
    /// so Parseval gives a finite double sum over the fixed poles. Returns
    /// `None` when the fixed poles are too close for the partial fractions to
    /// be accurate or when the steady state does not exist.
    pub fn exact_integral(&self) -> Option<f64> {
        let moving = self.moving.as_slice();
        if moving.len() != 1 || moving[0].norm() != 0.0 || self.drift.norm() != 0.0 {
            return None;
        }
        let b = self.fixed.as_slice();
        let degree = self.numerator.coeffs.iter().rposition(|c| c.norm() != 0.0);
        let Some(degree) = degree else {
            return Some(0.0);
        };
        if b.is_empty() || degree >= b.len() {
            return None;
        }
        let mut spread = b.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
        let mut closest = f64::INFINITY;
        for (j, p) in b.iter().enumerate() {
            for q in &b[j + 1..] {
                spread = spread.max((p - q).norm());
                closest = closest.min((p - q).norm());
            }
        }
        if closest < PARTIAL_FRACTION_SEPARATION * spread {
            return None;
        }
        let r: Vec<C64> = b
            .iter()
            .enumerate()
            .map(|(k, bk)| {
                let denom = b
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .fold(C64::new(1.0, 0.0), |acc, (_, bj)| acc * (bk - bj));
                self.numerator.eval(*bk) / denom
            })
            .collect();
        let mut sum = C64::new(0.0, 0.0);
        for (j, bj) in b.iter().enumerate() {
            for (k, bk) in b.iter().enumerate() {
                let w = bj - bk.conj();
                let window = match self.horizon {
                    Horizon::Steady => {
                        if w.im >= -UNDAMPED {
                            return None;
                        }
                        -C64::i() / w
                    }
                    Horizon::At(t) => {
                        let wt = w * t;
                        if wt.norm() < 1e-6 {
                            t * (1.0 - C64::i() * wt / 2.0)
                        } else {
                            (1.0 - (-C64::i() * wt).exp()) / (C64::i() * w)
                        }
                    }
                };
                sum += r[j] * r[k].conj() * window;
            }
        }
        Some(self.prefactor * 2.0 * std::f64::consts::PI * sum.re)
    }

    /// Checks that the tone split is well defined on the real axis and that
    /// the steady state exists.
    pub fn check(&self) -> Result<()> {
        for a in self.moving.as_slice() {
            for b in self.fixed.as_slice() {
                if (a.im - b.im).abs() <= UNDAMPED {
                    return Err(Error::NotDecaying { pole: *b });
                }
            }
        }
        if self.horizon == Horizon::Steady {
            for b in self.fixed.as_slice() {
                if b.im > -UNDAMPED {
                    return Err(Error::NotDecaying { pole: *b });
                }
            }
            let mut live = self
                .moving
                .as_slice()
                .iter()
                .filter(|a| a.im.abs() <= UNDAMPED);
            if let Some(first) = live.next() {
                if let Some(other) = live.find(|a| (a.re - first.re).abs() > self.tol) {
                    return Err(Error::NotDecaying { pole: *other });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::residue::residue_sum;

    #[test]
    fn tones_reassemble_full_residue_sum() {
        let fixed = [C64::new(1.0, -0.4), C64::new(-0.5, -1.2)];
        let k = SpectralKernel::photon(
            1.0,
            Poly::linear(C64::new(0.3, 0.5), C64::new(1.0, 0.0)),
            &fixed,
            Horizon::At(1.7),
        );
        let x = 0.37;
        let mut all = fixed.to_vec();
        all.push(C64::new(x, 0.0));
        let direct = residue_sum(&k.numerator, &all, 1.7, 1e-8);
        assert!((k.amplitude(x) - direct).norm() < 1e-14);
    }

    #[test]
    fn steady_keeps_only_photon_residue() {
        let fixed = [C64::new(1.0, -0.4)];
        let k = SpectralKernel::photon(
            1.0,
            Poly::constant(C64::new(1.0, 0.0)),
            &fixed,
            Horizon::Steady,
        );
        let x = 0.2;
        let expected = 1.0 / (C64::new(x, 0.0) - fixed[0]);
        assert!((k.amplitude(x) - expected).norm() < 1e-15);
        assert!(k.check().is_ok());
    }

    #[test]
    fn undamped_fixed_pole_has_no_steady_state() {
        let k = SpectralKernel::photon(
            1.0,
            Poly::constant(C64::new(1.0, 0.0)),
            &[C64::new(1.0, 0.0)],
            Horizon::Steady,
        );
        assert!(matches!(k.check(), Err(Error::NotDecaying { .. })));
    }

    #[test]
    fn exact_integral_matches_quadrature() {
        use crate::numerics::quadrature::{integrate_frequency, QuadratureSpec};
        let fixed = [
            C64::new(1.0, -0.4),
            C64::new(-0.5, -1.2),
            C64::new(0.2, -0.7),
        ];
        let numer = Poly::linear(C64::new(0.3, 0.5), C64::new(1.0, 0.0));
        for horizon in [Horizon::At(0.3), Horizon::At(2.5), Horizon::Steady] {
            let k = SpectralKernel::photon(0.8, numer, &fixed, horizon);
            let exact = k.exact_integral().unwrap();
            let quad = integrate_frequency(&k, &QuadratureSpec::default().with_rel_tol(1e-10))
                .unwrap()
                .value;
            assert!((exact - quad).abs() < 1e-8 * quad, "{horizon:?}: {exact} vs {quad}");
        }
    }

    #[test]
    fn exact_integral_declines_near_degenerate_poles() {
        let fixed = [C64::new(1.0, -0.4), C64::new(1.0 + 1e-9, -0.4)];
        let k = SpectralKernel::photon(1.0, Poly::constant(C64::new(1.0, 0.0)), &fixed, Horizon::Steady);
        assert!(k.exact_integral().is_none());
    }
}
