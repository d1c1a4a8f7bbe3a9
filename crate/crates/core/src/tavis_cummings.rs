//! Two dipole-coupled qubits sharing a lossy cavity mode, one excitation,
//! qubit 1 initially excited.
//!
//! The three single-excitation states `|e1g2,0⟩`, `|g1e2,0⟩`, `|g1g2,1⟩`
//! have complex energies `h1`, `h2`, `h3`. The characteristic cubic of the
//! coupled block has roots `ωα, ωβ, ωγ`, and every amplitude is a residue
//! sum over those roots plus the photon pole.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{validate_params, DressedPair, PairVariant, SystemParams};
use crate::numerics::{
    integrate_frequency, residue_sum, solve_cubic, CubicRoots, Horizon, Poly, QuadratureSpec,
    SpectralKernel, DEFAULT_DEGENERACY_TOL,
};
use crate::parallel::map_indexed;
use crate::trace::{check_axis, check_time_grid, ProbabilityTrace};

/// Poles and shift constants of one parameter set. Build once and share
/// between channels so that every channel sees the same roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcmPoles {
    /// Roots of the qubit-2/cavity block, `(z − h2)(z − h3) − g2²`.
    pub pair: DressedPair,
    pub roots: CubicRoots,
    /// `iκ/2 − ωc + ω01 + ω02`
    pub d2: C64,
    /// `iΓ2/2 + ω01`
    pub d_r: C64,
    pub params: SystemParams,
}

fn diagonal(p: &SystemParams) -> [C64; 3] {
    [
        C64::new(-p.omega02, -p.gamma1 / 2.0),
        C64::new(-p.omega01, -p.gamma2 / 2.0),
        C64::new(p.omega_c - p.omega01 - p.omega02, -p.kappa / 2.0),
    ]
}

pub fn tcm_poles(p: &SystemParams) -> Result<TcmPoles> {
    validate_params(p)?;
    let [h1, h2, h3] = diagonal(p);
    let (g1, g2, g12) = (p.g1, p.g2, p.g12);
    let s = h2 + h3;
    let q = h2 * h3 - g2 * g2;
    let one = C64::new(1.0, 0.0);
    let roots = solve_cubic(
        one,
        -(s + h1),
        q + h1 * s - g12 * g12 - g1 * g1,
        -h1 * q + g12 * g12 * h3 + g1 * g1 * h2 - 2.0 * g1 * g2 * g12,
    )?;
    let disc = ((h2 - h3) * (h2 - h3) + 4.0 * g2 * g2).sqrt();
    let pair = DressedPair::labeled(
        0.5 * (s + disc),
        0.5 * (s - disc),
        PairVariant::Qubit2Cavity,
    );
    Ok(TcmPoles {
        pair,
        roots,
        d2: -h3,
        d_r: -h2,
        params: *p,
    })
}

/// Emission channel of the single photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TcmChannel {
    /// Emitted by qubit 1.
    Em1,
    /// Emitted by qubit 2 after exchange.
    Emx2,
    /// Leaked out of the cavity.
    Emr,
}

impl TcmChannel {
    pub const ALL: [TcmChannel; 3] = [Self::Em1, Self::Emx2, Self::Emr];

    pub fn name(self) -> &'static str {
        match self {
            Self::Em1 => "p_em1",
            Self::Emx2 => "p_emx2",
            Self::Emr => "p_emr",
        }
    }
}

impl TcmPoles {
    fn numerator(&self, channel: TcmChannel) -> Poly {
        let p = &self.params;
        let one = C64::new(1.0, 0.0);
        match channel {
            TcmChannel::Em1 => {
                let [wp, wm] = self.pair.as_array();
                Poly::quadratic(wp * wm, -(wp + wm), one)
            }
            TcmChannel::Emx2 => Poly::linear(p.g12 * self.d2 + p.g1 * p.g2, C64::new(p.g12, 0.0)),
            TcmChannel::Emr => Poly::linear(p.g1 * self.d_r + p.g2 * p.g12, C64::new(p.g1, 0.0)),
        }
    }

    fn rate(&self, channel: TcmChannel) -> f64 {
        let p = &self.params;
        match channel {
            TcmChannel::Em1 => p.gamma1,
            TcmChannel::Emx2 => p.gamma2,
            TcmChannel::Emr => p.kappa,
        }
    }

    /// Kernel in the photon detuning from `ω01 + ω02`.
    pub fn kernel(&self, channel: TcmChannel, horizon: Horizon) -> SpectralKernel {
        SpectralKernel::photon(
            self.rate(channel) / (2.0 * PI),
            self.numerator(channel),
            &self.roots.as_array(),
            horizon,
        )
    }

    /// Population of the state the channel's photon is emitted from:
    /// qubit 1, qubit 2 or the cavity.
    pub fn population(&self, channel: TcmChannel, t: f64) -> f64 {
        residue_sum(
            &self.numerator(channel),
            &self.roots.as_array(),
            t,
            DEFAULT_DEGENERACY_TOL,
        )
        .norm_sqr()
    }

    pub fn survival(&self, t: f64) -> f64 {
        self.population(TcmChannel::Em1, t)
    }
}

pub fn p_surv_tcm(p: &SystemParams, t: f64) -> Result<f64> {
    Ok(tcm_poles(p)?.survival(t))
}

pub fn p_resolved(p: &SystemParams, channel: TcmChannel, t: f64, detuning: f64) -> Result<f64> {
    Ok(tcm_poles(p)?.kernel(channel, Horizon::At(t)).density(detuning))
}

pub fn p_em1_resolved(p: &SystemParams, t: f64, delta1: f64) -> Result<f64> {
    p_resolved(p, TcmChannel::Em1, t, delta1)
}

pub fn p_emx2_resolved(p: &SystemParams, t: f64, delta2: f64) -> Result<f64> {
    p_resolved(p, TcmChannel::Emx2, t, delta2)
}

pub fn p_emr_resolved(p: &SystemParams, t: f64, delta_r: f64) -> Result<f64> {
    p_resolved(p, TcmChannel::Emr, t, delta_r)
}

/// Channel probabilities integrated over the photon frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcmChannels {
    pub p_em1: f64,
    pub p_emx2: f64,
    pub p_emr: f64,
}

impl TcmChannels {
    pub fn sum(&self) -> f64 {
        self.p_em1 + self.p_emx2 + self.p_emr
    }

    pub fn get(&self, channel: TcmChannel) -> f64 {
        match channel {
            TcmChannel::Em1 => self.p_em1,
            TcmChannel::Emx2 => self.p_emx2,
            TcmChannel::Emr => self.p_emr,
        }
    }
}

pub fn p_channels(
    p: &SystemParams,
    horizon: Horizon,
    spec: &QuadratureSpec,
) -> Result<TcmChannels> {
    let poles = tcm_poles(p)?;
    let mut v = [0.0; 3];
    for (slot, ch) in v.iter_mut().zip(TcmChannel::ALL) {
        *slot = integrate_frequency(&poles.kernel(ch, horizon), spec)?.value;
    }
    Ok(TcmChannels {
        p_em1: v[0],
        p_emx2: v[1],
        p_emr: v[2],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcmTraces {
    pub surv: ProbabilityTrace,
    pub em1: ProbabilityTrace,
    pub emx2: ProbabilityTrace,
    pub emr: ProbabilityTrace,
    pub free_space: ProbabilityTrace,
}

impl TcmTraces {
    pub fn all(&self) -> [&ProbabilityTrace; 5] {
        [&self.surv, &self.em1, &self.emx2, &self.emr, &self.free_space]
    }
}

pub fn evolve(p: &SystemParams, times: &[f64], spec: &QuadratureSpec) -> Result<TcmTraces> {
    check_time_grid(times)?;
    let poles = tcm_poles(p)?;
    let rows = map_indexed(times.len(), |i| {
        let t = times[i];
        let c = p_channels(p, Horizon::At(t), spec)?;
        Ok([poles.survival(t), c.p_em1, c.p_emx2, c.p_emr, (-p.gamma1 * t).exp()])
    })?;
    let column = |label: &str, k: usize| ProbabilityTrace {
        label: label.into(),
        time_grid: times.to_vec(),
        values: rows.iter().map(|r| r[k]).collect(),
        params: *p,
    };
    Ok(TcmTraces {
        surv: column("p_surv", 0),
        em1: column("p_em1", 1),
        emx2: column("p_emx2", 2),
        emr: column("p_emr", 3),
        free_space: column("free_space", 4),
    })
}

/// Steady-state channel probabilities over a `(κ, g2)` grid with `Γ2 = κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRouteMap {
    pub kappa: Vec<f64>,
    pub g2: Vec<f64>,
    /// `cells[j][i]` holds `(κ = kappa[i], g2 = g2[j])`.
    pub cells: Vec<Vec<TcmChannels>>,
}

impl DecayRouteMap {
    pub fn min(&self, channel: TcmChannel) -> f64 {
        self.cells
            .iter()
            .flatten()
            .map(|c| c.get(channel))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn decay_route_map(
    p_base: &SystemParams,
    kappa_grid: &[f64],
    g2_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<DecayRouteMap> {
    validate_params(p_base)?;
    check_axis("kappa", kappa_grid, true)?;
    check_axis("g2", g2_grid, false)?;
    let n = kappa_grid.len();
    let flat = map_indexed(n * g2_grid.len(), |k| {
        let p = SystemParams {
            kappa: kappa_grid[k % n],
            gamma2: kappa_grid[k % n],
            g2: g2_grid[k / n],
            ..*p_base
        };
        p_channels(&p, Horizon::Steady, spec)
    })?;
    Ok(DecayRouteMap {
        kappa: kappa_grid.to_vec(),
        g2: g2_grid.to_vec(),
        cells: flat.chunks(n).map(|c| c.to_vec()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_qubit_single;

    #[test]
    fn decoupled_cavity_reduces_to_two_qubits() {
        let p = SystemParams::cavity(0.0, 0.0, 2.0, 3.0, 1.5);
        for &t in &[0.0, 0.4, 1.3, 5.0] {
            let a = p_surv_tcm(&p, t).unwrap();
            let b = two_qubit_single::p_surv(&p, t).unwrap();
            assert!((a - b).abs() < 1e-9, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn qubit1_factor_decouples() {
        let p = SystemParams::cavity(0.0, 2.0, 0.0, 1.0, 1.0);
        let poles = tcm_poles(&p).unwrap();
        let target = C64::new(-p.omega02, -0.5);
        assert!(poles
            .roots
            .as_array()
            .iter()
            .any(|r| (r - target).norm() < 1e-10));
    }

    #[test]
    fn steady_completeness() {
        let spec = QuadratureSpec::default();
        for p in [
            SystemParams::cavity(1.0, 3.0, 1.0, 0.5, 0.5),
            SystemParams::cavity(3.0, 0.0, 3.0, 10.0, 10.0),
            SystemParams::cavity(1.0, 15.0, 1.0, 0.1, 0.1),
        ] {
            let c = p_channels(&p, Horizon::Steady, &spec).unwrap();
            assert!((c.sum() - 1.0).abs() < 1e-5, "{p:?}: {c:?}");
        }
    }

    #[test]
    fn finite_time_completeness() {
        let spec = QuadratureSpec::default();
        let p = SystemParams::cavity(1.0, 5.0, 1.0, 1.0, 1.0);
        for &t in &[0.3, 2.0] {
            let c = p_channels(&p, Horizon::At(t), &spec).unwrap();
            let poles = tcm_poles(&p).unwrap();
            let held: f64 = TcmChannel::ALL.iter().map(|&ch| poles.population(ch, t)).sum();
            let total = c.sum() + held;
            assert!((total - 1.0).abs() < 1e-5, "t={t}: {total}");
        }
    }

    #[test]
    fn qubit2_and_cavity_are_interchangeable() {
        let spec = QuadratureSpec::default();
        let p = SystemParams {
            omega01: 0.3,
            omega02: 1.2,
            omega_c: 1.2,
            ..SystemParams::cavity(2.0, 4.0, 2.0, 0.7, 0.7)
        };
        let c = p_channels(&p, Horizon::Steady, &spec).unwrap();
        assert!((c.p_emx2 - c.p_emr).abs() < 1e-7, "{c:?}");
        assert!((c.sum() - 1.0).abs() < 1e-5);
    }
}
