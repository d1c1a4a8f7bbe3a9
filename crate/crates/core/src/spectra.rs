//! Steady-state spectra of the cavity system with `g2 = 0`.
//!
//! Spectra are functions of `Δ2 = ω2 − ω02`, the output photon measured from
//! the qubit-2 transition. The input pulse is centred on the excitation
//! detuning `Δ1 = ω1 − ω01`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_params, SystemParams};
use crate::numerics::Horizon;
use crate::tavis_cummings::{tcm_poles, TcmChannel};
use crate::trace::{linspace, trapezoid, SpectrumKind, SpectrumTrace};

/// Gaussian single-photon input pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseSpec {
    /// `Δ1 = ω1 − ω01`
    pub excitation_detuning: f64,
    /// Pulse duration `T`.
    pub duration: f64,
    /// Arrival time `τ`; only enters the phase.
    pub arrival_time: f64,
}

impl Default for PulseSpec {
    fn default() -> Self {
        Self {
            excitation_detuning: 0.0,
            duration: 2.0 * 3f64.sqrt(),
            arrival_time: 0.0,
        }
    }
}

impl PulseSpec {
    pub fn new(excitation_detuning: f64) -> Self {
        Self {
            excitation_detuning,
            ..Self::default()
        }
    }

    /// Spectral linewidth `Δω1 = 2√3/T`.
    pub fn linewidth(&self) -> f64 {
        2.0 * 3f64.sqrt() / self.duration
    }

    fn check(&self) -> Result<()> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::Precondition("pulse duration must be positive".into()));
        }
        if !self.excitation_detuning.is_finite() || !self.arrival_time.is_finite() {
            return Err(Error::NonFinite { name: "pulse" });
        }
        Ok(())
    }

    /// Complex amplitude `ψ` at output detuning `delta2`.
    pub fn amplitude(&self, delta2: f64) -> C64 {
        let u = delta2 - self.excitation_detuning;
        let phase = C64::new(0.0, u * self.arrival_time).exp();
        self.intensity(delta2).sqrt() * phase
    }

    /// `|ψ|²`, normalised to unit area over the real line.
    pub fn intensity(&self, delta2: f64) -> f64 {
        let w = self.linewidth();
        let u = delta2 - self.excitation_detuning;
        (2.0 / PI).sqrt() / w * (-2.0 * u * u / (w * w)).exp()
    }
}

/// 4001 points on `[−10, 10]`, plus 20-fold refinement within `±10κ` of the
/// cavity when `κ < 0.1`.
pub fn default_grid(p: &SystemParams) -> Vec<f64> {
    let mut grid = linspace(-10.0, 10.0, 4001);
    if p.kappa > 0.0 && p.kappa < 0.1 {
        let dc = p.omega_c - p.omega01;
        let half = 10.0 * p.kappa;
        let n = (2.0 * half / (0.005 / 20.0)).round() as usize + 1;
        grid.extend(linspace(dc - half, dc + half, n));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    grid
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("spectrum grid needs at least two points".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "spectrum grid must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn require_g2_zero(p: &SystemParams) -> Result<()> {
    if p.g2 != 0.0 {
        return Err(Error::Precondition(
            "spectra are defined for g2 = 0".into(),
        ));
    }
    Ok(())
}

fn normalized(
    kind: SpectrumKind,
    p: &SystemParams,
    grid: &[f64],
    raw: Vec<f64>,
) -> Result<SpectrumTrace> {
    let area = trapezoid(grid, &raw);
    if !(area.is_finite() && area > 0.0) {
        return Err(Error::Precondition(format!(
            "{kind:?} spectrum has no weight on the grid"
        )));
    }
    Ok(SpectrumTrace {
        kind,
        detuning_grid: grid.to_vec(),
        values: raw.into_iter().map(|v| v / area).collect(),
        normalization: area,
        params: *p,
    })
}

/// Unnormalised steady-state exchange-emission density at each `Δ2`.
pub fn exchange_emission_density(p: &SystemParams, grid: &[f64]) -> Result<Vec<f64>> {
    let kernel = tcm_poles(p)?.kernel(TcmChannel::Emx2, Horizon::Steady);
    kernel.check()?;
    Ok(grid.iter().map(|&d2| kernel.density(d2 - p.omega01)).collect())
}

/// Area-normalised exchange-emission spectrum of qubit 2.
pub fn exchange_emission_spectrum(p: &SystemParams, grid: &[f64]) -> Result<SpectrumTrace> {
    validate_params(p)?;
    require_g2_zero(p)?;
    check_grid(grid)?;
    let raw = exchange_emission_density(p, grid)?;
    normalized(SpectrumKind::ExchangeEmission, p, grid, raw)
}

/// `|ψ(Δ2 − Δ1)|²` on the grid. Not renormalised.
pub fn input_pulse_spectrum(ps: &PulseSpec, grid: &[f64]) -> Result<SpectrumTrace> {
    ps.check()?;
    check_grid(grid)?;
    Ok(SpectrumTrace {
        kind: SpectrumKind::InputPulse,
        detuning_grid: grid.to_vec(),
        values: grid.iter().map(|&x| ps.intensity(x)).collect(),
        normalization: 1.0,
        params: SystemParams::default(),
    })
}

fn raman_preconditions(p: &SystemParams, ps: &PulseSpec, grid: &[f64]) -> Result<()> {
    validate_params(p)?;
    require_g2_zero(p)?;
    if p.omega01 != p.omega02 {
        return Err(Error::Precondition(
            "Raman spectrum assumes omega01 = omega02".into(),
        ));
    }
    ps.check()?;
    check_grid(grid)
}

/// Raman scattering spectrum from the closed form
/// `g12²Γ1Γ2 |(ω2 + iκ/2 − ωc) ψ / Π(ω2 − ω01 − ω02 − ωi)|²`.
pub fn raman_spectrum(p: &SystemParams, ps: &PulseSpec, grid: &[f64]) -> Result<SpectrumTrace> {
    raman_preconditions(p, ps, grid)?;
    let roots = tcm_poles(p)?.roots.as_array();
    let pref = p.g12 * p.g12 * p.gamma1 * p.gamma2;
    let raw = grid
        .iter()
        .map(|&d2| {
            let w2 = d2 + p.omega02;
            let c2 = w2 - p.omega01 - p.omega02;
            let num = C64::new(w2 - p.omega_c, p.kappa / 2.0);
            let den: C64 = roots.iter().map(|r| c2 - r).product();
            // |ψ|² taken outside the modulus: the pulse phase has unit modulus
            pref * (num / den).norm_sqr() * ps.intensity(d2)
        })
        .collect();
    normalized(SpectrumKind::Raman, p, grid, raw)
}

/// Raman spectrum as the product `|ψ|²·P_emx2`, normalised.
pub fn raman_product_spectrum(
    p: &SystemParams,
    ps: &PulseSpec,
    grid: &[f64],
) -> Result<SpectrumTrace> {
    raman_preconditions(p, ps, grid)?;
    let emx2 = exchange_emission_density(p, grid)?;
    let raw = grid
        .iter()
        .zip(emx2)
        .map(|(&d2, e)| ps.intensity(d2) * e)
        .collect();
    normalized(SpectrumKind::Raman, p, grid, raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub location: f64,
    pub height: f64,
    pub fwhm: f64,
    /// `|left half-width − right half-width| / FWHM`
    pub asymmetry: f64,
}

pub const DEFAULT_PROMINENCE: f64 = 0.01;
const MIN_SAMPLES_PER_PEAK: usize = 7;

/// Local maxima whose prominence exceeds `DEFAULT_PROMINENCE` of the global
/// maximum, with interpolated half-maximum widths.
pub fn peak_report(s: &SpectrumTrace) -> Result<Vec<Peak>> {
    peak_report_with(s, DEFAULT_PROMINENCE)
}

pub fn peak_report_with(s: &SpectrumTrace, relative_prominence: f64) -> Result<Vec<Peak>> {
    let (x, y) = (&s.detuning_grid, &s.values);
    let n = y.len();
    let top = y.iter().cloned().fold(0.0, f64::max);
    if n < 3 || top <= 0.0 {
        return Ok(Vec::new());
    }
    let threshold = relative_prominence * top;
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if !(y[i] > y[i - 1]) {
            i += 1;
            continue;
        }
        // plateau: walk to its right edge
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        if j + 1 < n && y[j + 1] < y[i] {
            let k = (i + j) / 2;
            if prominence(y, k) >= threshold {
                peaks.push(describe(x, y, k)?);
            }
        }
        i = j + 1;
    }
    Ok(peaks)
}

fn prominence(y: &[f64], k: usize) -> f64 {
    let h = y[k];
    let mut left_min = h;
    for &v in y[..k].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &y[k + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

fn describe(x: &[f64], y: &[f64], k: usize) -> Result<Peak> {
    let half = 0.5 * y[k];
    let mut l = k;
    while l > 0 && y[l] > half {
        l -= 1;
    }
    let mut r = k;
    while r + 1 < y.len() && y[r] > half {
        r += 1;
    }
    if r - l + 1 < MIN_SAMPLES_PER_PEAK {
        return Err(Error::GridTooCoarse(format!(
            "peak at {} spans only {} samples",
            x[k],
            r - l + 1
        )));
    }
    let cross = |a: usize, b: usize| {
        if y[a] > half || y[b] > half {
            let t = (half - y[a]) / (y[b] - y[a]);
            x[a] + t * (x[b] - x[a])
        } else {
            x[a]
        }
    };
    let left = if y[l] <= half { cross(l, l + 1) } else { x[l] };
    let right = if y[r] <= half { cross(r - 1, r) } else { x[r] };
    let (lw, rw) = (x[k] - left, right - x[k]);
    let fwhm = lw + rw;
    Ok(Peak {
        location: x[k],
        height: y[k],
        fwhm,
        asymmetry: if fwhm > 0.0 { (lw - rw).abs() / fwhm } else { 0.0 },
    })
}
