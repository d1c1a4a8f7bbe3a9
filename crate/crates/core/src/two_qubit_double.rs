//! Both qubits initially excited.
//!
//! The first photon leaves through either qubit and the remaining
//! excitation is shared by the pair. Detunings are measured from
//! `ω01 + ω02`, so a photon at `x` leaves the pair with the dressed poles
//! `x + a±`, `a± = ω̄0 − iΓ̄/2 ± ½√(4g12² + (Δω0 − iΔΓ/2)²)`.
//!
//! The second photon is resolved through the total detuning
//! `T = ω + ω' − ω01 − ω02` of the photon pair.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{dressed_pair_double, validate_params, EmitterChannel, SystemParams};
use crate::numerics::{
    integrate_frequency, integrate_frequency_2d, Horizon, Poles, Poly, QuadratureSpec,
    SpectralKernel, DEFAULT_DEGENERACY_TOL,
};
use crate::parallel::map_indexed;
use crate::trace::{check_axis, check_time_grid, ProbabilityTrace};

fn offsets(p: &SystemParams) -> [C64; 2] {
    dressed_pair_double(p, EmitterChannel::Qubit2, p.omega01 + p.omega02).as_array()
}

fn both_excited_pole(p: &SystemParams) -> C64 {
    C64::new(0.0, -0.5 * (p.gamma1 + p.gamma2))
}

fn one(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Survival of `|e1e2⟩`.
pub fn p_surv_ee(p: &SystemParams, t: f64) -> Result<f64> {
    validate_params(p)?;
    Ok((-(p.gamma1 + p.gamma2) * t).exp())
}

/// Kernel for qubit 1 still excited after qubit 2 emitted at detuning `x`.
pub fn em2_kernel(p: &SystemParams, horizon: Horizon) -> SpectralKernel {
    SpectralKernel {
        prefactor: p.gamma2 / (2.0 * PI),
        numerator: Poly::linear(C64::new(-p.omega02, p.gamma2 / 2.0), one(1.0)),
        drift: one(-1.0),
        moving: Poles::new(&offsets(p)),
        fixed: Poles::new(&[both_excited_pole(p)]),
        horizon,
        tol: DEFAULT_DEGENERACY_TOL,
    }
}

/// Kernel for qubit 1 re-excited by exchange after qubit 1 emitted at `x`.
pub fn emx1_kernel(p: &SystemParams, horizon: Horizon) -> SpectralKernel {
    SpectralKernel {
        prefactor: p.g12 * p.g12 * p.gamma1 / (2.0 * PI),
        numerator: Poly::constant(one(1.0)),
        drift: one(0.0),
        moving: Poles::new(&offsets(p)),
        fixed: Poles::new(&[both_excited_pole(p)]),
        horizon,
        tol: DEFAULT_DEGENERACY_TOL,
    }
}

pub fn p_em2_resolved_ee(p: &SystemParams, t: f64, delta2: f64) -> Result<f64> {
    validate_params(p)?;
    Ok(em2_kernel(p, Horizon::At(t)).density(delta2))
}

pub fn p_emx1_resolved_ee(p: &SystemParams, t: f64, delta1: f64) -> Result<f64> {
    validate_params(p)?;
    Ok(emx1_kernel(p, Horizon::At(t)).density(delta1))
}

pub fn p_em2_total_ee(p: &SystemParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    validate_params(p)?;
    Ok(integrate_frequency(&em2_kernel(p, Horizon::At(t)), spec)?.value)
}

pub fn p_emx1_total_ee(p: &SystemParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    validate_params(p)?;
    Ok(integrate_frequency(&emx1_kernel(p, Horizon::At(t)), spec)?.value)
}

/// Probability that qubit 1 is excited, summed over all routes.
pub fn p_total_qubit1(p: &SystemParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(p_surv_ee(p, t)? + p_em2_total_ee(p, t, spec)? + p_emx1_total_ee(p, t, spec)?)
}

/// Survival and single-photon channels on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleExcitationTraces {
    pub surv: ProbabilityTrace,
    pub em2: ProbabilityTrace,
    pub emx1: ProbabilityTrace,
    pub total: ProbabilityTrace,
    pub free_space: ProbabilityTrace,
}

impl DoubleExcitationTraces {
    pub fn all(&self) -> [&ProbabilityTrace; 5] {
        [&self.surv, &self.em2, &self.emx1, &self.total, &self.free_space]
    }
}

pub fn evolve(
    p: &SystemParams,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<DoubleExcitationTraces> {
    validate_params(p)?;
    check_time_grid(times)?;
    let rows = map_indexed(times.len(), |i| {
        let t = times[i];
        Ok([
            p_surv_ee(p, t)?,
            p_em2_total_ee(p, t, spec)?,
            p_emx1_total_ee(p, t, spec)?,
        ])
    })?;
    let column = |label: &str, f: &dyn Fn(&[f64; 3]) -> f64| ProbabilityTrace {
        label: label.into(),
        time_grid: times.to_vec(),
        values: rows.iter().map(f).collect(),
        params: *p,
    };
    Ok(DoubleExcitationTraces {
        surv: column("p_surv", &|r| r[0]),
        em2: column("p_em2", &|r| r[1]),
        emx1: column("p_emx1", &|r| r[2]),
        total: column("p_total", &|r| r[0] + r[1] + r[2]),
        free_space: column("free_space", &|_| 0.0),
    }
    .with_free_space(p))
}

impl DoubleExcitationTraces {
    fn with_free_space(mut self, p: &SystemParams) -> Self {
        for (v, t) in self.free_space.values.iter_mut().zip(&self.free_space.time_grid) {
            *v = (-p.gamma1 * t).exp();
        }
        self
    }
}

/// Final two-photon states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoPhotonChannel {
    /// Both photons from qubit 1.
    Em11,
    /// Both photons from qubit 2.
    Em22,
    /// One photon from each qubit.
    Total12,
}

impl TwoPhotonChannel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Em11 => "em11",
            Self::Em22 => "em22",
            Self::Total12 => "total12",
        }
    }
}

impl std::fmt::Display for TwoPhotonChannel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonChannelResult {
    pub p_em11: f64,
    pub p_em22: f64,
    /// Qubit 1 first, then qubit 2.
    pub p_em12: f64,
    /// Qubit 2 first, then qubit 1.
    pub p_em21: f64,
    pub p_total12: f64,
    pub dominant: TwoPhotonChannel,
    pub params: SystemParams,
    pub horizon: Horizon,
}

impl TwoPhotonChannelResult {
    pub fn sum(&self) -> f64 {
        self.p_em11 + self.p_em22 + self.p_total12
    }
}

/// One two-photon route: which qubit emits first and which emits second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Route {
    pub first: EmitterChannel,
    pub second: EmitterChannel,
}

/// Kernel in the total detuning `T` for a first photon at detuning `x1`.
pub fn two_photon_kernel(
    p: &SystemParams,
    route: Route,
    x1: f64,
    horizon: Horizon,
) -> SpectralKernel {
    use EmitterChannel::{Qubit1, Qubit2};
    let [ap, am] = offsets(p);
    let fixed = [x1 + ap, x1 + am, both_excited_pole(p)];
    let rate = |c: EmitterChannel| match c {
        Qubit1 => p.gamma1,
        Qubit2 => p.gamma2,
    };
    let (amp, numerator) = match (route.first, route.second) {
        (Qubit1, Qubit1) | (Qubit2, Qubit2) => (
            p.g12 * rate(route.first) / (2.0 * PI),
            Poly::constant(one(1.0)),
        ),
        (Qubit1, Qubit2) => (
            (p.gamma1 * p.gamma2).sqrt() / (2.0 * PI),
            Poly::linear(C64::new(-x1 - p.omega01, p.gamma1 / 2.0), one(1.0)),
        ),
        (Qubit2, Qubit1) => (
            (p.gamma1 * p.gamma2).sqrt() / (2.0 * PI),
            Poly::linear(C64::new(-x1 - p.omega02, p.gamma2 / 2.0), one(1.0)),
        ),
    };
    SpectralKernel::photon(amp * amp, numerator, &fixed, horizon)
}

/// Once every amplitude has decayed by this factor the finite-time result
/// equals the steady state to within rounding.
const SETTLED_AMPLITUDE: f64 = 1e-10;

/// `Horizon::Steady` if all transients at `horizon` are below
/// [`SETTLED_AMPLITUDE`].
fn effective_horizon(p: &SystemParams, horizon: Horizon) -> Horizon {
    let Horizon::At(t) = horizon else {
        return horizon;
    };
    let slowest = offsets(p)
        .iter()
        .chain([both_excited_pole(p)].iter())
        .map(|a| -a.im)
        .fold(f64::INFINITY, f64::min);
    if slowest > 0.0 && slowest * t > -SETTLED_AMPLITUDE.ln() {
        Horizon::Steady
    } else {
        horizon
    }
}

/// Probability of one two-photon route, integrated over both photons.
pub fn p_route(
    p: &SystemParams,
    route: Route,
    horizon: Horizon,
    specs: &[QuadratureSpec; 2],
) -> Result<f64> {
    validate_params(p)?;
    let horizon = effective_horizon(p, horizon);
    let gamma = 0.5 * (p.gamma1 + p.gamma2);
    let hints: Vec<(f64, f64)> = offsets(p)
        .iter()
        .map(|a| (-a.re, (a.im + gamma).abs().max(1e-3 * gamma)))
        .collect();
    let est = integrate_frequency_2d(
        &hints,
        horizon.time(),
        |x1| Ok(two_photon_kernel(p, route, x1, horizon)),
        specs,
    )?;
    Ok(est.value)
}

pub fn p_two_photon(
    p: &SystemParams,
    horizon: Horizon,
    specs: &[QuadratureSpec; 2],
) -> Result<TwoPhotonChannelResult> {
    use EmitterChannel::{Qubit1, Qubit2};
    validate_params(p)?;
    let routes = [
        (Qubit1, Qubit1),
        (Qubit2, Qubit2),
        (Qubit1, Qubit2),
        (Qubit2, Qubit1),
    ];
    let v = map_indexed(4, |k| {
        let (first, second) = routes[k];
        p_route(p, Route { first, second }, horizon, specs)
    })?;
    let p_total12 = v[2] + v[3];
    let dominant = [
        (TwoPhotonChannel::Em11, v[0]),
        (TwoPhotonChannel::Em22, v[1]),
        (TwoPhotonChannel::Total12, p_total12),
    ]
    .into_iter()
    .max_by(|a, b| a.1.total_cmp(&b.1))
    .map(|(c, _)| c)
    .unwrap_or(TwoPhotonChannel::Total12);
    Ok(TwoPhotonChannelResult {
        p_em11: v[0],
        p_em22: v[1],
        p_em12: v[2],
        p_em21: v[3],
        p_total12,
        dominant,
        params: *p,
        horizon,
    })
}

/// Steady-state two-photon channels over a `(Γ2, g12)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceMap {
    pub gamma2: Vec<f64>,
    pub g12: Vec<f64>,
    /// `cells[j][i]` holds `(Γ2 = gamma2[i], g12 = g12[j])`.
    pub cells: Vec<Vec<TwoPhotonChannelResult>>,
}

impl DominanceMap {
    pub fn tags(&self) -> Vec<Vec<TwoPhotonChannel>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.dominant).collect())
            .collect()
    }
}

pub fn dominance_map(
    p_base: &SystemParams,
    gamma2_grid: &[f64],
    g12_grid: &[f64],
    specs: &[QuadratureSpec; 2],
) -> Result<DominanceMap> {
    validate_params(p_base)?;
    check_axis("gamma2", gamma2_grid, true)?;
    check_axis("g12", g12_grid, true)?;
    let n = gamma2_grid.len();
    let flat = map_indexed(n * g12_grid.len(), |k| {
        let p = SystemParams {
            gamma2: gamma2_grid[k % n],
            g12: g12_grid[k / n],
            ..*p_base
        };
        p_two_photon(&p, Horizon::Steady, specs)
    })?;
    Ok(DominanceMap {
        gamma2: gamma2_grid.to_vec(),
        g12: g12_grid.to_vec(),
        cells: flat.chunks(n).map(|c| c.to_vec()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_ignores_coupling() {
        let a = SystemParams::two_qubit(0.0, 1.0);
        let b = SystemParams::two_qubit(7.0, 1.0);
        assert_eq!(p_surv_ee(&a, 1.0).unwrap(), (-2.0f64).exp());
        assert_eq!(p_surv_ee(&a, 0.8).unwrap(), p_surv_ee(&b, 0.8).unwrap());
    }

    #[test]
    fn uncoupled_total_is_free_decay() {
        let p = SystemParams::two_qubit(0.0, 2.5);
        let spec = QuadratureSpec::default();
        for &t in &[0.3, 1.0, 3.0] {
            assert_eq!(p_emx1_total_ee(&p, t, &spec).unwrap(), 0.0);
            let total = p_total_qubit1(&p, t, &spec).unwrap();
            assert!((total - (-t).exp()).abs() < 1e-6, "t={t}: {total}");
        }
    }

    #[test]
    fn identical_qubits_keep_free_decay() {
        let p = SystemParams::two_qubit(5.0, 1.0);
        let spec = QuadratureSpec::default();
        for &t in &[0.5, 2.0, 4.0] {
            let total = p_total_qubit1(&p, t, &spec).unwrap();
            assert!((total - (-t).exp()).abs() < 1e-5, "t={t}: {total}");
        }
    }

    #[test]
    fn two_photon_completeness() {
        let specs = QuadratureSpec::two_dimensional();
        let r = p_two_photon(&SystemParams::two_qubit(2.0, 3.0), Horizon::Steady, &specs).unwrap();
        assert!((r.sum() - 1.0).abs() < 2e-3, "{r:?}");
    }

    #[test]
    fn swap_exchanges_routes() {
        let specs = QuadratureSpec::two_dimensional();
        let p = SystemParams::two_qubit(1.5, 0.5);
        let q = SystemParams { gamma1: 0.5, gamma2: 1.0, ..p };
        let a = p_two_photon(&p, Horizon::Steady, &specs).unwrap();
        let b = p_two_photon(&q, Horizon::Steady, &specs).unwrap();
        assert!((a.p_em11 - b.p_em22).abs() < 1e-4);
        assert!((a.p_em12 - b.p_em21).abs() < 1e-4);
    }
}
