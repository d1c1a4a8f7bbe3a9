//! Qubit 1 excited, qubit 2 in its ground state, no cavity.
//!
//! The excitation either stays in qubit 1, moves to qubit 2, or leaves as a
//! photon emitted by one of the two qubits. All four probabilities are
//! residue sums over the dressed pair `ω±` and, for the photon channels, the
//! photon detuning itself.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::model::{dressed_pair_single, validate_params, SystemParams};
use crate::numerics::{
    integrate_frequency, residue_sum, Horizon, Poly, QuadratureSpec, SpectralKernel,
    DEFAULT_DEGENERACY_TOL,
};
use crate::parallel::map_indexed;
pub use crate::trace::{default_time_grid, ProbabilityTrace};
use crate::trace::{check_axis, check_time_grid};

fn survival_numerator(p: &SystemParams) -> Poly {
    Poly::linear(
        C64::new(p.omega01, p.gamma2 / 2.0),
        C64::new(1.0, 0.0),
    )
}

/// Kernel of `P_SE(t, Δ1)`, the photon emitted by qubit 1 at detuning
/// `Δ1 = ω1 − ω01 − ω02`.
pub fn se_kernel(p: &SystemParams, horizon: Horizon) -> SpectralKernel {
    let pair = dressed_pair_single(p);
    SpectralKernel::photon(
        p.gamma1 / (2.0 * PI),
        survival_numerator(p),
        &pair.as_array(),
        horizon,
    )
}

/// Kernel of the exchange-emission density, the photon emitted by qubit 2 at
/// detuning `Δ2 = ω2 − ω01 − ω02`.
pub fn em2_kernel(p: &SystemParams, horizon: Horizon) -> SpectralKernel {
    let pair = dressed_pair_single(p);
    SpectralKernel::photon(
        p.g12 * p.g12 * p.gamma2 / (2.0 * PI),
        Poly::constant(C64::new(1.0, 0.0)),
        &pair.as_array(),
        horizon,
    )
}

/// Frequency-resolved emission probability of qubit 1 at detuning `delta1`.
pub fn p_se_resolved(p: &SystemParams, t: f64, delta1: f64) -> Result<f64> {
    validate_params(p)?;
    Ok(se_kernel(p, Horizon::At(t)).density(delta1))
}

/// Frequency-resolved exchange-emission probability via qubit 2.
pub fn p_em2_resolved(p: &SystemParams, t: f64, delta2: f64) -> Result<f64> {
    validate_params(p)?;
    Ok(em2_kernel(p, Horizon::At(t)).density(delta2))
}

/// Probability that qubit 1 is still excited.
pub fn p_surv(p: &SystemParams, t: f64) -> Result<f64> {
    validate_params(p)?;
    let pair = dressed_pair_single(p);
    let amp = residue_sum(
        &survival_numerator(p),
        &pair.as_array(),
        t,
        DEFAULT_DEGENERACY_TOL,
    );
    Ok(amp.norm_sqr())
}

/// Probability that the excitation sits in qubit 2.
pub fn p_exchg(p: &SystemParams, t: f64) -> Result<f64> {
    validate_params(p)?;
    let pair = dressed_pair_single(p);
    let amp = residue_sum(
        &Poly::constant(C64::new(p.g12, 0.0)),
        &pair.as_array(),
        t,
        DEFAULT_DEGENERACY_TOL,
    );
    Ok(amp.norm_sqr())
}

/// Free-space reference `e^{−Γ1 t}`.
pub fn p_free_space(p: &SystemParams, t: f64) -> f64 {
    (-p.gamma1 * t).exp()
}

/// Total probability that qubit 1 has emitted its photon.
pub fn p_se_total(p: &SystemParams, horizon: Horizon, spec: &QuadratureSpec) -> Result<f64> {
    validate_params(p)?;
    Ok(integrate_frequency(&se_kernel(p, horizon), spec)?.value)
}

/// Total probability that the photon left through qubit 2.
pub fn p_em2_total(p: &SystemParams, horizon: Horizon, spec: &QuadratureSpec) -> Result<f64> {
    validate_params(p)?;
    Ok(integrate_frequency(&em2_kernel(p, horizon), spec)?.value)
}

/// All channels of the single-excitation problem on one time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationTraces {
    pub surv: ProbabilityTrace,
    pub exchg: ProbabilityTrace,
    pub se: ProbabilityTrace,
    pub em2: ProbabilityTrace,
    pub free_space: ProbabilityTrace,
}

impl SingleExcitationTraces {
    pub fn all(&self) -> [&ProbabilityTrace; 5] {
        [&self.surv, &self.exchg, &self.se, &self.em2, &self.free_space]
    }
}

pub fn evolve(
    p: &SystemParams,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<SingleExcitationTraces> {
    validate_params(p)?;
    check_time_grid(times)?;
    let rows = map_indexed(times.len(), |i| {
        let t = times[i];
        Ok([
            p_surv(p, t)?,
            p_exchg(p, t)?,
            p_se_total(p, Horizon::At(t), spec)?,
            p_em2_total(p, Horizon::At(t), spec)?,
        ])
    })?;
    let column = |label: &str, k: usize| ProbabilityTrace {
        label: label.into(),
        time_grid: times.to_vec(),
        values: rows.iter().map(|r| r[k]).collect(),
        params: *p,
    };
    Ok(SingleExcitationTraces {
        surv: column("p_surv", 0),
        exchg: column("p_exchg", 1),
        se: column("p_se", 2),
        em2: column("p_em2", 3),
        free_space: ProbabilityTrace::from_fn("free_space", p, times, |t| {
            Ok(p_free_space(p, t))
        })?,
    })
}

/// Steady-state split of the photon between the two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadySplit {
    pub p_se: f64,
    pub p_em2: f64,
}

impl SteadySplit {
    pub fn gap(&self) -> f64 {
        self.p_se - self.p_em2
    }
}

pub fn steady_split(p: &SystemParams, spec: &QuadratureSpec) -> Result<SteadySplit> {
    Ok(SteadySplit {
        p_se: p_se_total(p, Horizon::Steady, spec)?,
        p_em2: p_em2_total(p, Horizon::Steady, spec)?,
    })
}

/// Steady-state gap `P_SE − P_em2` over a `(Γ2, g12)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GapMap {
    pub gamma2: Vec<f64>,
    pub g12: Vec<f64>,
    /// `cells[j][i]` holds `(Γ2 = gamma2[i], g12 = g12[j])`.
    pub cells: Vec<Vec<SteadySplit>>,
    /// For each `g12`, the grid `Γ2` maximising `P_em2`.
    pub optimal_gamma2: Vec<f64>,
}

impl GapMap {
    pub fn gap(&self, i_gamma2: usize, j_g12: usize) -> f64 {
        self.cells[j_g12][i_gamma2].gap()
    }
}

pub fn gap_map(
    p_base: &SystemParams,
    gamma2_grid: &[f64],
    g12_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<GapMap> {
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
        steady_split(&p, spec)
    })?;
    let cells: Vec<Vec<SteadySplit>> = flat.chunks(n).map(|c| c.to_vec()).collect();
    let optimal_gamma2 = cells
        .iter()
        .map(|row| {
            let best = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.p_em2.total_cmp(&b.1.p_em2))
                .map(|(i, _)| i)
                .unwrap_or(0);
            gamma2_grid[best]
        })
        .collect();
    Ok(GapMap {
        gamma2: gamma2_grid.to_vec(),
        g12: g12_grid.to_vec(),
        cells,
        optimal_gamma2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_survival_is_exponential() {
        let p = SystemParams::two_qubit(0.0, 3.0);
        for &t in &[0.0, 0.5, 2.0, 7.0] {
            assert!((p_surv(&p, t).unwrap() - (-t).exp()).abs() < 1e-14);
            assert_eq!(p_exchg(&p, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn lossless_rabi_flopping() {
        let p = SystemParams {
            gamma1: 1e-300,
            g12: 1.0,
            ..SystemParams::default()
        };
        for &t in &[0.3, 1.0, 2.5] {
            assert!((p_exchg(&p, t).unwrap() - t.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_conditions() {
        let p = SystemParams::two_qubit(1.3, 0.7);
        assert!((p_surv(&p, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(p_exchg(&p, 0.0).unwrap() < 1e-28);
        assert!(p_se_resolved(&p, 0.0, 0.4).unwrap() < 1e-28);
        assert!(p_em2_resolved(&p, 0.0, 0.4).unwrap() < 1e-28);
    }

    #[test]
    fn emission_vanishes_without_coupling() {
        let p = SystemParams::two_qubit(0.0, 2.0);
        let spec = QuadratureSpec::default();
        assert_eq!(p_em2_total(&p, Horizon::At(3.0), &spec).unwrap(), 0.0);
        let se = p_se_total(&p, Horizon::Steady, &spec).unwrap();
        assert!((se - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unitarity_at_finite_time() {
        let p = SystemParams::two_qubit(5.0, 3.0);
        let spec = QuadratureSpec::default();
        for &t in &[0.2, 1.0, 4.0] {
            let total = p_surv(&p, t).unwrap()
                + p_exchg(&p, t).unwrap()
                + p_se_total(&p, Horizon::At(t), &spec).unwrap()
                + p_em2_total(&p, Horizon::At(t), &spec).unwrap();
            assert!((total - 1.0).abs() < 1e-5, "t={t}: {total}");
        }
    }

    #[test]
    fn strong_coupling_reverses_gap() {
        let spec = QuadratureSpec::default();
        let weak = steady_split(&SystemParams::two_qubit(0.5, 3.0), &spec).unwrap();
        let strong = steady_split(&SystemParams::two_qubit(5.0, 3.0), &spec).unwrap();
        assert!(weak.gap() > 0.0);
        assert!(strong.gap() < 0.0);
        for s in [weak, strong] {
            assert!((s.p_se + s.p_em2 - 1.0).abs() < 1e-5);
        }
    }
}
