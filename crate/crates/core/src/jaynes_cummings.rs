//! One qubit in a lossy cavity.
//!
//! With the cavity empty the problem is the two-qubit single-excitation
//! problem with the cavity in place of qubit 2, so [`map_single_excitation_jcm`]
//! only relabels parameters. With one photon in the cavity there is no closed
//! form; [`evolve_jcm_two_excitation`] integrates the state network, which
//! includes the doubly occupied cavity reached through `a†|1⟩ = √2|2⟩`.

use crate::error::{Error, Result};
use crate::model::{build_network, validate_params, NetworkKind, SystemParams};
use crate::oracle::{oracle_evolve, OracleConfig};
use crate::trace::ProbabilityTrace;

impl SystemParams {
    /// Resonant qubit 1 coupled to the cavity with strength `g`.
    pub fn jcm(g: f64, kappa: f64) -> Self {
        Self {
            g1: g,
            kappa,
            ..Self::default()
        }
    }
}

/// Two-qubit parameters reproducing the empty-cavity problem: the cavity
/// becomes qubit 2 with `g12 = g`, `Γ2 = κ` and `ω02 = ωc`. `detuning` is
/// `ωc − ω01` with `ω01 = 0`.
pub fn map_single_excitation_jcm(
    g: f64,
    kappa: f64,
    gamma1: f64,
    detuning: f64,
) -> Result<SystemParams> {
    if !(kappa >= 0.0) || !(gamma1 >= 0.0) {
        return Err(Error::NegativeRate {
            name: "kappa or gamma1",
            value: kappa.min(gamma1),
        });
    }
    let p = SystemParams {
        omega02: detuning,
        g12: g,
        gamma1,
        gamma2: kappa,
        ..SystemParams::default()
    };
    validate_params(&p)?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JcmTraces {
    /// Probability that the qubit is still excited.
    pub survival: ProbabilityTrace,
    /// Probability that the cavity holds at least one photon.
    pub cavity: ProbabilityTrace,
    pub free_space: ProbabilityTrace,
    /// Largest change seen when the integrator tolerance is tightened.
    pub error_estimate: f64,
}

/// Qubit excited and one photon in the cavity at `t = 0`.
pub fn evolve_jcm_two_excitation(
    p: &SystemParams,
    times: &[f64],
    tol: f64,
) -> Result<JcmTraces> {
    let cfg = OracleConfig {
        tol,
        convergence_doubling: true,
        check_tolerance: 1e-4,
        ..OracleConfig::default()
    };
    let run = oracle_evolve(&build_network(NetworkKind::JcmTwoExcitation), p, &cfg, times)?;
    let survival = run.population_where(|s| s.qubit1_excited);
    let cavity = run.population_where(|s| s.photons > 0);
    Ok(JcmTraces {
        survival: run.trace("p_surv", survival),
        cavity: run.trace("p_cavity", cavity),
        free_space: run.trace(
            "free_space",
            times.iter().map(|t| (-p.gamma1 * t).exp()).collect(),
        ),
        error_estimate: run.discretization_error.unwrap_or(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemState;
    use crate::oracle::oracle_evolve;
    use crate::trace::linspace;
    use crate::two_qubit_single::p_surv;

    #[test]
    fn mapping_relabels_cavity_as_qubit() {
        let p = map_single_excitation_jcm(1.0, 2.0, 1.0, 0.0).unwrap();
        assert_eq!((p.g12, p.gamma2, p.gamma1), (1.0, 2.0, 1.0));
        assert!(map_single_excitation_jcm(1.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mapped_survival_matches_cavity_network() {
        let (g, kappa, detuning) = (1.5, 2.0, 0.7);
        let mapped = map_single_excitation_jcm(g, kappa, 1.0, detuning).unwrap();
        let direct = SystemParams {
            omega_c: detuning,
            ..SystemParams::cavity(g, 0.0, 0.0, 0.0, kappa)
        };
        let times = linspace(0.0, 8.0, 17);
        let run = oracle_evolve(
            &build_network(NetworkKind::TcmSingle),
            &direct,
            &OracleConfig::default(),
            &times,
        )
        .unwrap();
        let surv = run.node(SystemState::new(true, false, 0), &[]).unwrap();
        for (t, v) in times.iter().zip(&surv) {
            assert!((p_surv(&mapped, *t).unwrap() - v).abs() < 1e-6);
        }
    }

    #[test]
    fn decoupled_qubit_decays_freely() {
        let p = SystemParams::jcm(0.0, 0.7);
        let times = linspace(0.0, 6.0, 13);
        let tr = evolve_jcm_two_excitation(&p, &times, 1e-8).unwrap();
        for (a, b) in tr.survival.values.iter().zip(&tr.free_space.values) {
            assert!((a - b).abs() < 1e-7);
        }
        assert!(tr.error_estimate < 1e-6);
    }
}
