//! Brute-force reference solver working directly on a [`StateNetwork`].
//!
//! Every continuum is flat, so each emitter loses amplitude at exactly half
//! its rate and the photon it releases never returns. The oracle integrates
//! the network in the time domain under that rule:
//!
//! * nodes without emitted photons carry one amplitude each;
//! * nodes sharing a one-photon record form a family whose photon frequency
//!   has been summed out, so the family carries a density matrix fed by the
//!   decays of the photonless nodes;
//! * two-photon nodes are terminal and accumulate the probability flowing
//!   into them, kept separately for each `(first photon, second photon)`.
//!
//! Frequency-resolved emission is obtained by attaching one-way modes at the
//! requested photon frequencies to the emitting nodes and integrating until
//! the system has emptied.
//!
//! Nothing here uses poles, residues or frequency quadrature.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    validate_params, Bath, Coupling, EdgeKind, Level, StateNetwork, SystemParams, SystemState,
};
use crate::numerics::{ode, OdeOptions, OdeStats};
use crate::trace::{check_time_grid, ProbabilityTrace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Local error target of the integrator.
    pub tol: f64,
    /// Repeat the run with a 100-fold tighter tolerance and compare.
    pub convergence_doubling: bool,
    /// Largest deviation tolerated by the repeat run.
    pub check_tolerance: f64,
    /// Remaining system population below which a spectrum run stops.
    pub settle_population: f64,
    /// Hard limit on the length of a spectrum run.
    pub max_time: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            convergence_doubling: false,
            check_tolerance: 1e-4,
            settle_population: 1e-10,
            max_time: 1e5,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.tol) && ok(self.check_tolerance) && ok(self.settle_population)) {
            return Err(Error::Precondition("oracle tolerances must be positive".into()));
        }
        if !ok(self.max_time) {
            return Err(Error::Precondition("oracle max_time must be positive".into()));
        }
        Ok(())
    }
}

fn rate(p: &SystemParams, bath: Bath) -> f64 {
    match bath {
        Bath::B1 => p.gamma1,
        Bath::B2 => p.gamma2,
        Bath::B3 => p.kappa,
    }
}

fn strength(p: &SystemParams, c: Coupling) -> f64 {
    match c {
        Coupling::G1 => p.g1,
        Coupling::G2 => p.g2,
        Coupling::G12 => p.g12,
    }
}

/// Energy of a system state with `|e1e2⟩` at zero.
pub fn energy(p: &SystemParams, s: SystemState) -> f64 {
    let q = |e: bool, w: f64| if e { 0.0 } else { -w };
    q(s.qubit1_excited, p.omega01) + q(s.qubit2_excited, p.omega02) + s.photons as f64 * p.omega_c
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone)]
struct Mat {
    n: usize,
    a: Vec<C64>,
}

impl Mat {
    fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    fn at(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.a[i * self.n + j]
    }

    fn get(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }
}

/// Nodes sharing one first photon.
#[derive(Debug, Clone)]
struct Family {
    bath: Bath,
    members: Vec<usize>,
    /// State-vector offset of the density matrix.
    offset: usize,
    /// Effective non-Hermitian Hamiltonian over the members.
    h: Mat,
    /// `(member, source node, amplitude)` for each feeding decay.
    feeds: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone)]
struct Sink {
    first: Bath,
    second: Bath,
    family: usize,
    /// `(member, amplitude)` of each decay ending here.
    drains: Vec<(usize, f64)>,
    terminal: usize,
    slot: usize,
}

/// The network's equations of motion in the time domain.
#[derive(Debug, Clone)]
pub struct Dynamics {
    system: Vec<usize>,
    /// Index of each node among the photonless nodes.
    position: Vec<Option<usize>>,
    h0: Mat,
    families: Vec<Family>,
    sinks: Vec<Sink>,
    len: usize,
}

impl Dynamics {
    pub fn new(network: &StateNetwork, p: &SystemParams) -> Result<Self> {
        validate_params(p)?;
        let nn = network.nodes.len();
        let mut position = vec![None; nn];
        let mut system = vec![];
        let mut family_of: BTreeMap<Bath, usize> = BTreeMap::new();
        let mut families: Vec<Family> = vec![];
        let mut member_index = vec![None; nn];
        for (i, n) in network.nodes.iter().enumerate() {
            match n.level() {
                Level::System => {
                    position[i] = Some(system.len());
                    system.push(i);
                }
                Level::OnePhoton => {
                    let b = n.emitted[0];
                    let f = *family_of.entry(b).or_insert_with(|| {
                        families.push(Family {
                            bath: b,
                            members: vec![],
                            offset: 0,
                            h: Mat::zeros(0),
                            feeds: vec![],
                        });
                        families.len() - 1
                    });
                    member_index[i] = Some((f, families[f].members.len()));
                    families[f].members.push(i);
                }
                Level::TwoPhoton => {}
            }
        }
        let n0 = system.len();
        let mut h0 = Mat::zeros(n0);
        for (k, &i) in system.iter().enumerate() {
            *h0.at(k, k) = C64::new(energy(p, network.nodes[i].system), 0.0);
        }
        for f in families.iter_mut() {
            let m = f.members.len();
            f.h = Mat::zeros(m);
            for (k, &i) in f.members.iter().enumerate() {
                *f.h.at(k, k) = C64::new(energy(p, network.nodes[i].system), 0.0);
            }
        }
        let mut sinks: Vec<Sink> = vec![];
        for e in &network.edges {
            let (from, to) = (&network.nodes[e.from], &network.nodes[e.to]);
            match e.kind {
                EdgeKind::Coupling { coupling, factor } => {
                    let g = C64::new(factor * strength(p, coupling), 0.0);
                    match (position[e.from], position[e.to], member_index[e.from], member_index[e.to]) {
                        (Some(a), Some(b), _, _) => {
                            *h0.at(a, b) += g;
                            *h0.at(b, a) += g;
                        }
                        (_, _, Some((fa, a)), Some((fb, b))) if fa == fb => {
                            *families[fa].h.at(a, b) += g;
                            *families[fa].h.at(b, a) += g;
                        }
                        _ => {
                            return Err(Error::Precondition(format!(
                                "coupling between {from} and {to} crosses photon records"
                            )))
                        }
                    }
                }
                EdgeKind::Decay { bath, factor } => {
                    let gamma = factor * factor * rate(p, bath);
                    let amp = factor * rate(p, bath).sqrt();
                    match (from.level(), to.level()) {
                        (Level::System, Level::OnePhoton) => {
                            let a = position[e.from].expect("photonless node");
                            h0.at(a, a).im -= gamma / 2.0;
                            let (f, b) = member_index[e.to].expect("one-photon node");
                            families[f].feeds.push((b, a, amp));
                        }
                        (Level::OnePhoton, Level::TwoPhoton) => {
                            let (f, b) = member_index[e.from].expect("one-photon node");
                            families[f].h.at(b, b).im -= gamma / 2.0;
                            let first = families[f].bath;
                            match sinks
                                .iter_mut()
                                .find(|s| s.family == f && s.second == bath)
                            {
                                Some(s) => s.drains.push((b, amp)),
                                None => sinks.push(Sink {
                                    first,
                                    second: bath,
                                    family: f,
                                    drains: vec![(b, amp)],
                                    terminal: e.to,
                                    slot: 0,
                                }),
                            }
                        }
                        (Level::System, Level::System) | (Level::OnePhoton, Level::OnePhoton) => {
                            return Err(Error::Precondition(format!(
                                "decay from {from} to {to} emits no photon"
                            )))
                        }
                        _ => {
                            return Err(Error::Precondition(format!(
                                "unsupported decay from {from} to {to}"
                            )))
                        }
                    }
                }
            }
        }
        let mut len = n0;
        for f in families.iter_mut() {
            f.offset = len;
            len += f.members.len() * f.members.len();
        }
        for s in sinks.iter_mut() {
            s.slot = len;
            len += 1;
        }
        Ok(Self {
            system,
            position,
            h0,
            families,
            sinks,
            len,
        })
    }

    fn initial_state(&self, node: usize) -> Result<Vec<C64>> {
        let mut y = vec![C64::new(0.0, 0.0); self.len];
        let k = self.position[node]
            .ok_or_else(|| Error::Precondition("initial node must carry no photons".into()))?;
        y[k] = C64::new(1.0, 0.0);
        Ok(y)
    }

    fn apply(&self, y: &[C64], dy: &mut [C64]) {
        let mi = C64::new(0.0, -1.0);
        let n0 = self.system.len();
        for a in 0..n0 {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..n0 {
                acc += self.h0.get(a, b) * y[b];
            }
            dy[a] = mi * acc;
        }
        for f in &self.families {
            let m = f.members.len();
            let rho = &y[f.offset..f.offset + m * m];
            let out = &mut dy[f.offset..f.offset + m * m];
            // −i(Hρ − ρH†)
            for i in 0..m {
                for j in 0..m {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..m {
                        acc += f.h.get(i, k) * rho[k * m + j] - rho[i * m + k] * f.h.get(j, k).conj();
                    }
                    out[i * m + j] = mi * acc;
                }
            }
            // L c c† L†
            let mut src = vec![C64::new(0.0, 0.0); m];
            for &(b, a, amp) in &f.feeds {
                src[b] += amp * y[a];
            }
            for i in 0..m {
                for j in 0..m {
                    out[i * m + j] += src[i] * src[j].conj();
                }
            }
        }
        for s in &self.sinks {
            let f = &self.families[s.family];
            let m = f.members.len();
            let rho = &y[f.offset..f.offset + m * m];
            let mut flux = C64::new(0.0, 0.0);
            for &(i, ai) in &s.drains {
                for &(j, aj) in &s.drains {
                    flux += ai * aj * rho[i * m + j];
                }
            }
            dy[s.slot] = C64::new(flux.re, 0.0);
        }
    }

    fn populations(&self, nn: usize, y: &[C64]) -> Vec<f64> {
        let mut out = vec![0.0; nn];
        for (k, &i) in self.system.iter().enumerate() {
            out[i] = y[k].norm_sqr();
        }
        for f in &self.families {
            let m = f.members.len();
            for (k, &i) in f.members.iter().enumerate() {
                out[i] = y[f.offset + k * m + k].re;
            }
        }
        for s in &self.sinks {
            out[s.terminal] += y[s.slot].re;
        }
        out
    }
}

/// Populations recorded by one oracle run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub network: StateNetwork,
    pub params: SystemParams,
    pub times: Vec<f64>,
    /// `node_populations[n][i]`: probability in node `n` at `times[i]`.
    /// Terminal two-photon nodes hold everything that flowed into them.
    pub node_populations: Vec<Vec<f64>>,
    /// `(first photon, second photon, accumulated probability)`.
    pub sinks: Vec<(Bath, Bath, Vec<f64>)>,
    pub norm: Vec<f64>,
    pub stats: OdeStats,
    /// Largest deviation seen by the tightened repeat run.
    pub discretization_error: Option<f64>,
}

impl OracleRun {
    pub fn trace(&self, label: impl Into<String>, values: Vec<f64>) -> ProbabilityTrace {
        ProbabilityTrace {
            label: label.into(),
            time_grid: self.times.clone(),
            values,
            params: self.params,
        }
    }

    /// Population of the node with this system state and emission record.
    pub fn node(&self, system: SystemState, emitted: &[Bath]) -> Option<Vec<f64>> {
        self.network
            .find(system, emitted)
            .map(|i| self.node_populations[i].clone())
    }

    /// Probability that the first photon went to `first` and the second to
    /// `second`.
    pub fn two_photon(&self, first: Bath, second: Bath) -> Vec<f64> {
        self.sinks
            .iter()
            .find(|s| s.0 == first && s.1 == second)
            .map(|s| s.2.clone())
            .unwrap_or_else(|| vec![0.0; self.times.len()])
    }

    /// Total population of nodes with at most one photon whose system state
    /// satisfies `pred`.
    pub fn population_where(&self, pred: impl Fn(SystemState) -> bool) -> Vec<f64> {
        let mut out = vec![0.0; self.times.len()];
        for (n, pops) in self.network.nodes.iter().zip(&self.node_populations) {
            if n.level() != Level::TwoPhoton && pred(n.system) {
                for (o, v) in out.iter_mut().zip(pops) {
                    *o += v;
                }
            }
        }
        out
    }

    fn max_deviation(&self, other: &OracleRun) -> f64 {
        self.node_populations
            .iter()
            .zip(&other.node_populations)
            .chain(self.sinks.iter().map(|s| &s.2).zip(other.sinks.iter().map(|s| &s.2)))
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn oracle_evolve(
    network: &StateNetwork,
    p: &SystemParams,
    cfg: &OracleConfig,
    times: &[f64],
) -> Result<OracleRun> {
    cfg.validate()?;
    check_time_grid(times)?;
    let dynamics = Dynamics::new(network, p)?;
    let mut run = single_run(network, p, &dynamics, cfg.tol, times)?;
    if cfg.convergence_doubling {
        let fine = single_run(network, p, &dynamics, cfg.tol * 1e-2, times)?;
        let deviation = run.max_deviation(&fine);
        if deviation > cfg.check_tolerance {
            return Err(Error::NonConvergedDiscretization {
                deviation,
                limit: cfg.check_tolerance,
            });
        }
        run.discretization_error = Some(deviation);
    }
    Ok(run)
}

fn single_run(
    network: &StateNetwork,
    p: &SystemParams,
    dynamics: &Dynamics,
    tol: f64,
    times: &[f64],
) -> Result<OracleRun> {
    let y0 = dynamics.initial_state(network.initial())?;
    let nn = network.nodes.len();
    let mut node_populations = vec![Vec::with_capacity(times.len()); nn];
    let mut sinks: Vec<(Bath, Bath, Vec<f64>)> = dynamics
        .sinks
        .iter()
        .map(|s| (s.first, s.second, vec![]))
        .collect();
    let mut norm = Vec::with_capacity(times.len());
    let opts = OdeOptions {
        tol,
        ..OdeOptions::default()
    };
    let stats = ode::integrate(
        |_, y, dy| dynamics.apply(y, dy),
        0.0,
        &y0,
        times,
        &opts,
        |_, y| {
            let pops = dynamics.populations(nn, y);
            let mut total = 0.0;
            for (n, v) in pops.iter().enumerate() {
                node_populations[n].push(*v);
                total += v;
            }
            for (s, d) in sinks.iter_mut().zip(&dynamics.sinks) {
                s.2.push(y[d.slot].re);
            }
            norm.push(total);
        },
    )?;
    Ok(OracleRun {
        network: network.clone(),
        params: *p,
        times: times.to_vec(),
        node_populations,
        sinks,
        norm,
        stats,
        discretization_error: None,
    })
}

/// Steady-state density of photons emitted into `bath` that leave the
/// system in `terminal`, at absolute photon frequencies `frequencies`.
///
/// Only networks whose one-photon nodes are terminal have a single-photon
/// spectrum; other networks are rejected.
pub fn oracle_spectrum(
    network: &StateNetwork,
    p: &SystemParams,
    cfg: &OracleConfig,
    bath: Bath,
    frequencies: &[f64],
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let dynamics = Dynamics::new(network, p)?;
    if network
        .nodes
        .iter()
        .any(|n| n.level() == Level::OnePhoton && !n.terminal)
    {
        return Err(Error::Precondition(
            "single-photon spectra need terminal one-photon nodes".into(),
        ));
    }
    let n0 = dynamics.system.len();
    // emitting nodes: (photonless index, amplitude, terminal energy)
    let mut emitters = vec![];
    for e in &network.edges {
        if let EdgeKind::Decay { bath: b, factor } = e.kind {
            if b == bath {
                let a = dynamics.position[e.from].ok_or_else(|| {
                    Error::Precondition("spectrum source must carry no photons".into())
                })?;
                emitters.push((
                    a,
                    factor * (rate(p, b) / (2.0 * PI)).sqrt(),
                    energy(p, network.nodes[e.to].system),
                ));
            }
        }
    }
    let terminal_energy = emitters.first().map(|e| e.2).unwrap_or(0.0);
    if emitters.iter().any(|e| (e.2 - terminal_energy).abs() > 0.0) {
        return Err(Error::Precondition(
            "emitters into one bath must share a final state".into(),
        ));
    }
    let nf = frequencies.len();
    let mut y = vec![C64::new(0.0, 0.0); n0 + nf];
    y[dynamics.position[network.initial()].expect("photonless initial node")] =
        C64::new(1.0, 0.0);
    let opts = OdeOptions {
        tol: cfg.tol,
        ..OdeOptions::default()
    };
    let small = Dynamics {
        families: vec![],
        sinks: vec![],
        len: n0,
        ..dynamics
    };
    let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
        small.apply(&y[..n0], &mut dy[..n0]);
        let mut src = C64::new(0.0, 0.0);
        for &(a, amp, _) in &emitters {
            src += amp * y[a];
        }
        for (k, w) in frequencies.iter().enumerate() {
            // mode in the frame rotating with the final state
            dy[n0 + k] = C64::new(0.0, (terminal_energy + w) * t).exp() * src;
        }
    };
    let mut t = 0.0;
    let chunk = 10.0;
    loop {
        let mut last = y.clone();
        ode::integrate(&rhs, t, &y, &[t + chunk], &opts, |_, yy| last.copy_from_slice(yy))?;
        y = last;
        t += chunk;
        let left: f64 = y[..n0].iter().map(|c| c.norm_sqr()).sum();
        if left < cfg.settle_population {
            break;
        }
        if t >= cfg.max_time {
            return Err(Error::IntegratorDivergence {
                time: t,
                reason: format!("system population {left:e} left at the time limit"),
            });
        }
    }
    Ok(y[n0..].iter().map(|a| a.norm_sqr()).collect())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_network, NetworkKind};
    use crate::trace::linspace;

    #[test]
    fn uncoupled_qubit_decays_exponentially() {
        let net = build_network(NetworkKind::TwoQubitSingle);
        let p = SystemParams::two_qubit(0.0, 1.0);
        let times = linspace(0.0, 10.0, 41);
        let run = oracle_evolve(&net, &p, &OracleConfig::default(), &times).unwrap();
        let surv = run.node(SystemState::new(true, false, 0), &[]).unwrap();
        for (t, v) in times.iter().zip(&surv) {
            assert!((v - (-t).exp()).abs() < 1e-7, "t={t}: {v}");
        }
        for n in &run.norm {
            assert!((n - 1.0).abs() < 1e-7, "{n}");
        }
    }

    #[test]
    fn tighter_tolerance_agrees() {
        let net = build_network(NetworkKind::TwoQubitDouble);
        let p = SystemParams {
            gamma2: 0.5,
            ..SystemParams::two_qubit(3.0, 1.0)
        };
        let cfg = OracleConfig {
            convergence_doubling: true,
            ..OracleConfig::default()
        };
        let run = oracle_evolve(&net, &p, &cfg, &linspace(0.0, 6.0, 25)).unwrap();
        assert!(run.discretization_error.unwrap() < 1e-6);
    }

    #[test]
    fn rejects_non_positive_tolerance() {
        let cfg = OracleConfig {
            tol: 0.0,
            ..OracleConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn free_emission_spectrum_is_lorentzian() {
        let net = build_network(NetworkKind::TwoQubitSingle);
        let p = SystemParams::two_qubit(0.0, 1.0);
        let w = [-1.0, 0.0, 0.5, 3.0];
        let s = oracle_spectrum(&net, &p, &OracleConfig::default(), Bath::B1, &w).unwrap();
        for (x, v) in w.iter().zip(&s) {
            let exact = 1.0 / (2.0 * PI) / (x * x + 0.25);
            assert!((v - exact).abs() < 1e-6 * exact, "{x}: {v} vs {exact}");
        }
    }
}
