//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cqed::model::{build_network, Bath, NetworkKind, SystemState};
use cqed::numerics::{
    integrate, residue_sum, solve_cubic, Horizon, Poly, QuadratureSpec, DEFAULT_DEGENERACY_TOL,
};
use cqed::oracle::{oracle_evolve, OracleConfig};
use cqed::spectra::{
    exchange_emission_spectrum, peak_report, raman_product_spectrum, raman_spectrum, PulseSpec,
};
use cqed::tavis_cummings::{self, decay_route_map, p_channels, TcmChannel};
use cqed::trace::{linspace, logspace};
use cqed::two_qubit_double::{dominance_map, p_total_qubit1, p_two_photon, TwoPhotonChannel};
use cqed::{jaynes_cummings, two_qubit_single, SystemParams};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn require(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn oracle_equivalence() -> Outcome {
    let sets = [
        ("2a g12=0.5", SystemParams::two_qubit(0.5, 10.0)),
        ("2a g12=5", SystemParams::two_qubit(5.0, 10.0)),
        ("2b g12=0.5", SystemParams::two_qubit(0.5, 0.5)),
        ("2b g12=5", SystemParams::two_qubit(5.0, 0.5)),
        ("3b", SystemParams::two_qubit(0.5, 3.0)),
        ("3c", SystemParams::two_qubit(5.0, 3.0)),
    ];
    let times = linspace(0.0, 10.0, 101);
    let net = build_network(NetworkKind::TwoQubitSingle);
    let e1g2 = SystemState::new(true, false, 0);
    let g1e2 = SystemState::new(false, true, 0);
    let g1g2 = SystemState::new(false, false, 0);
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (name, p) in sets {
        let start = Instant::now();
        let closed = two_qubit_single::evolve(&p, &times, &QuadratureSpec::default())
            .map_err(|e| format!("{name}: {e}"))?;
        let run = oracle_evolve(&net, &p, &OracleConfig::default(), &times)
            .map_err(|e| format!("{name}: {e}"))?;
        let node = |s, b: &[Bath]| run.node(s, b).expect("node in network");
        let dev = [
            sup(&closed.surv.values, &node(e1g2, &[])),
            sup(&closed.exchg.values, &node(g1e2, &[])),
            sup(&closed.se.values, &node(g1g2, &[Bath::B1])),
            sup(&closed.em2.values, &node(g1g2, &[Bath::B2])),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let elapsed = start.elapsed();
        if dev > 1e-3 || elapsed > Duration::from_secs(60) {
            return Err(format!("{name}: deviation {dev:.2e}, {elapsed:?}"));
        }
        worst = worst.max(dev);
        slowest = slowest.max(elapsed);
    }
    Ok(format!("worst deviation {worst:.2e}, slowest set {slowest:.2?}"))
}

fn sum_rules() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = QuadratureSpec::default();
    let times = linspace(0.0, 10.0, 20);
    let mut single: f64 = 0.0;
    for _ in 0..50 {
        let p = SystemParams::two_qubit(rng.gen_range(0.0..=10.0), rng.gen_range(0.0..=10.0));
        let tr = two_qubit_single::evolve(&p, &times, &spec).map_err(|e| e.to_string())?;
        for i in 0..times.len() {
            let total = tr.surv.values[i] + tr.exchg.values[i] + tr.se.values[i] + tr.em2.values[i];
            single = single.max((total - 1.0).abs());
        }
    }
    let mut tcm: f64 = 0.0;
    for _ in 0..50 {
        let p = SystemParams::cavity(
            rng.gen_range(0.0..=10.0),
            rng.gen_range(0.0..=10.0),
            rng.gen_range(0.0..=10.0),
            rng.gen_range(0.1..=10.0),
            rng.gen_range(0.1..=10.0),
        );
        let c = p_channels(&p, Horizon::Steady, &spec).map_err(|e| e.to_string())?;
        tcm = tcm.max((c.sum() - 1.0).abs());
    }
    let mut double: f64 = 0.0;
    let specs = QuadratureSpec::two_dimensional();
    for _ in 0..50 {
        let p = SystemParams::two_qubit(rng.gen_range(0.0..=10.0), rng.gen_range(0.1..=10.0));
        let r = p_two_photon(&p, Horizon::Steady, &specs).map_err(|e| e.to_string())?;
        double = double.max((r.sum() - 1.0).abs());
    }
    require(
        single <= 1e-3 && tcm <= 2e-3 && double <= 2e-2,
        format!("max |sum - 1|: single {single:.1e}, cavity {tcm:.1e}, two-photon {double:.1e}"),
    )
}

fn identical_qubits() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for g12 in [0.5, 5.0] {
        let p = SystemParams::two_qubit(g12, 1.0);
        for t in linspace(0.0, 5.0, 51) {
            let v = p_total_qubit1(&p, t, &spec).map_err(|e| e.to_string())?;
            worst = worst.max((v - (-t).exp()).abs());
        }
    }
    require(worst <= 2e-3, format!("max |P_total - e^-t| = {worst:.1e}"))
}

fn dominance() -> Outcome {
    let specs = QuadratureSpec::two_dimensional();
    let cases = [
        (6.0, 0.1, TwoPhotonChannel::Em11),
        (8.0, 15.0, TwoPhotonChannel::Em22),
        (1.0, 10.0, TwoPhotonChannel::Total12),
    ];
    for (g12, gamma2, want) in cases {
        let r = p_two_photon(&SystemParams::two_qubit(g12, gamma2), Horizon::Steady, &specs)
            .map_err(|e| e.to_string())?;
        if r.dominant != want {
            return Err(format!("(g12={g12}, Γ2={gamma2}) dominated by {}", r.dominant.name()));
        }
    }
    // "small g12" sits below both decay rates
    let map = dominance_map(&SystemParams::default(), &[0.1, 20.0], &[0.05, 10.0], &specs)
        .map_err(|e| e.to_string())?;
    let tags = map.tags();
    let table = [
        [TwoPhotonChannel::Total12, TwoPhotonChannel::Total12],
        [TwoPhotonChannel::Em11, TwoPhotonChannel::Em22],
    ];
    let names = |t: &Vec<Vec<TwoPhotonChannel>>| {
        t.iter()
            .map(|r| r.iter().map(|c| c.name()).collect::<Vec<_>>().join("/"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let want: Vec<Vec<_>> = table.iter().map(|r| r.to_vec()).collect();
    require(tags == want, format!("three captions agree; corners {}", names(&tags)))
}

fn in_text_minima() -> Outcome {
    let kappa = logspace(0.1, 20.0, 41);
    let g2 = linspace(0.0, 15.0, 31);
    let mut mins = Vec::new();
    for (g, want) in [(1.0, 0.45), (3.0, 0.2)] {
        let base = SystemParams {
            g1: g,
            g12: g,
            ..SystemParams::default()
        };
        let map = decay_route_map(&base, &kappa, &g2, &QuadratureSpec::default())
            .map_err(|e| e.to_string())?;
        let m = map.min(TcmChannel::Em1);
        mins.push((g, m, (m - want).abs() <= 0.05));
    }
    let detail = mins
        .iter()
        .map(|(g, m, _)| format!("g={g}: min P_em1 {m:.3}"))
        .collect::<Vec<_>>()
        .join(", ");
    require(mins.iter().all(|m| m.2), detail)
}

fn purcell() -> Outcome {
    let spec = QuadratureSpec::default();
    let times = linspace(0.0, 10.0, 201);
    for g12 in [0.5, 5.0] {
        let p = SystemParams::two_qubit(g12, 0.5);
        let exceeds = times
            .iter()
            .any(|&t| two_qubit_single::p_surv(&p, t).unwrap() > (-t).exp());
        if !exceeds {
            return Err(format!("good-atom g12={g12}: never above free space"));
        }
        let p = SystemParams::two_qubit(g12, 10.0);
        let below = times
            .iter()
            .filter(|&&t| t > 0.0 && t <= 1.0)
            .all(|&t| two_qubit_single::p_surv(&p, t).unwrap() < (-t).exp());
        if !below {
            return Err(format!("bad-atom g12={g12}: not below free space on (0, 1]"));
        }
    }
    let mut distances = Vec::new();
    for g2 in [0.0, 5.0, 15.0] {
        let p = SystemParams::cavity(5.0, g2, 5.0, 1.0, 1.0);
        let tr = tavis_cummings::evolve(&p, &times, &spec).map_err(|e| e.to_string())?;
        distances.push(tr.surv.sup_distance(&tr.free_space));
    }
    if !distances.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("free-space distance along g2 not decreasing: {distances:?}"));
    }
    let jcm = jaynes_cummings::evolve_jcm_two_excitation(&SystemParams::jcm(2.0, 0.1), &times, 1e-9)
        .map_err(|e| e.to_string())?;
    let signs: Vec<f64> = jcm
        .survival
        .values
        .iter()
        .zip(&jcm.free_space.values)
        .map(|(s, f)| s - f)
        .filter(|d| d.abs() > 1e-9)
        .collect();
    let crossings: Vec<bool> = signs
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .map(|w| w[0] < 0.0)
        .collect();
    require(
        crossings == [true],
        format!(
            "distances {:.3}/{:.3}/{:.3}; cavity-photon crossings {}",
            distances[0],
            distances[1],
            distances[2],
            crossings.len()
        ),
    )
}

fn spectra() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let raman_params = SystemParams {
        omega_c: 2.0,
        kappa: 0.01,
        gamma2: 1.0,
        g1: 1.0,
        g12: 5.0,
        ..SystemParams::default()
    };
    let grid = cqed::spectra::default_grid(&raman_params);
    let mut product_err: f64 = 0.0;
    for delta1 in [2.0, 4.0] {
        let ps = PulseSpec::new(delta1);
        let a = raman_spectrum(&raman_params, &ps, &grid).map_err(|e| e.to_string())?;
        let b = raman_product_spectrum(&raman_params, &ps, &grid).map_err(|e| e.to_string())?;
        let peak = a.values.iter().cloned().fold(0.0, f64::max);
        for (x, y) in a.values.iter().zip(&b.values) {
            if *x > 1e-12 * peak {
                product_err = product_err.max((x - y).abs() / x);
            }
        }
        let shifted = PulseSpec {
            arrival_time: 3.7,
            ..ps
        };
        let c = raman_spectrum(&raman_params, &shifted, &grid).map_err(|e| e.to_string())?;
        if c.values != a.values {
            ok = false;
            notes.push(format!("Δ1={delta1}: arrival time changes the spectrum"));
        }
    }
    ok &= product_err <= 1e-9;
    notes.push(format!("product identity {product_err:.1e}"));

    let a = raman_spectrum(&raman_params, &PulseSpec::new(2.0), &grid).map_err(|e| e.to_string())?;
    let argmax = a.argmax().unwrap_or(f64::NAN);
    let dc = raman_params.omega_c - raman_params.omega02;
    let near = (argmax - dc).abs() <= 3.0 * raman_params.kappa;
    ok &= near;
    notes.push(format!("10(a) argmax {argmax:.3} vs Δc {dc} (limit ±{:.2})", 3.0 * raman_params.kappa));

    let exchange = |g12: f64| {
        let p = SystemParams {
            omega_c: 2.0,
            kappa: 0.01,
            gamma2: 1.0,
            g1: 1.0,
            g12,
            ..SystemParams::default()
        };
        let s = exchange_emission_spectrum(&p, &cqed::spectra::default_grid(&p))?;
        peak_report(&s)
    };
    let three = exchange(1.0).map_err(|e| e.to_string())?;
    ok &= three.len() == 3;
    notes.push(format!("9(a) g12=1 peaks {}", three.len()));
    let split = exchange(5.0).map_err(|e| e.to_string())?;
    let has = |x: f64| split.iter().any(|p| (p.location - x).abs() <= 0.1 * x.abs());
    let rabi = has(5.0) && has(-5.0);
    ok &= rabi;
    notes.push(format!(
        "g12=5 peaks at {:?}",
        split.iter().map(|p| (p.location * 100.0).round() / 100.0).collect::<Vec<_>>()
    ));
    require(ok, notes.join("; "))
}

fn numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut c = || C64::new(rng.gen_range(-1e3..=1e3), rng.gen_range(-1e3..=1e3));
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let r = solve_cubic(c(), c(), c(), c()).map_err(|e| e.to_string())?;
        worst = worst.max(r.residual);
    }
    let numer = Poly::linear(C64::new(0.3, -0.2), C64::new(1.0, 0.0));
    let base = C64::new(0.7, -0.9);
    let other = C64::new(-1.1, -0.4);
    let mut jump: f64 = 0.0;
    for t in [0.5, 3.0, 9.0] {
        let at = |sep: f64| residue_sum(&numer, &[base, base + sep, other], t, DEFAULT_DEGENERACY_TOL);
        let inside = at(0.5 * DEFAULT_DEGENERACY_TOL);
        let outside = at(2.0 * DEFAULT_DEGENERACY_TOL);
        jump = jump.max((inside - outside).norm());
    }
    let gamma = 0.3;
    let lorentz = integrate(
        |x| gamma / (2.0 * std::f64::consts::PI) / (x * x + gamma * gamma / 4.0),
        &[(0.0, gamma)],
        &QuadratureSpec::default(),
    )
    .map_err(|e| e.to_string())?;
    let unit = (lorentz.value - 1.0).abs();
    require(
        worst <= 1e-10 && jump <= 1e-6 && unit <= 1e-4,
        format!("cubic residual {worst:.1e}, guard jump {jump:.1e}, Lorentzian area error {unit:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("normalization sum rules", sum_rules),
        ("identical qubits", identical_qubits),
        ("two-photon dominance", dominance),
        ("decay-route minima", in_text_minima),
        ("Purcell phenomenology", purcell),
        ("spectra", spectra),
        ("numerics", numerics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{elapsed:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
