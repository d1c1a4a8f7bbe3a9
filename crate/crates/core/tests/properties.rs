use cqed::model::{build_network, dressed_pair_single, EdgeKind, NetworkKind};
use cqed::numerics::{solve_cubic, Horizon, QuadratureSpec};
use cqed::oracle::{oracle_evolve, OracleConfig};
use cqed::spectra::{raman_spectrum, PulseSpec};
use cqed::tavis_cummings::{p_channels, p_surv_tcm};
use cqed::two_qubit_double::p_two_photon;
use cqed::two_qubit_single::{p_em2_total, p_exchg, p_se_total, p_surv};
use cqed::SystemParams;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn rate() -> impl Strategy<Value = f64> {
    0.0..10.0f64
}

fn detuning() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn two_qubits() -> impl Strategy<Value = SystemParams> {
    (rate(), rate(), 0.2..5.0f64, detuning()).prop_map(|(g12, gamma2, gamma1, d)| SystemParams {
        g12,
        gamma1,
        gamma2,
        omega02: d,
        ..SystemParams::default()
    })
}

fn cavity() -> impl Strategy<Value = SystemParams> {
    (rate(), rate(), rate(), 0.1..10.0f64, 0.1..10.0f64).prop_map(|(g1, g2, g12, gamma2, kappa)| {
        SystemParams::cavity(g1, g2, g12, gamma2, kappa)
    })
}

fn eigenvalues(a: C64, b: C64, c: C64) -> [C64; 2] {
    // [[a, c], [c, b]]
    let mean = (a + b) / 2.0;
    let root = (((a - b) / 2.0).powi(2) + c * c).sqrt();
    [mean + root, mean - root]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dressed_states_decay(p in two_qubits()) {
        let pair = dressed_pair_single(&p);
        for w in pair.as_array() {
            prop_assert!(w.im <= 1e-12, "{w}");
        }
    }

    #[test]
    fn dressed_states_are_eigenvalues(p in two_qubits()) {
        // qubit 1 excited sits at −ω02 and qubit 2 excited at −ω01
        let a = C64::new(-p.omega02, -p.gamma1 / 2.0);
        let b = C64::new(-p.omega01, -p.gamma2 / 2.0);
        let want = eigenvalues(a, b, C64::new(p.g12, 0.0));
        let got = dressed_pair_single(&p).as_array();
        let scale = 1.0 + want[0].norm().max(want[1].norm());
        let direct = (got[0] - want[0]).norm().max((got[1] - want[1]).norm());
        let swapped = (got[0] - want[1]).norm().max((got[1] - want[0]).norm());
        prop_assert!(direct.min(swapped) <= 1e-12 * scale, "{got:?} vs {want:?}");
    }

    #[test]
    fn single_excitation_is_complete(p in two_qubits(), t in 0.0..10.0f64) {
        let spec = QuadratureSpec::default();
        let total = p_surv(&p, t).unwrap()
            + p_exchg(&p, t).unwrap()
            + p_se_total(&p, Horizon::At(t), &spec).unwrap()
            + p_em2_total(&p, Horizon::At(t), &spec).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-5, "sum {total}");
    }

    #[test]
    fn system_population_only_leaks(p in two_qubits(), t in 0.0..10.0f64, dt in 0.001..1.0f64) {
        let left = |t| p_surv(&p, t).unwrap() + p_exchg(&p, t).unwrap();
        prop_assert!(left(t + dt) <= left(t) + 1e-12);
    }

    #[test]
    fn probabilities_are_bounded(p in two_qubits(), t in 0.0..10.0f64) {
        let spec = QuadratureSpec::default();
        for v in [
            p_surv(&p, t).unwrap(),
            p_exchg(&p, t).unwrap(),
            p_se_total(&p, Horizon::At(t), &spec).unwrap(),
            p_em2_total(&p, Horizon::At(t), &spec).unwrap(),
        ] {
            prop_assert!((-1e-9..=1.0 + 1e-6).contains(&v), "{v}");
        }
    }

    #[test]
    fn degeneracy_is_continuous(gamma2 in 0.0..8.0f64, t in 0.1..8.0f64, side in -1.0..1.0f64) {
        // the dressed pair merges at g12 = |Γ1 − Γ2|/4
        let critical = (1.0 - gamma2).abs() / 4.0;
        let at = |g12: f64| p_surv(&SystemParams::two_qubit(g12, gamma2), t).unwrap();
        let near = at(critical + side * 1e-9);
        let off = at(critical + side * 1e-6);
        prop_assert!((near - off).abs() < 1e-5, "{near} vs {off}");
    }

    #[test]
    fn two_photon_channels_swap_with_qubits(g12 in 0.0..6.0f64, gamma2 in 0.2..6.0f64) {
        let specs = QuadratureSpec::two_dimensional();
        let p = SystemParams::two_qubit(g12, gamma2);
        let a = p_two_photon(&p, Horizon::Steady, &specs).unwrap();
        let b = p_two_photon(&p.swap_qubits(), Horizon::Steady, &specs).unwrap();
        let tol = 1e-6;
        prop_assert!((a.p_em11 - b.p_em22).abs() < tol);
        prop_assert!((a.p_em22 - b.p_em11).abs() < tol);
        prop_assert!((a.p_em12 - b.p_em21).abs() < tol);
        prop_assert!((a.sum() - 1.0).abs() < 2e-4, "sum {}", a.sum());
    }

    #[test]
    fn cavity_steady_state_is_complete(p in cavity()) {
        let c = p_channels(&p, Horizon::Steady, &QuadratureSpec::default()).unwrap();
        prop_assert!((c.sum() - 1.0).abs() < 1e-5, "sum {}", c.sum());
    }

    #[test]
    fn qubit2_and_cavity_are_interchangeable(g in 0.1..5.0f64, g2 in rate(), rate in 0.1..5.0f64) {
        let p = SystemParams::cavity(g, g2, g, rate, rate);
        let spec = QuadratureSpec::default();
        let c = p_channels(&p, Horizon::At(2.0), &spec).unwrap();
        prop_assert!((c.p_emx2 - c.p_emr).abs() < 1e-6, "{} vs {}", c.p_emx2, c.p_emr);
        let q = SystemParams { g1: g * 1.5, ..p };
        let swapped = SystemParams { g12: g * 1.5, g1: g, ..p };
        let a = p_surv_tcm(&q, 1.3).unwrap();
        let b = p_surv_tcm(&swapped, 1.3).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn arrival_time_drops_out(tau in -20.0..20.0f64, delta1 in -4.0..4.0f64) {
        let p = SystemParams {
            omega_c: 2.0,
            kappa: 0.1,
            gamma2: 1.0,
            g1: 1.0,
            g12: 3.0,
            ..SystemParams::default()
        };
        let grid = cqed::trace::linspace(-10.0, 10.0, 801);
        let base = raman_spectrum(&p, &PulseSpec::new(delta1), &grid).unwrap();
        let moved = PulseSpec { arrival_time: tau, ..PulseSpec::new(delta1) };
        prop_assert_eq!(base.values, raman_spectrum(&p, &moved, &grid).unwrap().values);
    }

    #[test]
    fn oracle_conserves_norm(p in two_qubits()) {
        let times = cqed::trace::linspace(0.0, 5.0, 11);
        for kind in [NetworkKind::TwoQubitSingle, NetworkKind::TwoQubitDouble] {
            let run = oracle_evolve(&build_network(kind), &p, &OracleConfig::default(), &times).unwrap();
            for n in &run.norm {
                prop_assert!((n - 1.0).abs() < 1e-6, "{kind:?} norm {n}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn cubic_roots_have_small_backward_error(
        c in prop::array::uniform8(-1e3..1e3f64),
    ) {
        let z = |i: usize| C64::new(c[2 * i], c[2 * i + 1]);
        prop_assume!(z(3).norm() > 1e-6);
        let r = solve_cubic(z(3), z(2), z(1), z(0)).unwrap();
        prop_assert!(r.residual <= 1e-10, "residual {}", r.residual);
    }
}

#[test]
fn networks_conserve_excitations() {
    for kind in NetworkKind::ALL {
        let net = build_network(kind);
        let start = net.nodes[net.initial()].excitations();
        for node in &net.nodes {
            assert_eq!(node.excitations(), start, "{kind:?} {node}");
            assert_eq!(node.terminal, node.system.is_ground(), "{kind:?} {node}");
        }
        for e in &net.edges {
            let (from, to) = (&net.nodes[e.from], &net.nodes[e.to]);
            match e.kind {
                EdgeKind::Coupling { .. } => {
                    assert_eq!(from.emitted, to.emitted);
                    assert_eq!(from.system.excitations(), to.system.excitations());
                }
                EdgeKind::Decay { .. } => {
                    assert_eq!(to.emitted.len(), from.emitted.len() + 1);
                    assert!(to.system.excitations() < from.system.excitations());
                }
            }
        }
    }
}
