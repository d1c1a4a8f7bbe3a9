//! Cross-checks the closed-form single-excitation probabilities against a
//! direct integration of the amplitude equations.

use cqed::model::{build_network, Bath, NetworkKind, SystemState};
use cqed::oracle::{oracle_evolve, OracleConfig};
use cqed::trace::linspace;
use cqed::two_qubit_single::{p_exchg, p_surv};
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let p = SystemParams::two_qubit(5.0, 0.5);
    let times = linspace(0.0, 10.0, 41);
    let network = build_network(NetworkKind::TwoQubitSingle);
    print!("{}", network.render());
    let run = oracle_evolve(&network, &p, &OracleConfig::default(), &times)?;

    let e1 = run.node(SystemState::new(true, false, 0), &[]).unwrap();
    let e2 = run.node(SystemState::new(false, true, 0), &[]).unwrap();
    let mut worst = 0.0f64;
    for (i, &t) in times.iter().enumerate() {
        worst = worst
            .max((e1[i] - p_surv(&p, t)?).abs())
            .max((e2[i] - p_exchg(&p, t)?).abs());
    }
    let ground = |b| run.node(SystemState::new(false, false, 0), &[b]).unwrap();
    println!("largest deviation {worst:.2e}");
    println!(
        "photon through qubit 1 {:.6}, through qubit 2 {:.6}, norm {:.9}",
        ground(Bath::B1).last().unwrap(),
        ground(Bath::B2).last().unwrap(),
        run.norm.last().unwrap()
    );
    Ok(())
}
