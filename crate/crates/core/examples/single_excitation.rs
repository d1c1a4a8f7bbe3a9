//! Qubit 1 starts excited, qubit 2 in its ground state.
//!
//! Prints where the excitation sits over time and where the photon finally
//! leaves, for a weak and a strong dipole coupling.

use cqed::numerics::{Horizon, QuadratureSpec};
use cqed::trace::linspace;
use cqed::two_qubit_single::{evolve, p_em2_total, p_se_total};
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let spec = QuadratureSpec::default();
    let times = linspace(0.0, 8.0, 9);
    for g12 in [0.5, 5.0] {
        let p = SystemParams::two_qubit(g12, 0.5);
        let tr = evolve(&p, &times, &spec)?;
        println!("g12 = {g12}, gamma2 = {}", p.gamma2);
        println!("{:>5} {:>9} {:>9} {:>9} {:>9}", "t", "surv", "exchg", "se", "em2");
        for (i, t) in times.iter().enumerate() {
            println!(
                "{t:5.1} {:9.5} {:9.5} {:9.5} {:9.5}",
                tr.surv.values[i], tr.exchg.values[i], tr.se.values[i], tr.em2.values[i]
            );
        }
        let se = p_se_total(&p, Horizon::Steady, &spec)?;
        let em2 = p_em2_total(&p, Horizon::Steady, &spec)?;
        println!("steady state: se = {se:.6}, em2 = {em2:.6}, sum = {:.6}\n", se + em2);
    }
    Ok(())
}
