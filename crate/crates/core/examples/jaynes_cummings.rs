//! One qubit in a lossy cavity.
//!
//! With the cavity empty the closed two-qubit formulas apply after
//! relabelling. With one photon already inside, the state network is
//! integrated numerically.

use cqed::jaynes_cummings::{evolve_jcm_two_excitation, map_single_excitation_jcm};
use cqed::trace::linspace;
use cqed::two_qubit_single::p_surv;
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let (g, kappa) = (2.0, 0.1);
    let times = linspace(0.0, 6.0, 13);
    let empty = map_single_excitation_jcm(g, kappa, 1.0, 0.0)?;
    let loaded = evolve_jcm_two_excitation(&SystemParams::jcm(g, kappa), &times, 1e-9)?;
    println!("{:>5} {:>12} {:>12} {:>12}", "t", "empty cavity", "one photon", "free space");
    for (i, &t) in times.iter().enumerate() {
        println!(
            "{t:5.1} {:12.6} {:12.6} {:12.6}",
            p_surv(&empty, t)?,
            loaded.survival.values[i],
            loaded.free_space.values[i]
        );
    }
    println!("integrator error estimate {:.1e}", loaded.error_estimate);
    Ok(())
}
