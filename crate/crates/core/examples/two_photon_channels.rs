//! Which qubits emit the two photons once both start excited.
//!
//! `em11` means both photons leave through qubit 1, `em22` through qubit 2,
//! and `total12` one through each.

use cqed::numerics::{Horizon, QuadratureSpec};
use cqed::trace::logspace;
use cqed::two_qubit_double::{dominance_map, p_two_photon, TwoPhotonChannel};
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let specs = QuadratureSpec::two_dimensional();
    for (gamma2, g12) in [(0.2, 0.05), (15.0, 0.05), (8.0, 8.0)] {
        let r = p_two_photon(&SystemParams::two_qubit(g12, gamma2), Horizon::Steady, &specs)?;
        println!(
            "gamma2 = {gamma2:5.2} g12 = {g12:5.2}: em11 {:.4} em22 {:.4} em12 {:.4} em21 {:.4} -> {:?}",
            r.p_em11, r.p_em22, r.p_em12, r.p_em21, r.dominant
        );
    }

    let gamma2 = logspace(0.1, 20.0, 12);
    let g12 = logspace(0.05, 10.0, 8);
    let map = dominance_map(&SystemParams::two_qubit(0.0, 1.0), &gamma2, &g12, &specs)?;
    println!("\ndominant channel, rows g12 (top = largest), columns gamma2 0.1 to 20");
    for (j, row) in map.tags().iter().enumerate().rev() {
        let cells: String = row
            .iter()
            .map(|c| match c {
                TwoPhotonChannel::Em11 => '1',
                TwoPhotonChannel::Em22 => '2',
                TwoPhotonChannel::Total12 => 'x',
            })
            .collect();
        println!("{:7.3} {cells}", map.g12[j]);
    }
    Ok(())
}
