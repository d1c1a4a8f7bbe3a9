//! Two qubits and a lossy cavity: qubit 1 starts excited and the photon
//! leaves through qubit 1, qubit 2 or the cavity mirror.

use cqed::numerics::{Horizon, QuadratureSpec};
use cqed::tavis_cummings::{decay_route_map, p_channels, TcmChannel};
use cqed::trace::linspace;
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let spec = QuadratureSpec::default();
    let p = SystemParams::cavity(1.0, 1.0, 0.5, 1.0, 1.0);
    let c = p_channels(&p, Horizon::Steady, &spec)?;
    println!(
        "steady state: em1 {:.5} emx2 {:.5} emr {:.5} (sum {:.6})",
        c.p_em1,
        c.p_emx2,
        c.p_emr,
        c.sum()
    );

    // Γ2 follows κ across the map
    let kappa = linspace(0.2, 6.0, 15);
    let g2 = linspace(0.0, 6.0, 13);
    for g1 in [1.0, 3.0] {
        let base = SystemParams { g1, ..p };
        let map = decay_route_map(&base, &kappa, &g2, &spec)?;
        println!(
            "g1 = {g1}: smallest em1 over the map {:.4}, smallest emr {:.4}",
            map.min(TcmChannel::Em1),
            map.min(TcmChannel::Emr)
        );
    }
    Ok(())
}
