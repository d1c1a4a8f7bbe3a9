//! Emission spectrum of the exchanged photon and the Raman spectrum for a
//! Gaussian input pulse, with a peak summary of each.

use cqed::spectra::{exchange_emission_spectrum, peak_report, raman_spectrum, PulseSpec};
use cqed::trace::linspace;
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let p = SystemParams {
        omega_c: 2.0,
        kappa: 0.1,
        gamma2: 1.0,
        g1: 1.0,
        g12: 5.0,
        ..SystemParams::default()
    };
    let grid = linspace(-10.0, 10.0, 4001);

    let exchange = exchange_emission_spectrum(&p, &grid)?;
    println!("exchange emission, g12 = {}", p.g12);
    for peak in peak_report(&exchange)? {
        println!(
            "  peak at {:7.3}  height {:.4}  fwhm {:.3}  asymmetry {:.2}",
            peak.location, peak.height, peak.fwhm, peak.asymmetry
        );
    }

    for delta1 in [0.0, 2.0] {
        let s = raman_spectrum(&p, &PulseSpec::new(delta1), &grid)?;
        println!("raman, excitation detuning {delta1}: maximum at {:.3}", s.argmax().unwrap());
    }
    Ok(())
}
