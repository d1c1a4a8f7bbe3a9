//! Both qubits start excited.

use cqed::numerics::QuadratureSpec;
use cqed::trace::linspace;
use cqed::two_qubit_double::evolve;
use cqed::SystemParams;

fn main() -> cqed::Result<()> {
    let p = SystemParams::two_qubit(1.0, 2.0);
    let times = linspace(0.0, 6.0, 13);
    let tr = evolve(&p, &times, &QuadratureSpec::default())?;
    println!("{:>5} {:>9} {:>9} {:>9} {:>9}", "t", "surv_ee", "em2", "emx1", "total1");
    for (i, t) in times.iter().enumerate() {
        println!(
            "{t:5.1} {:9.5} {:9.5} {:9.5} {:9.5}",
            tr.surv.values[i], tr.em2.values[i], tr.emx1.values[i], tr.total.values[i]
        );
    }
    Ok(())
}
