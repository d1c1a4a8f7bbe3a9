pub mod error;
pub mod jaynes_cummings;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod parallel;
pub mod scenario;
pub mod spectra;
pub mod tavis_cummings;
pub mod trace;
pub mod two_qubit_double;
pub mod two_qubit_single;

pub use error::{Error, Result};
pub use model::SystemParams;
pub use trace::{ProbabilityTrace, SpectrumTrace};
