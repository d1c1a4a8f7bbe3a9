//! Physical parameters and the quantities derived from them.
//!
//! Everything is dimensionless in units of the qubit-1 decay rate Γ₁.
//! Frequencies follow the frame in which the excited qubit states carry zero
//! energy, so a state with both qubits in the ground state sits at
//! `-(ω01 + ω02)` and an emitted photon adds its absolute frequency.

mod network;

pub use network::{
    build_network, Bath, Coupling, Edge, EdgeKind, Level, NetworkKind, NodeLabel, StateNetwork,
    SystemState,
};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the system, bath and coupling Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub omega01: f64,
    pub omega02: f64,
    pub omega_c: f64,
    pub g1: f64,
    pub g2: f64,
    pub g12: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega01: 0.0,
            omega02: 0.0,
            omega_c: 0.0,
            g1: 0.0,
            g2: 0.0,
            g12: 0.0,
            gamma1: 1.0,
            gamma2: 0.0,
            kappa: 0.0,
        }
    }
}

impl SystemParams {
    /// Two resonant qubits without a cavity.
    pub fn two_qubit(g12: f64, gamma2: f64) -> Self {
        Self {
            g12,
            gamma2,
            ..Self::default()
        }
    }

    /// Two resonant qubits inside a cavity.
    pub fn cavity(g1: f64, g2: f64, g12: f64, gamma2: f64, kappa: f64) -> Self {
        Self {
            g1,
            g2,
            g12,
            gamma2,
            kappa,
            ..Self::default()
        }
    }

    /// Sum of the bare qubit frequencies; detunings of emitted photons are
    /// measured from it.
    pub fn frame_offset(&self) -> f64 {
        self.omega01 + self.omega02
    }

    /// Largest magnitude among rates, couplings and detunings; sets the
    /// frequency scale of every spectral window.
    pub fn frequency_scale(&self) -> f64 {
        let rates = self.gamma1.max(self.gamma2).max(self.kappa);
        let couplings = self.g1.abs().max(self.g2.abs()).max(self.g12.abs());
        let detunings = (self.omega01 - self.omega02)
            .abs()
            .max((self.omega_c - self.omega01).abs())
            .max((self.omega_c - self.omega02).abs());
        rates.max(couplings).max(detunings)
    }

    /// The same system with the roles of qubit 1 and qubit 2 exchanged.
    pub fn swap_qubits(&self) -> Self {
        Self {
            omega01: self.omega02,
            omega02: self.omega01,
            g1: self.g2,
            g2: self.g1,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            ..*self
        }
    }

    /// Sets the field called `name`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "omega01" => &mut self.omega01,
            "omega02" => &mut self.omega02,
            "omega_c" => &mut self.omega_c,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "g12" => &mut self.g12,
            "gamma1" => &mut self.gamma1,
            "gamma2" => &mut self.gamma2,
            "kappa" => &mut self.kappa,
            _ => return Err(Error::Precondition(format!("unknown parameter `{name}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Field names and values in declaration order.
    pub fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("omega01", self.omega01),
            ("omega02", self.omega02),
            ("omega_c", self.omega_c),
            ("g1", self.g1),
            ("g2", self.g2),
            ("g12", self.g12),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("kappa", self.kappa),
        ]
    }
}

/// Combinations of [`SystemParams`] that appear throughout the closed forms.
///
/// The qubit detuning is stored in both directions because the two common
/// conventions disagree on its sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// ½(ω01 + ω02)
    pub omega0: f64,
    /// ½(Γ1 + Γ2)
    pub gamma_mean: f64,
    /// ω01 − ω02
    pub detuning_1_minus_2: f64,
    /// ω02 − ω01
    pub detuning_2_minus_1: f64,
    /// Γ1 − Γ2
    pub delta_gamma: f64,
    /// ωc − ω01
    pub cavity_detuning: f64,
}

impl DerivedParams {
    fn from_params(p: &SystemParams) -> Self {
        Self {
            omega0: 0.5 * (p.omega01 + p.omega02),
            gamma_mean: 0.5 * (p.gamma1 + p.gamma2),
            detuning_1_minus_2: p.omega01 - p.omega02,
            detuning_2_minus_1: p.omega02 - p.omega01,
            delta_gamma: p.gamma1 - p.gamma2,
            cavity_detuning: p.omega_c - p.omega01,
        }
    }
}

/// Checks the parameter invariants and returns the derived combinations.
pub fn validate_params(p: &SystemParams) -> Result<DerivedParams> {
    for (name, value) in p.fields() {
        if !value.is_finite() {
            return Err(Error::NonFinite { name });
        }
    }
    if p.gamma1 <= 0.0 {
        return Err(Error::NonPositiveUnitRate(p.gamma1));
    }
    if p.gamma2 < 0.0 {
        return Err(Error::NegativeRate {
            name: "gamma2",
            value: p.gamma2,
        });
    }
    if p.kappa < 0.0 {
        return Err(Error::NegativeRate {
            name: "kappa",
            value: p.kappa,
        });
    }
    Ok(DerivedParams::from_params(p))
}

/// Which closed-form family a [`DressedPair`] belongs to. The same ω± symbol
/// denotes different quantities in different formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairVariant {
    /// Single-excitation dressed frequencies of the two-qubit system.
    SingleExcitation,
    /// Two-qubit single-excitation sector shifted by an emitted photon of
    /// absolute frequency `emission_frequency` from `channel`.
    Shifted {
        channel: EmitterChannel,
        emission_frequency: f64,
    },
    /// Qubit-2/cavity block entering the cavity characteristic cubic.
    Qubit2Cavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitterChannel {
    Qubit1,
    Qubit2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub plus: C64,
    pub minus: C64,
    pub variant: PairVariant,
}

impl DressedPair {
    /// Orders two roots: larger real part is `plus`, ties go to the larger
    /// imaginary part.
    pub fn labeled(a: C64, b: C64, variant: PairVariant) -> Self {
        let a_first = match a.re.partial_cmp(&b.re) {
            Some(std::cmp::Ordering::Greater) => true,
            Some(std::cmp::Ordering::Less) => false,
            _ => a.im >= b.im,
        };
        let (plus, minus) = if a_first { (a, b) } else { (b, a) };
        Self {
            plus,
            minus,
            variant,
        }
    }

    pub fn splitting(&self) -> C64 {
        self.plus - self.minus
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.plus, self.minus]
    }
}

/// Dressed eigenfrequencies of the single-excitation two-qubit sector.
pub fn dressed_pair_single(p: &SystemParams) -> DressedPair {
    let i = C64::i();
    let center = -(i * p.gamma1 / 2.0 + i * p.gamma2 / 2.0 + p.omega01 + p.omega02);
    let inner = i * p.gamma1 / 2.0 - i * p.gamma2 / 2.0 + p.omega02 - p.omega01;
    let root = (inner * inner + 4.0 * p.g12 * p.g12).sqrt();
    DressedPair::labeled(
        0.5 * (center + root),
        0.5 * (center - root),
        PairVariant::SingleExcitation,
    )
}

/// Dressed frequencies of the single-excitation sector after one photon of
/// absolute frequency `emission_frequency` has left through `channel`.
///
/// Both channels share the same expression; the channel only records which
/// photon fixes the shift.
pub fn dressed_pair_double(
    p: &SystemParams,
    channel: EmitterChannel,
    emission_frequency: f64,
) -> DressedPair {
    let d = DerivedParams::from_params(p);
    let i = C64::i();
    let inner = d.detuning_1_minus_2 - i * d.delta_gamma / 2.0;
    let root = (4.0 * p.g12 * p.g12 + inner * inner).sqrt();
    let center = emission_frequency - d.omega0 - i * d.gamma_mean / 2.0;
    DressedPair::labeled(
        center + 0.5 * root,
        center - 0.5 * root,
        PairVariant::Shifted {
            channel,
            emission_frequency,
        },
    )
}

/// Emitted-photon detunings measured from `ω01 + ω02`, together with the
/// two-photon total `T = ω1 + ω2 − ω01 − ω02`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmissionDetunings {
    pub delta1: f64,
    pub delta1_prime: f64,
    pub delta2: f64,
    pub delta2_prime: f64,
    pub delta_r: f64,
    pub t_sum: f64,
}

impl EmissionDetunings {
    /// Builds the detunings from absolute photon frequencies
    /// `[ω1, ω1', ω2, ω2', ωr]`.
    pub fn from_frequencies(p: &SystemParams, freqs: [f64; 5]) -> Self {
        let s = p.frame_offset();
        Self {
            delta1: freqs[0] - s,
            delta1_prime: freqs[1] - s,
            delta2: freqs[2] - s,
            delta2_prime: freqs[3] - s,
            delta_r: freqs[4] - s,
            t_sum: freqs[0] + freqs[2] - s,
        }
    }

    /// Absolute frequencies `[ω1, ω1', ω2, ω2', ωr]`.
    pub fn frequencies(&self, p: &SystemParams) -> [f64; 5] {
        let s = p.frame_offset();
        [
            self.delta1 + s,
            self.delta1_prime + s,
            self.delta2 + s,
            self.delta2_prime + s,
            self.delta_r + s,
        ]
    }
}
