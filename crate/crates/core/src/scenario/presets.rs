//! Built-in scenarios, one per figure panel.
//!
//! All values are in units of Γ₁ with resonant qubits. Where a panel shows
//! several curves the varied parameter becomes a sweep.

use super::config::{GridSpec, ParamOverrides, ScenarioConfig, ScenarioKind, Sweep};
use crate::spectra::PulseSpec;

/// Rough wall-clock cost of a preset on a laptop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuntimeClass {
    /// Under a few seconds.
    Fast,
    /// Up to about a minute.
    Moderate,
    /// Several minutes.
    Slow,
}

impl RuntimeClass {
    pub fn name(self) -> &'static str {
        match self {
            RuntimeClass::Fast => "fast",
            RuntimeClass::Moderate => "moderate",
            RuntimeClass::Slow => "slow",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub figure: &'static str,
    pub summary: &'static str,
    pub runtime: RuntimeClass,
    pub kind: ScenarioKind,
    pub params: ParamOverrides,
    pub sweep: Option<(&'static str, &'static [f64])>,
    pub time: Option<GridSpec>,
    pub x_axis: Option<GridSpec>,
    pub y_axis: Option<GridSpec>,
    pub excitation_detuning: Option<f64>,
}

impl Preset {
    pub fn config(&self) -> ScenarioConfig {
        ScenarioConfig {
            kind: Some(self.kind),
            params: self.params,
            sweep: self.sweep.map(|(param, values)| Sweep {
                param: param.into(),
                values: values.to_vec(),
            }),
            time: self.time,
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            pulse: self.excitation_detuning.map(PulseSpec::new),
            ..ScenarioConfig::named(self.name)
        }
    }
}

const P: ParamOverrides = ParamOverrides::NONE;
const T10: Option<GridSpec> = Some(GridSpec::linear(0.0, 10.0, 400));
const T10_COARSE: Option<GridSpec> = Some(GridSpec::linear(0.0, 10.0, 21));

const BASE: Preset = Preset {
    name: "",
    figure: "",
    summary: "",
    runtime: RuntimeClass::Fast,
    kind: ScenarioKind::SingleTraces,
    params: P,
    sweep: None,
    time: T10,
    x_axis: None,
    y_axis: None,
    excitation_detuning: None,
};

const GAMMA2_LOG: Option<GridSpec> = Some(GridSpec::log(0.1, 20.0, 41));
const G12_LIN: Option<GridSpec> = Some(GridSpec::linear(0.25, 10.0, 40));
const KAPPA_LOG: Option<GridSpec> = Some(GridSpec::log(0.1, 20.0, 41));
const G2_LIN: Option<GridSpec> = Some(GridSpec::linear(0.0, 15.0, 31));

const G12_CURVES: &[f64] = &[0.5, 5.0];
const GAMMA2_CURVES: &[f64] = &[0.2, 1.0, 4.0, 20.0];
const KAPPA_CURVES: &[f64] = &[0.1, 0.5, 2.0, 10.0];
const G2_CURVES: &[f64] = &[0.0, 5.0, 15.0];
const SPLIT_CURVES: &[f64] = &[1.0, 3.0, 5.0];

const fn single(name: &'static str, figure: &'static str, summary: &'static str, params: ParamOverrides) -> Preset {
    Preset {
        name,
        figure,
        summary,
        params,
        ..BASE
    }
}

const fn double(name: &'static str, figure: &'static str, summary: &'static str, params: ParamOverrides) -> Preset {
    Preset {
        name,
        figure,
        summary,
        params,
        kind: ScenarioKind::DoubleTraces,
        ..BASE
    }
}

const fn two_photon_map(name: &'static str, figure: &'static str, summary: &'static str) -> Preset {
    Preset {
        name,
        figure,
        summary,
        kind: ScenarioKind::TwoPhotonMap,
        time: None,
        x_axis: GAMMA2_LOG,
        y_axis: G12_LIN,
        ..BASE
    }
}

const fn two_photon_traces(name: &'static str, figure: &'static str, summary: &'static str, params: ParamOverrides) -> Preset {
    Preset {
        name,
        figure,
        summary,
        params,
        kind: ScenarioKind::TwoPhotonTraces,
        time: T10_COARSE,
        ..BASE
    }
}

const fn decay_route(name: &'static str, figure: &'static str, summary: &'static str, g: f64) -> Preset {
    Preset {
        name,
        figure,
        summary,
        kind: ScenarioKind::DecayRouteMap,
        params: ParamOverrides {
            g1: Some(g),
            g12: Some(g),
            ..P
        },
        time: None,
        x_axis: KAPPA_LOG,
        y_axis: G2_LIN,
        ..BASE
    }
}

/// Sweeps `g12` with `g1 = 1`, or `g1` with `g12 = 1`.
const fn spectrum(name: &'static str, figure: &'static str, summary: &'static str, gamma2: f64, sweep_g12: bool) -> Preset {
    let (fixed, swept) = if sweep_g12 {
        (ParamOverrides { g1: Some(1.0), ..P }, "g12")
    } else {
        (ParamOverrides { g12: Some(1.0), ..P }, "g1")
    };
    Preset {
        name,
        figure,
        summary,
        kind: ScenarioKind::ExchangeSpectrum,
        params: ParamOverrides {
            omega_c: Some(2.0),
            kappa: Some(0.01),
            gamma2: Some(gamma2),
            ..fixed
        },
        sweep: Some((swept, SPLIT_CURVES)),
        time: None,
        ..BASE
    }
}

const fn raman(name: &'static str, figure: &'static str, summary: &'static str, delta1: f64) -> Preset {
    Preset {
        name,
        figure,
        summary,
        kind: ScenarioKind::RamanSpectrum,
        params: ParamOverrides {
            g1: Some(1.0),
            g12: Some(5.0),
            omega_c: Some(2.0),
            kappa: Some(0.01),
            gamma2: Some(1.0),
            ..P
        },
        time: None,
        excitation_detuning: Some(delta1),
        ..BASE
    }
}

pub static PRESETS: &[Preset] = &[
    Preset {
        sweep: Some(("g12", G12_CURVES)),
        ..single("fig2a", "Fig. 2(a)", "two qubits, one excitation, bad-atom regime", ParamOverrides { gamma2: Some(10.0), ..P })
    },
    Preset {
        sweep: Some(("g12", G12_CURVES)),
        ..single("fig2b", "Fig. 2(b)", "two qubits, one excitation, good-atom regime", ParamOverrides { gamma2: Some(0.5), ..P })
    },
    Preset {
        sweep: Some(("gamma2", GAMMA2_CURVES)),
        ..double("fig2c", "Fig. 2(c)", "two excited qubits, weak coupling", ParamOverrides { g12: Some(0.5), ..P })
    },
    Preset {
        sweep: Some(("gamma2", GAMMA2_CURVES)),
        ..double("fig2d", "Fig. 2(d)", "two excited qubits, strong coupling", ParamOverrides { g12: Some(5.0), ..P })
    },
    Preset {
        name: "fig2e",
        figure: "Fig. 2(e)",
        summary: "qubit in a one-photon cavity, weak coupling",
        kind: ScenarioKind::JcmTraces,
        params: ParamOverrides { g1: Some(1.0), ..P },
        sweep: Some(("kappa", KAPPA_CURVES)),
        ..BASE
    },
    Preset {
        name: "fig2f",
        figure: "Fig. 2(f)",
        summary: "qubit in a one-photon cavity, strong coupling",
        kind: ScenarioKind::JcmTraces,
        params: ParamOverrides { g1: Some(2.0), ..P },
        sweep: Some(("kappa", KAPPA_CURVES)),
        ..BASE
    },
    Preset {
        name: "fig2g",
        figure: "Fig. 2(g)",
        summary: "two qubits in a cavity, qubit 2 strongly coupled to the cavity",
        kind: ScenarioKind::TcmTraces,
        params: ParamOverrides {
            g1: Some(1.0),
            g2: Some(5.0),
            g12: Some(1.0),
            kappa: Some(1.0),
            gamma2: Some(1.0),
            ..P
        },
        ..BASE
    },
    Preset {
        name: "fig2h",
        figure: "Fig. 2(h)",
        summary: "two qubits in a lossless cavity",
        kind: ScenarioKind::TcmTraces,
        params: ParamOverrides {
            g1: Some(1.0),
            g2: Some(1.0),
            g12: Some(1.0),
            kappa: Some(0.0),
            gamma2: Some(2.0),
            ..P
        },
        ..BASE
    },
    Preset {
        name: "fig3a",
        figure: "Fig. 3(a)",
        summary: "steady-state gap between qubit 1 and qubit 2 emission",
        kind: ScenarioKind::GapMap,
        time: None,
        x_axis: GAMMA2_LOG,
        y_axis: G12_LIN,
        ..BASE
    },
    single("fig3b", "Fig. 3(b)", "emission routes, weak coupling", ParamOverrides { g12: Some(0.5), gamma2: Some(3.0), ..P }),
    single("fig3c", "Fig. 3(c)", "emission routes, strong coupling", ParamOverrides { g12: Some(5.0), gamma2: Some(3.0), ..P }),
    double("contrib_a", "Contributions (a)", "P_total split, weak coupling, small Γ2", ParamOverrides { g12: Some(0.5), gamma2: Some(0.2), ..P }),
    double("contrib_b", "Contributions (b)", "P_total split, strong coupling, small Γ2", ParamOverrides { g12: Some(5.0), gamma2: Some(0.2), ..P }),
    double("contrib_c", "Contributions (c)", "P_total split, weak coupling, large Γ2", ParamOverrides { g12: Some(0.5), gamma2: Some(4.0), ..P }),
    double("contrib_d", "Contributions (d)", "P_total split, strong coupling, large Γ2", ParamOverrides { g12: Some(5.0), gamma2: Some(4.0), ..P }),
    two_photon_map("fig6a", "Fig. 6(a)", "steady-state P_em11"),
    two_photon_map("fig6b", "Fig. 6(b)", "steady-state P_em22"),
    two_photon_map("fig6c", "Fig. 6(c)", "steady-state P_total12"),
    two_photon_traces("fig6d", "Fig. 6(d)", "two-photon channels, P_em11 dominant", ParamOverrides { g12: Some(6.0), gamma2: Some(0.1), ..P }),
    two_photon_traces("fig6e", "Fig. 6(e)", "two-photon channels, P_em22 dominant", ParamOverrides { g12: Some(8.0), gamma2: Some(15.0), ..P }),
    Preset {
        runtime: RuntimeClass::Moderate,
        ..two_photon_traces("fig6f", "Fig. 6(f)", "two-photon channels, P_total12 dominant", ParamOverrides { g12: Some(1.0), gamma2: Some(10.0), ..P })
    },
    Preset {
        name: "fig7a",
        figure: "Fig. 7(a)",
        summary: "decoupling by g2 with g1 = g12",
        kind: ScenarioKind::TcmTraces,
        params: ParamOverrides {
            g1: Some(5.0),
            g12: Some(5.0),
            kappa: Some(1.0),
            gamma2: Some(1.0),
            ..P
        },
        sweep: Some(("g2", G2_CURVES)),
        ..BASE
    },
    Preset {
        name: "fig7b",
        figure: "Fig. 7(b)",
        summary: "decoupling by g2 with g1 != g12",
        kind: ScenarioKind::TcmTraces,
        params: ParamOverrides {
            g1: Some(5.0),
            g12: Some(2.0),
            kappa: Some(1.0),
            gamma2: Some(1.0),
            ..P
        },
        sweep: Some(("g2", G2_CURVES)),
        ..BASE
    },
    decay_route("fig8a", "Fig. 8(a)", "steady-state P_em1, g1 = g12 = 1", 1.0),
    decay_route("fig8b", "Fig. 8(b)", "steady-state P_emx2 = P_emr, g1 = g12 = 1", 1.0),
    decay_route("fig8c", "Fig. 8(c)", "steady-state P_em1, g1 = g12 = 3", 3.0),
    spectrum("fig9a", "Fig. 9(a)", "exchange-emission spectrum against g12, Γ2 = 1", 1.0, true),
    spectrum("fig9b", "Fig. 9(b)", "exchange-emission spectrum against g1, Γ2 = 1", 1.0, false),
    spectrum("fig9c", "Fig. 9(c)", "exchange-emission spectrum against g12, Γ2 = 4", 4.0, true),
    spectrum("fig9d", "Fig. 9(d)", "exchange-emission spectrum against g1, Γ2 = 4", 4.0, false),
    raman("fig10a", "Fig. 10(a)", "Raman spectrum, pulse near the Fano peak", 2.0),
    raman("fig10b", "Fig. 10(b)", "Raman spectrum, pulse away from the Fano peak", 4.0),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
