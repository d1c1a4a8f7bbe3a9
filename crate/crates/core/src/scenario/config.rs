use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::oracle::OracleConfig;
use crate::spectra::PulseSpec;
use crate::trace::{linspace, logspace};

/// What a scenario computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Two qubits, qubit 1 excited: survival, exchange and both emissions.
    SingleTraces,
    /// Steady-state `P_SE − P_em2` over `Γ2 × g12`.
    GapMap,
    /// Both qubits excited: survival, single-photon channels, `P_total`.
    DoubleTraces,
    /// Steady-state two-photon channels over `Γ2 × g12`.
    TwoPhotonMap,
    /// Two-photon channels against time.
    TwoPhotonTraces,
    /// Qubit in a cavity holding one photon.
    JcmTraces,
    /// Two qubits in a cavity, qubit 1 excited.
    TcmTraces,
    /// Steady-state cavity-system channels over `κ = Γ2` and `g2`.
    DecayRouteMap,
    /// Area-normalised exchange-emission spectrum of qubit 2.
    ExchangeSpectrum,
    /// Raman spectrum with its pulse and exchange-emission components.
    RamanSpectrum,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 10] = [
        ScenarioKind::SingleTraces,
        ScenarioKind::GapMap,
        ScenarioKind::DoubleTraces,
        ScenarioKind::TwoPhotonMap,
        ScenarioKind::TwoPhotonTraces,
        ScenarioKind::JcmTraces,
        ScenarioKind::TcmTraces,
        ScenarioKind::DecayRouteMap,
        ScenarioKind::ExchangeSpectrum,
        ScenarioKind::RamanSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SingleTraces => "single_traces",
            ScenarioKind::GapMap => "gap_map",
            ScenarioKind::DoubleTraces => "double_traces",
            ScenarioKind::TwoPhotonMap => "two_photon_map",
            ScenarioKind::TwoPhotonTraces => "two_photon_traces",
            ScenarioKind::JcmTraces => "jcm_traces",
            ScenarioKind::TcmTraces => "tcm_traces",
            ScenarioKind::DecayRouteMap => "decay_route_map",
            ScenarioKind::ExchangeSpectrum => "exchange_spectrum",
            ScenarioKind::RamanSpectrum => "raman_spectrum",
        }
    }

    /// CSV columns, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::SingleTraces => &["t", "p_surv", "p_exchg", "p_se", "p_em2", "free_space"],
            ScenarioKind::GapMap => &["gamma2", "g12", "p_se", "p_em2", "gap", "optimal_gamma2"],
            ScenarioKind::DoubleTraces => &["t", "p_surv", "p_em2", "p_emx1", "p_total", "free_space"],
            ScenarioKind::TwoPhotonMap => &[
                "gamma2", "g12", "p_em11", "p_em22", "p_em12", "p_em21", "p_total12", "dominant",
            ],
            ScenarioKind::TwoPhotonTraces => {
                &["t", "p_em11", "p_em22", "p_em12", "p_em21", "p_total12"]
            }
            ScenarioKind::JcmTraces => &["t", "p_surv", "p_cavity", "free_space"],
            ScenarioKind::TcmTraces => &["t", "p_surv", "p_em1", "p_emx2", "p_emr", "free_space"],
            ScenarioKind::DecayRouteMap => &["kappa", "g2", "p_em1", "p_emx2", "p_emr"],
            ScenarioKind::ExchangeSpectrum => &["delta2", "s_emx2"],
            ScenarioKind::RamanSpectrum => &["delta2", "s_raman", "pulse", "s_emx2"],
        }
    }

    /// Meaning of the `x_axis` and `y_axis` grids, for map kinds.
    pub fn axes(self) -> Option<(&'static str, &'static str)> {
        match self {
            ScenarioKind::GapMap | ScenarioKind::TwoPhotonMap => Some(("gamma2", "g12")),
            ScenarioKind::DecayRouteMap => Some(("kappa", "g2")),
            _ => None,
        }
    }

    pub fn is_trace(self) -> bool {
        matches!(
            self,
            ScenarioKind::SingleTraces
                | ScenarioKind::DoubleTraces
                | ScenarioKind::TwoPhotonTraces
                | ScenarioKind::JcmTraces
                | ScenarioKind::TcmTraces
        )
    }

    pub fn is_spectrum(self) -> bool {
        matches!(
            self,
            ScenarioKind::ExchangeSpectrum | ScenarioKind::RamanSpectrum
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `points` samples from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "is_linear")]
    pub spacing: Spacing,
}

fn is_linear(s: &Spacing) -> bool {
    *s == Spacing::Linear
}

impl GridSpec {
    pub const fn linear(start: f64, stop: f64, points: usize) -> Self {
        Self {
            start,
            stop,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub const fn log(start: f64, stop: f64, points: usize) -> Self {
        Self {
            start,
            stop,
            points,
            spacing: Spacing::Log,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.start, self.stop, self.points),
            Spacing::Log => logspace(self.start, self.stop, self.points),
        }
    }

    fn check(&self, path: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop <= self.start {
            return Err(Error::config(path, "need finite start < stop"));
        }
        if self.points < 2 {
            return Err(Error::config(path, "need at least 2 points"));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::config(path, "log spacing needs start > 0"));
        }
        Ok(())
    }
}

/// One parameter stepped through a list of values; every value gives one
/// curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

/// Per-field overrides of [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega01: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega02: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g12: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

impl ParamOverrides {
    pub const NONE: Self = Self {
        omega01: None,
        omega02: None,
        omega_c: None,
        g1: None,
        g2: None,
        g12: None,
        gamma1: None,
        gamma2: None,
        kappa: None,
    };

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply(&self, p: &mut SystemParams) {
        let pairs = [
            (self.omega01, &mut p.omega01),
            (self.omega02, &mut p.omega02),
            (self.omega_c, &mut p.omega_c),
            (self.g1, &mut p.g1),
            (self.g2, &mut p.g2),
            (self.g12, &mut p.g12),
            (self.gamma1, &mut p.gamma1),
            (self.gamma2, &mut p.gamma2),
            (self.kappa, &mut p.kappa),
        ];
        for (v, slot) in pairs {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }

    /// Later values win.
    fn merge(self, over: Self) -> Self {
        Self {
            omega01: over.omega01.or(self.omega01),
            omega02: over.omega02.or(self.omega02),
            omega_c: over.omega_c.or(self.omega_c),
            g1: over.g1.or(self.g1),
            g2: over.g2.or(self.g2),
            g12: over.g12.or(self.g12),
            gamma1: over.gamma1.or(self.gamma1),
            gamma2: over.gamma2.or(self.gamma2),
            kappa: over.kappa.or(self.kappa),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// File stem; defaults to the scenario name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Relative tolerance of every frequency integral.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    /// Largest deviation from the oracle accepted by an oracle check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<OracleConfig>,
}

/// A scenario as written in a config file. `scenario` names a preset, whose
/// settings the remaining fields override, or is `"custom"`, in which case
/// `kind` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_check: Option<bool>,
    #[serde(default, skip_serializing_if = "ParamOverrides::is_empty")]
    pub params: ParamOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_axis: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_axis: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ScenarioConfig {
    /// A config that only names a scenario.
    pub fn named(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            kind: None,
            oracle_check: None,
            params: ParamOverrides::default(),
            sweep: None,
            time: None,
            x_axis: None,
            y_axis: None,
            frequency: None,
            pulse: None,
            quadrature: None,
            oracle: None,
            output: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            // serde reports missing and unknown keys by name; use it as the path
            let path = quoted(&message).unwrap_or_else(|| "<root>".into());
            Error::config(path, message)
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<root>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// `over` takes precedence field by field.
    pub fn overlay(&self, over: &ScenarioConfig) -> ScenarioConfig {
        let base_out = self.output.clone().unwrap_or_default();
        let out = over.output.clone().unwrap_or_default();
        let base_oracle = self.oracle.unwrap_or_default();
        let oracle = over.oracle.unwrap_or_default();
        let base_quad = self.quadrature.unwrap_or_default();
        let quad = over.quadrature.unwrap_or_default();
        ScenarioConfig {
            scenario: over.scenario.clone(),
            kind: over.kind.or(self.kind),
            oracle_check: over.oracle_check.or(self.oracle_check),
            params: self.params.merge(over.params),
            sweep: over.sweep.clone().or_else(|| self.sweep.clone()),
            time: over.time.or(self.time),
            x_axis: over.x_axis.or(self.x_axis),
            y_axis: over.y_axis.or(self.y_axis),
            frequency: over.frequency.or(self.frequency),
            pulse: over.pulse.or(self.pulse),
            quadrature: Some(QuadratureSettings {
                rel_tol: quad.rel_tol.or(base_quad.rel_tol),
            }),
            oracle: Some(OracleSettings {
                max_deviation: oracle.max_deviation.or(base_oracle.max_deviation),
                solver: oracle.solver.or(base_oracle.solver),
            }),
            output: Some(OutputSpec {
                dir: out.dir.or(base_out.dir),
                format: out.format.or(base_out.format),
                name: out.name.or(base_out.name),
            }),
        }
    }
}

fn quoted(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

/// Default relative tolerance of frequency integrals in scenarios.
pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Default limit of an oracle check.
pub const DEFAULT_MAX_DEVIATION: f64 = 1e-3;

/// A scenario with every setting decided.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Figure panel reproduced, empty for custom scenarios.
    pub figure: String,
    pub kind: ScenarioKind,
    pub params: SystemParams,
    pub sweep: Option<Sweep>,
    pub time: Vec<f64>,
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    /// `None` selects the automatic spectral grid.
    pub frequency: Option<Vec<f64>>,
    pub pulse: PulseSpec,
    pub rel_tol: f64,
    pub oracle: OracleConfig,
    pub max_deviation: f64,
    pub oracle_check: bool,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub stem: String,
    /// The merged config the scenario was resolved from.
    pub config: ScenarioConfig,
}

impl Scenario {
    /// Parameter sets, one per curve.
    pub fn curves(&self) -> Result<Vec<SystemParams>> {
        match &self.sweep {
            None => Ok(vec![self.params]),
            Some(s) => s
                .values
                .iter()
                .map(|&v| {
                    let mut p = self.params;
                    p.set(&s.param, v)?;
                    Ok(p)
                })
                .collect(),
        }
    }
}

/// Resolves a config against the preset catalog and checks every field.
pub fn resolve(cfg: &ScenarioConfig) -> Result<Scenario> {
    let (merged, figure) = if cfg.scenario == "custom" {
        (cfg.overlay(&ScenarioConfig::named("custom")), String::new())
    } else {
        let preset = super::presets::find(&cfg.scenario).ok_or_else(|| {
            Error::config(
                "scenario",
                format!("unknown scenario `{}` (see `cqed list`)", cfg.scenario),
            )
        })?;
        let base = preset.config();
        if let (Some(a), Some(b)) = (cfg.kind, base.kind) {
            if a != b {
                return Err(Error::config(
                    "kind",
                    format!("preset `{}` is a {} scenario", preset.name, b.name()),
                ));
            }
        }
        (base.overlay(cfg), preset.figure.to_string())
    };
    let kind = merged
        .kind
        .ok_or_else(|| Error::config("kind", "custom scenarios need a kind"))?;
    let mut params = if kind == ScenarioKind::JcmTraces {
        SystemParams::jcm(1.0, 1.0)
    } else {
        SystemParams::default()
    };
    merged.params.apply(&mut params);
    crate::model::validate_params(&params).map_err(|e| Error::config("params", e.to_string()))?;
    if let Some(s) = &merged.sweep {
        if s.values.is_empty() {
            return Err(Error::config("sweep.values", "empty sweep"));
        }
        for &v in &s.values {
            let mut p = params;
            p.set(&s.param, v)
                .map_err(|e| Error::config("sweep.param", e.to_string()))?;
            crate::model::validate_params(&p)
                .map_err(|e| Error::config("sweep.values", e.to_string()))?;
        }
    }
    if kind.is_spectrum() {
        let mut curves = vec![params];
        if let Some(s) = &merged.sweep {
            curves = s
                .values
                .iter()
                .map(|&v| {
                    let mut p = params;
                    p.set(&s.param, v).map(|_| p)
                })
                .collect::<Result<_>>()?;
        }
        for p in &curves {
            if p.g2 != 0.0 {
                return Err(Error::config("params.g2", "spectra are defined for g2 = 0"));
            }
            if kind == ScenarioKind::RamanSpectrum && p.omega01 != p.omega02 {
                return Err(Error::config("params.omega02", "Raman spectra need omega01 = omega02"));
            }
        }
    }
    let grid = |g: Option<GridSpec>, path: &str, needed: bool| -> Result<Vec<f64>> {
        match g {
            Some(g) => {
                g.check(path)?;
                Ok(g.values())
            }
            None if needed => Err(Error::config(path, format!("{} scenarios need `{path}`", kind.name()))),
            None => Ok(Vec::new()),
        }
    };
    let time = grid(merged.time, "time", kind.is_trace())?;
    if time.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::config("time", "times must be nonnegative"));
    }
    let maps = kind.axes().is_some();
    let x_axis = grid(merged.x_axis, "x_axis", maps)?;
    let y_axis = grid(merged.y_axis, "y_axis", maps)?;
    let frequency = match merged.frequency {
        Some(g) => Some(grid(Some(g), "frequency", false)?),
        None => None,
    };
    let quad = merged.quadrature.unwrap_or_default();
    let rel_tol = quad.rel_tol.unwrap_or(DEFAULT_REL_TOL);
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::config("quadrature.rel_tol", "must lie in (0, 1)"));
    }
    let oracle_settings = merged.oracle.unwrap_or_default();
    let oracle = oracle_settings.solver.unwrap_or_default();
    oracle
        .validate()
        .map_err(|e| Error::config("oracle.solver", e.to_string()))?;
    let max_deviation = oracle_settings.max_deviation.unwrap_or(DEFAULT_MAX_DEVIATION);
    if !(max_deviation > 0.0) {
        return Err(Error::config("oracle.max_deviation", "must be positive"));
    }
    let out = merged.output.clone().unwrap_or_default();
    let stem = out.name.unwrap_or_else(|| merged.scenario.clone());
    if stem.is_empty() || stem.contains(['/', '\\']) {
        return Err(Error::config("output.name", "must be a plain file stem"));
    }
    Ok(Scenario {
        name: merged.scenario.clone(),
        figure,
        kind,
        params,
        sweep: merged.sweep.clone(),
        time,
        x_axis,
        y_axis,
        frequency,
        pulse: merged.pulse.unwrap_or_default(),
        rel_tol,
        oracle,
        max_deviation,
        oracle_check: merged.oracle_check.unwrap_or(false),
        out_dir: out.dir.unwrap_or_else(|| PathBuf::from(".")),
        format: out.format.unwrap_or_default(),
        stem,
        config: merged,
    })
}
