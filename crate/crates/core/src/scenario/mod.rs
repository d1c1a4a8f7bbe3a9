//! Declarative scenarios: a TOML config names a preset or describes a
//! custom run, [`resolve`] fills in every setting, and [`run_scenario`]
//! computes the result and writes it as CSV or JSON.
//!
//! Every CSV starts with `#` lines recording the tool version and the full
//! resolved parameter set, followed by one header row. Columns per kind are
//! listed by [`ScenarioKind::columns`]; when a sweep is present its
//! parameter is prepended as the first column.

mod config;
pub mod presets;
mod run;

pub use config::{
    resolve, GridSpec, OracleSettings, OutputFormat, OutputSpec, ParamOverrides,
    QuadratureSettings, Scenario, ScenarioConfig, ScenarioKind, Spacing, Sweep,
    DEFAULT_MAX_DEVIATION, DEFAULT_REL_TOL,
};
pub use presets::{Preset, RuntimeClass, PRESETS};
pub use run::{
    compute, header, num, oracle_checks, render_csv, render_json, run_scenario, Block, Cell,
    Check, RunOutcome, Table,
};

/// One line per preset: name, figure, runtime class and summary.
pub fn list_scenarios() -> Vec<String> {
    PRESETS
        .iter()
        .map(|p| {
            format!(
                "{:<10} {:<18} {:<9} {}",
                p.name,
                p.figure,
                p.runtime.name(),
                p.summary
            )
        })
        .collect()
}
