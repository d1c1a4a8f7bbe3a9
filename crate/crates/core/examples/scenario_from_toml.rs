//! Runs a scenario described in TOML and prints the start of its CSV.
//!
//! ```text
//! cargo run --release --example scenario_from_toml
//! ```

use cqed::scenario::{compute, render_csv, resolve, ScenarioConfig};

const CONFIG: &str = r#"
scenario = "fig2c"

[params]
g12 = 2.0

[sweep]
param = "gamma2"
values = [0.5, 2.0]

[time]
start = 0.0
stop = 5.0
points = 6
"#;

fn main() -> cqed::Result<()> {
    let scenario = resolve(&ScenarioConfig::from_toml(CONFIG)?)?;
    let table = compute(&scenario)?;
    print!("{}", render_csv(&scenario, &table));
    Ok(())
}
