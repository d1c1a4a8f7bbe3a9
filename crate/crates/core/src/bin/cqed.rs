use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cqed::scenario::{
    list_scenarios, resolve, run_scenario, OutputSpec, QuadratureSettings, ScenarioConfig,
    ScenarioKind,
};
use cqed::Error;

#[derive(Parser)]
#[command(name = "cqed", version, about = "Spontaneous emission of coupled qubits and cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset by name or a TOML scenario file.
    #[command(after_long_help = columns_help())]
    Run {
        /// Preset name (see `cqed list`) or path to a config file.
        target: String,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against the brute-force oracle and write a deviation report.
        #[arg(long)]
        oracle_check: bool,
        /// Relative tolerance of the frequency integrals.
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Worker threads.
        #[arg(long, env = "CQED_THREADS")]
        threads: Option<usize>,
    },
    /// List the built-in presets.
    List,
    /// Check a config file without running it.
    Validate { config: PathBuf },
}

fn columns_help() -> String {
    let mut s = String::from(
        "CSV columns by scenario kind (a swept parameter is prepended):\n",
    );
    for k in ScenarioKind::ALL {
        s.push_str(&format!("  {:<18} {}\n", k.name(), k.columns().join(",")));
    }
    s.push_str("\nExit status: 0 success, 1 config error, 2 compute error, 3 oracle check failed.");
    s
}

fn load(target: &str) -> Result<ScenarioConfig, Error> {
    let path = Path::new(target);
    if path.is_file() || target.ends_with(".toml") {
        ScenarioConfig::load(path).map_err(|e| match e {
            Error::Io { path, source } => Error::ConfigInvalid {
                path: path.display().to_string(),
                message: source.to_string(),
            },
            e => e,
        })
    } else {
        Ok(ScenarioConfig::named(target))
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for line in list_scenarios() {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let cfg = match load(&config.to_string_lossy()) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match resolve(&cfg) {
                Ok(s) => {
                    println!("ok: {} ({})", s.name, s.kind.name());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Run {
            target,
            out,
            oracle_check,
            rel_tol,
            threads,
        } => {
            if let Some(n) = threads {
                cqed::parallel::configure_threads(n);
            }
            let mut cfg = match load(&target) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            if out.is_some() {
                cfg.output = Some(OutputSpec {
                    dir: out,
                    ..cfg.output.unwrap_or_default()
                });
            }
            if oracle_check {
                cfg.oracle_check = Some(true);
            }
            if rel_tol.is_some() {
                cfg.quadrature = Some(QuadratureSettings { rel_tol });
            }
            let scenario = match resolve(&cfg) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let outcome = match run_scenario(&scenario) {
                Ok(o) => o,
                Err(e) => return fail(&e),
            };
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            for c in outcome.checks.iter().filter(|c| !c.passed()) {
                eprintln!(
                    "oracle check failed: {} deviation {:e} > {:e}",
                    c.quantity, c.deviation, c.limit
                );
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
    }
}
