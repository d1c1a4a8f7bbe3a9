use std::path::Path;

use cqed::scenario::{
    compute, render_csv, resolve, run_scenario, OutputFormat, OutputSpec, ParamOverrides,
    ScenarioConfig, ScenarioKind, PRESETS,
};
use cqed::Error;

fn in_dir(name: &str, dir: &Path) -> ScenarioConfig {
    ScenarioConfig {
        output: Some(OutputSpec {
            dir: Some(dir.to_path_buf()),
            ..OutputSpec::default()
        }),
        ..ScenarioConfig::named(name)
    }
}

#[test]
fn every_preset_resolves() {
    for p in PRESETS {
        let s = resolve(&ScenarioConfig::named(p.name)).unwrap();
        assert_eq!(s.kind, p.kind, "{}", p.name);
        assert!(!s.curves().unwrap().is_empty());
    }
}

#[test]
fn preset_names_are_unique() {
    let mut names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), PRESETS.len());
}

#[test]
fn every_kind_has_a_preset() {
    for k in ScenarioKind::ALL {
        assert!(PRESETS.iter().any(|p| p.kind == k), "{}", k.name());
    }
}

#[test]
fn toml_round_trip() {
    let text = r#"
scenario = "fig2b"
oracle_check = true

[params]
g12 = 2.5

[time]
start = 0.0
stop = 4.0
points = 9

[quadrature]
rel_tol = 1e-7

[output]
format = "json"
name = "custom_fig2b"
"#;
    let cfg = ScenarioConfig::from_toml(text).unwrap();
    let again = ScenarioConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
    assert_eq!(cfg, again);
    let s = resolve(&cfg).unwrap();
    assert_eq!(s.params.g12, 2.5);
    assert_eq!(s.params.gamma2, 0.5);
    assert_eq!(s.time.len(), 9);
    assert_eq!(s.format, OutputFormat::Json);
}

#[test]
fn unknown_key_is_rejected() {
    let err = ScenarioConfig::from_toml("scenario = \"fig2a\"\ntemperature = 4\n").unwrap_err();
    match err {
        Error::ConfigInvalid { path, .. } => assert_eq!(path, "temperature"),
        e => panic!("unexpected error {e}"),
    }
    let err = ScenarioConfig::from_toml("scenario = \"fig2a\"\n[params]\ng3 = 1\n").unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid { ref path, .. } if path == "g3"), "{err}");
}

#[test]
fn empty_config_names_the_missing_key() {
    let err = ScenarioConfig::from_toml("").unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid { ref path, .. } if path == "scenario"), "{err}");
}

#[test]
fn unknown_preset_is_a_config_error() {
    let err = resolve(&ScenarioConfig::named("fig99")).unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid { .. }), "{err}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn custom_scenario_needs_kind_and_grids() {
    let err = resolve(&ScenarioConfig::named("custom")).unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid { ref path, .. } if path == "kind"), "{err}");
    let cfg = ScenarioConfig {
        kind: Some(ScenarioKind::GapMap),
        ..ScenarioConfig::named("custom")
    };
    let err = resolve(&cfg).unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid { ref path, .. } if path == "x_axis"), "{err}");
}

#[test]
fn negative_rate_is_rejected_before_running() {
    let cfg = ScenarioConfig {
        params: ParamOverrides {
            gamma2: Some(-1.0),
            ..ParamOverrides::NONE
        },
        ..ScenarioConfig::named("fig2a")
    };
    assert!(resolve(&cfg).is_err());
}

#[test]
fn csv_has_provenance_header_and_columns() {
    let s = resolve(&ScenarioConfig::named("fig3b")).unwrap();
    let csv = render_csv(&s, &compute(&s).unwrap());
    let comments: Vec<_> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(comments.iter().any(|l| l.starts_with("# tool = cqed")));
    assert!(comments.iter().any(|l| *l == "# params.g12 = 0.5"));
    assert!(comments.iter().any(|l| *l == "# params.gamma2 = 3.0"));
    let header = csv.lines().nth(comments.len()).unwrap();
    assert_eq!(header, ScenarioKind::SingleTraces.columns().join(","));
    assert_eq!(csv.lines().count(), comments.len() + 1 + 400);
}

#[test]
fn sweep_column_comes_first() {
    let s = resolve(&ScenarioConfig::named("fig2c")).unwrap();
    let t = compute(&s).unwrap();
    assert_eq!(t.columns[0], "gamma2");
    assert_eq!(t.blocks.len(), 4);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for name in ["fig2a", "fig3a", "fig9a"] {
        let first = run_scenario(&resolve(&in_dir(name, &a)).unwrap()).unwrap();
        let second = run_scenario(&resolve(&in_dir(name, &b)).unwrap()).unwrap();
        for (x, y) in first.files.iter().zip(&second.files) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{name}");
        }
    }
}

#[test]
fn oracle_check_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig {
        oracle_check: Some(true),
        ..in_dir("fig2g", dir.path())
    };
    let outcome = run_scenario(&resolve(&cfg).unwrap()).unwrap();
    assert!(outcome.passed());
    assert_eq!(outcome.exit_code(), 0);
    assert!(outcome.checks.iter().all(|c| c.deviation < 1e-6));
    assert!(dir.path().join("fig2g.oracle.csv").is_file());
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig {
        output: Some(OutputSpec {
            dir: Some(dir.path().to_path_buf()),
            format: Some(OutputFormat::Json),
            name: None,
        }),
        ..ScenarioConfig::named("fig2e")
    };
    let outcome = run_scenario(&resolve(&cfg).unwrap()).unwrap();
    let text = std::fs::read_to_string(&outcome.files[0]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_object());
}
