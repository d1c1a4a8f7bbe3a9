//! Snapshot tests. Run with `UPDATE_GOLDEN=1` to rewrite the snapshots.

use std::path::PathBuf;

use cqed::model::{build_network, NetworkKind};
use cqed::scenario::{resolve, ScenarioConfig, ScenarioKind, PRESETS};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from its snapshot");
}

#[test]
fn networks() {
    let render = || {
        let mut out = String::new();
        for kind in NetworkKind::ALL {
            out.push_str(&format!("== {}\n{}\n", kind.name(), build_network(kind).render()));
        }
        out
    };
    let out = render();
    assert_eq!(out, render(), "network construction is not deterministic");
    check("networks.txt", &out);
}

#[test]
fn preset_catalog() {
    let mut out = String::new();
    for p in PRESETS {
        let s = resolve(&ScenarioConfig::named(p.name)).unwrap();
        let fields: Vec<String> = s
            .params
            .fields()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("{} [{}] {}\n  {}\n", p.name, p.figure, s.kind.name(), fields.join(" ")));
        if let Some(sw) = &s.sweep {
            out.push_str(&format!("  sweep {} = {:?}\n", sw.param, sw.values));
        }
        if s.kind == ScenarioKind::RamanSpectrum {
            out.push_str(&format!("  excitation_detuning={}\n", s.pulse.excitation_detuning));
        }
        for (axis, v) in [("time", &s.time), ("x", &s.x_axis), ("y", &s.y_axis)] {
            if let (Some(a), Some(b)) = (v.first(), v.last()) {
                out.push_str(&format!("  {axis}: {} points on [{a}, {b}]\n", v.len()));
            }
        }
    }
    check("presets.txt", &out);
}
