use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{OutputFormat, Scenario, ScenarioKind};
use crate::error::{Error, Result};
use crate::jaynes_cummings::evolve_jcm_two_excitation;
use crate::model::{build_network, Bath, NetworkKind, SystemParams, SystemState};
use crate::numerics::{Horizon, QuadratureSpec};
use crate::oracle::{oracle_evolve, oracle_spectrum, OracleRun};
use crate::parallel::map_indexed;
use crate::spectra::{
    default_grid, exchange_emission_density, exchange_emission_spectrum, input_pulse_spectrum,
    raman_spectrum,
};
use crate::trace::ProbabilityTrace;
use crate::{tavis_cummings, two_qubit_double, two_qubit_single};

/// One CSV field.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
}

impl Cell {
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

/// Rows computed for one curve of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    /// Value of the swept parameter, if any.
    pub curve: Option<f64>,
    #[serde(skip)]
    pub params: SystemParams,
    pub rows: Vec<Vec<Cell>>,
}

/// Everything a scenario computed, before it is written out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub blocks: Vec<Block>,
}

impl Table {
    /// Values of `column` in one block.
    pub fn column(&self, block: usize, column: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == column)?;
        self.blocks[block].rows.iter().map(|r| r[k].num()).collect()
    }
}

/// One comparison against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub curve: Option<f64>,
    pub deviation: f64,
    pub limit: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.limit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub table: Table,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// 0 on success, 3 when an oracle check failed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            3
        }
    }
}

/// Computes the scenario, writes its files and, if requested, the oracle
/// report.
pub fn run_scenario(s: &Scenario) -> Result<RunOutcome> {
    let table = compute(s)?;
    let checks = if s.oracle_check {
        oracle_checks(s, &table)?
    } else {
        Vec::new()
    };
    let mut files = vec![write_table(s, &table)?];
    if s.oracle_check {
        files.push(write_report(s, &checks)?);
    }
    Ok(RunOutcome {
        table,
        checks,
        files,
    })
}

pub fn compute(s: &Scenario) -> Result<Table> {
    let curves = s.curves()?;
    let mut columns: Vec<String> = s.sweep.iter().map(|w| w.param.clone()).collect();
    columns.extend(s.kind.columns().iter().map(|c| c.to_string()));
    let mut blocks = Vec::with_capacity(curves.len());
    for (i, p) in curves.iter().enumerate() {
        let curve = s.sweep.as_ref().map(|w| w.values[i]);
        let mut rows = block_rows(s, p)?;
        if let Some(v) = curve {
            for r in &mut rows {
                r.insert(0, Cell::Num(v));
            }
        }
        blocks.push(Block {
            curve,
            params: *p,
            rows,
        });
    }
    Ok(Table { columns, blocks })
}

fn traces_to_rows(times: &[f64], traces: &[&ProbabilityTrace]) -> Vec<Vec<Cell>> {
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            std::iter::once(Cell::Num(t))
                .chain(traces.iter().map(|tr| Cell::Num(tr.values[i])))
                .collect()
        })
        .collect()
}

fn map_axes(s: &Scenario) -> (&[f64], &[f64]) {
    (&s.x_axis, &s.y_axis)
}

fn block_rows(s: &Scenario, p: &SystemParams) -> Result<Vec<Vec<Cell>>> {
    let spec = QuadratureSpec::default().with_rel_tol(s.rel_tol);
    let specs = QuadratureSpec::two_dimensional().map(|q| q.with_rel_tol(q.rel_tol.max(s.rel_tol)));
    let t = &s.time;
    Ok(match s.kind {
        ScenarioKind::SingleTraces => {
            let tr = two_qubit_single::evolve(p, t, &spec)?;
            traces_to_rows(t, &tr.all())
        }
        ScenarioKind::DoubleTraces => {
            let tr = two_qubit_double::evolve(p, t, &spec)?;
            traces_to_rows(t, &tr.all())
        }
        ScenarioKind::TcmTraces => {
            let tr = tavis_cummings::evolve(p, t, &spec)?;
            traces_to_rows(t, &tr.all())
        }
        ScenarioKind::JcmTraces => {
            let tr = evolve_jcm_two_excitation(p, t, s.oracle.tol)?;
            traces_to_rows(t, &[&tr.survival, &tr.cavity, &tr.free_space])
        }
        ScenarioKind::TwoPhotonTraces => {
            let cells = map_indexed(t.len(), |i| {
                two_photon_row(two_qubit_double::p_two_photon(p, Horizon::At(t[i]), &specs)?)
            })?;
            t.iter()
                .zip(cells)
                .map(|(&ti, mut r)| {
                    r.truncate(5);
                    r.insert(0, Cell::Num(ti));
                    r
                })
                .collect()
        }
        ScenarioKind::GapMap => {
            let (x, y) = map_axes(s);
            let m = two_qubit_single::gap_map(p, x, y, &spec)?;
            let mut rows = Vec::new();
            for (j, &g12) in m.g12.iter().enumerate() {
                for (i, &gamma2) in m.gamma2.iter().enumerate() {
                    let c = m.cells[j][i];
                    rows.push(vec![
                        Cell::Num(gamma2),
                        Cell::Num(g12),
                        Cell::Num(c.p_se),
                        Cell::Num(c.p_em2),
                        Cell::Num(c.gap()),
                        Cell::Num(m.optimal_gamma2[j]),
                    ]);
                }
            }
            rows
        }
        ScenarioKind::TwoPhotonMap => {
            let (x, y) = map_axes(s);
            let m = two_qubit_double::dominance_map(p, x, y, &specs)?;
            let mut rows = Vec::new();
            for (j, &g12) in m.g12.iter().enumerate() {
                for (i, &gamma2) in m.gamma2.iter().enumerate() {
                    let mut r = vec![Cell::Num(gamma2), Cell::Num(g12)];
                    r.extend(two_photon_row(m.cells[j][i])?);
                    rows.push(r);
                }
            }
            rows
        }
        ScenarioKind::DecayRouteMap => {
            let (x, y) = map_axes(s);
            let m = tavis_cummings::decay_route_map(p, x, y, &spec)?;
            let mut rows = Vec::new();
            for (j, &g2) in m.g2.iter().enumerate() {
                for (i, &kappa) in m.kappa.iter().enumerate() {
                    let c = m.cells[j][i];
                    rows.push(vec![
                        Cell::Num(kappa),
                        Cell::Num(g2),
                        Cell::Num(c.p_em1),
                        Cell::Num(c.p_emx2),
                        Cell::Num(c.p_emr),
                    ]);
                }
            }
            rows
        }
        ScenarioKind::ExchangeSpectrum => {
            let grid = spectral_grid(s, p);
            let sp = exchange_emission_spectrum(p, &grid)?;
            grid.iter()
                .zip(&sp.values)
                .map(|(&x, &v)| vec![Cell::Num(x), Cell::Num(v)])
                .collect()
        }
        ScenarioKind::RamanSpectrum => {
            let grid = spectral_grid(s, p);
            let raman = raman_spectrum(p, &s.pulse, &grid)?;
            let pulse = input_pulse_spectrum(&s.pulse, &grid)?;
            let emx2 = exchange_emission_spectrum(p, &grid)?;
            (0..grid.len())
                .map(|i| {
                    vec![
                        Cell::Num(grid[i]),
                        Cell::Num(raman.values[i]),
                        Cell::Num(pulse.values[i]),
                        Cell::Num(emx2.values[i]),
                    ]
                })
                .collect()
        }
    })
}

fn two_photon_row(r: two_qubit_double::TwoPhotonChannelResult) -> Result<Vec<Cell>> {
    Ok(vec![
        Cell::Num(r.p_em11),
        Cell::Num(r.p_em22),
        Cell::Num(r.p_em12),
        Cell::Num(r.p_em21),
        Cell::Num(r.p_total12),
        Cell::Text(r.dominant.name()),
    ])
}

fn spectral_grid(s: &Scenario, p: &SystemParams) -> Vec<f64> {
    s.frequency.clone().unwrap_or_else(|| default_grid(p))
}

/// Writes the `#` metadata block shared by every emitted CSV.
pub fn header(s: &Scenario) -> String {
    let mut h = String::new();
    let mut line = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(h, "# {k} = {v}");
    };
    line("tool", &format!("cqed {}", env!("CARGO_PKG_VERSION")));
    line("scenario", &s.name);
    if !s.figure.is_empty() {
        line("figure", &s.figure);
    }
    line("kind", &s.kind.name());
    for (name, v) in s.params.fields() {
        line(&format!("params.{name}"), &num(v));
    }
    if let Some(w) = &s.sweep {
        line("sweep.param", &w.param);
        line("sweep.values", &list(&w.values));
    }
    if let Some(g) = &s.config.time {
        line("time", &grid_text(g));
    }
    if let Some((xn, yn)) = s.kind.axes() {
        if let Some(g) = &s.config.x_axis {
            line(&format!("x_axis.{xn}"), &grid_text(g));
        }
        if let Some(g) = &s.config.y_axis {
            line(&format!("y_axis.{yn}"), &grid_text(g));
        }
    }
    if s.kind.is_spectrum() {
        match &s.config.frequency {
            Some(g) => line("frequency", &grid_text(g)),
            None => line("frequency", &"default"),
        }
    }
    if s.kind == ScenarioKind::RamanSpectrum {
        line("pulse.excitation_detuning", &num(s.pulse.excitation_detuning));
        line("pulse.duration", &num(s.pulse.duration));
        line("pulse.arrival_time", &num(s.pulse.arrival_time));
    }
    line("quadrature.rel_tol", &num(s.rel_tol));
    if s.kind == ScenarioKind::JcmTraces || s.oracle_check {
        line("oracle.tol", &num(s.oracle.tol));
    }
    h
}

/// Shortest decimal that reads back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("[{}]", items.join(", "))
}

fn grid_text(g: &super::config::GridSpec) -> String {
    format!(
        "{} points from {} to {} ({})",
        g.points,
        num(g.start),
        num(g.stop),
        match g.spacing {
            super::config::Spacing::Linear => "linear",
            super::config::Spacing::Log => "log",
        }
    )
}

pub fn render_csv(s: &Scenario, t: &Table) -> String {
    let mut out = header(s);
    out.push_str(&t.columns.join(","));
    out.push('\n');
    for b in &t.blocks {
        for r in &b.rows {
            let fields: Vec<String> = r
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => num(*v),
                    Cell::Text(x) => x.to_string(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    tool: String,
    scenario: &'a str,
    figure: &'a str,
    kind: ScenarioKind,
    params: SystemParams,
    config: &'a super::config::ScenarioConfig,
    table: &'a Table,
}

pub fn render_json(s: &Scenario, t: &Table) -> Result<String> {
    let doc = JsonDoc {
        tool: format!("cqed {}", env!("CARGO_PKG_VERSION")),
        scenario: &s.name,
        figure: &s.figure,
        kind: s.kind,
        params: s.params,
        config: &s.config,
        table: t,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Precondition(e.to_string()))
}

fn write_file(s: &Scenario, suffix: &str, text: &str) -> Result<PathBuf> {
    let io = |path: &PathBuf| {
        let path = path.clone();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(&s.out_dir).map_err(io(&s.out_dir))?;
    let path = s.out_dir.join(format!("{}{suffix}", s.stem));
    std::fs::write(&path, text).map_err(io(&path))?;
    Ok(path)
}

fn write_table(s: &Scenario, t: &Table) -> Result<PathBuf> {
    match s.format {
        OutputFormat::Csv => write_file(s, ".csv", &render_csv(s, t)),
        OutputFormat::Json => write_file(s, ".json", &render_json(s, t)?),
    }
}

fn write_report(s: &Scenario, checks: &[Check]) -> Result<PathBuf> {
    let mut out = header(s);
    let _ = writeln!(out, "# oracle.max_deviation = {}", num(s.max_deviation));
    out.push_str("quantity,curve,deviation,limit,passed\n");
    for c in checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.quantity,
            c.curve.map(num).unwrap_or_default(),
            num(c.deviation),
            num(c.limit),
            c.passed()
        );
    }
    write_file(s, ".oracle.csv", &out)
}

const E1G2: SystemState = SystemState::new(true, false, 0);
const G1E2: SystemState = SystemState::new(false, true, 0);
const E1E2: SystemState = SystemState::new(true, true, 0);
const G1G2: SystemState = SystemState::new(false, false, 0);

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn node(run: &OracleRun, s: SystemState, emitted: &[Bath]) -> Result<Vec<f64>> {
    run.node(s, emitted)
        .ok_or_else(|| Error::Precondition(format!("oracle network has no node {s} {emitted:?}")))
}

/// Oracle values of each closed-form column of a trace kind.
fn oracle_columns(kind: ScenarioKind, run: &OracleRun) -> Result<Vec<(&'static str, Vec<f64>)>> {
    use Bath::{B1, B2, B3};
    Ok(match kind {
        ScenarioKind::SingleTraces | ScenarioKind::GapMap => vec![
            ("p_surv", node(run, E1G2, &[])?),
            ("p_exchg", node(run, G1E2, &[])?),
            ("p_se", node(run, G1G2, &[B1])?),
            ("p_em2", node(run, G1G2, &[B2])?),
        ],
        ScenarioKind::DoubleTraces => vec![
            ("p_surv", node(run, E1E2, &[])?),
            ("p_em2", node(run, E1G2, &[B2])?),
            ("p_emx1", node(run, E1G2, &[B1])?),
            ("p_total", run.population_where(|s| s.qubit1_excited)),
        ],
        ScenarioKind::TwoPhotonTraces | ScenarioKind::TwoPhotonMap => {
            let em12 = run.two_photon(B1, B2);
            let em21 = run.two_photon(B2, B1);
            let total = em12.iter().zip(&em21).map(|(a, b)| a + b).collect();
            vec![
                ("p_em11", run.two_photon(B1, B1)),
                ("p_em22", run.two_photon(B2, B2)),
                ("p_em12", em12),
                ("p_em21", em21),
                ("p_total12", total),
            ]
        }
        ScenarioKind::TcmTraces | ScenarioKind::DecayRouteMap => vec![
            ("p_surv", node(run, E1G2, &[])?),
            ("p_em1", node(run, G1G2, &[B1])?),
            ("p_emx2", node(run, G1G2, &[B2])?),
            ("p_emr", node(run, G1G2, &[B3])?),
        ],
        _ => Vec::new(),
    })
}

fn network_for(kind: ScenarioKind) -> NetworkKind {
    match kind {
        ScenarioKind::SingleTraces | ScenarioKind::GapMap => NetworkKind::TwoQubitSingle,
        ScenarioKind::DoubleTraces | ScenarioKind::TwoPhotonTraces | ScenarioKind::TwoPhotonMap => {
            NetworkKind::TwoQubitDouble
        }
        ScenarioKind::JcmTraces => NetworkKind::JcmTwoExcitation,
        _ => NetworkKind::TcmSingle,
    }
}

/// Time after which every channel of `p` has settled to well below the
/// check limits.
fn settle_time(p: &SystemParams) -> f64 {
    let slowest = [p.gamma1, p.gamma2, p.kappa]
        .into_iter()
        .filter(|r| *r > 0.0)
        .fold(f64::INFINITY, f64::min);
    60.0 / slowest
}

/// Compares the closed-form results of a computed table with the oracle.
pub fn oracle_checks(s: &Scenario, t: &Table) -> Result<Vec<Check>> {
    let limit = s.max_deviation;
    let net = build_network(network_for(s.kind));
    let per_block = map_indexed(t.blocks.len(), |b| {
        let block = &t.blocks[b];
        let p = &block.params;
        let check = |quantity: &str, deviation: f64| Check {
            quantity: quantity.into(),
            curve: block.curve,
            deviation,
            limit,
        };
        let mut out = Vec::new();
        if s.kind == ScenarioKind::JcmTraces {
            let tr = evolve_jcm_two_excitation(p, &s.time, s.oracle.tol * 1e-2)?;
            let ours = t.column(b, "p_surv").unwrap_or_default();
            out.push(check("p_surv", sup(&ours, &tr.survival.values)));
            let ours = t.column(b, "p_cavity").unwrap_or_default();
            out.push(check("p_cavity", sup(&ours, &tr.cavity.values)));
        } else if s.kind.is_trace() {
            let run = oracle_evolve(&net, p, &s.oracle, &s.time)?;
            for (name, values) in oracle_columns(s.kind, &run)? {
                if let Some(ours) = t.column(b, name) {
                    out.push(check(name, sup(&ours, &values)));
                }
            }
        } else if let Some((xn, yn)) = s.kind.axes() {
            // corners and centre of the map
            let (nx, ny) = (s.x_axis.len(), s.y_axis.len());
            let mut picks = vec![(0, 0), (nx - 1, 0), (0, ny - 1), (nx - 1, ny - 1), (nx / 2, ny / 2)];
            picks.dedup();
            for (i, j) in picks {
                let mut q = *p;
                q.set(xn, s.x_axis[i])?;
                q.set(yn, s.y_axis[j])?;
                if s.kind == ScenarioKind::DecayRouteMap {
                    q.gamma2 = q.kappa;
                }
                let run = oracle_evolve(&net, &q, &s.oracle, &[settle_time(&q)])?;
                let row = &block.rows[j * nx + i];
                for (name, values) in oracle_columns(s.kind, &run)? {
                    if let Some(k) = t.columns.iter().position(|c| c == name) {
                        if let Some(v) = row[k].num() {
                            let label = format!(
                                "{name}@{xn}={},{yn}={}",
                                num(s.x_axis[i]),
                                num(s.y_axis[j])
                            );
                            out.push(check(&label, (v - values[0]).abs()));
                        }
                    }
                }
            }
        } else {
            out.extend(spectrum_checks(s, t, b)?.into_iter().map(|(q, d)| check(&q, d)));
        }
        Ok(out)
    })?;
    Ok(per_block.into_iter().flatten().collect())
}

/// At most this many grid points are compared per spectrum.
const SPECTRUM_SAMPLES: usize = 201;

fn spectrum_checks(s: &Scenario, t: &Table, b: usize) -> Result<Vec<(String, f64)>> {
    let p = &t.blocks[b].params;
    let grid = t.column(b, "delta2").unwrap_or_default();
    let main = if s.kind == ScenarioKind::RamanSpectrum {
        "s_raman"
    } else {
        "s_emx2"
    };
    let values = t.column(b, main).unwrap_or_default();
    let step = grid.len().div_ceil(SPECTRUM_SAMPLES).max(1);
    let peak = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut idx: Vec<usize> = (0..grid.len()).step_by(step).collect();
    idx.push(peak);
    idx.sort_unstable();
    idx.dedup();
    let sub: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
    let freqs: Vec<f64> = sub.iter().map(|d| d + p.omega02).collect();
    let net = build_network(NetworkKind::TcmSingle);
    let density = oracle_spectrum(&net, p, &s.oracle, Bath::B2, &freqs)?;
    let mut out = Vec::new();
    // absolute densities agree without any normalisation
    let closed = exchange_emission_density(p, &sub)?;
    let top = closed.iter().cloned().fold(0.0, f64::max);
    out.push(("emx2_density".to_string(), sup(&closed, &density) / top));
    let ours: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let theirs: Vec<f64> = if s.kind == ScenarioKind::RamanSpectrum {
        sub.iter()
            .zip(&density)
            .map(|(&d, v)| s.pulse.intensity(d) * v)
            .collect()
    } else {
        density
    };
    out.push((format!("{main}_shape"), sup(&unit_peak(&ours), &unit_peak(&theirs))));
    Ok(out)
}

fn unit_peak(v: &[f64]) -> Vec<f64> {
    let top = v.iter().cloned().fold(0.0, f64::max);
    v.iter().map(|x| x / top).collect()
}
