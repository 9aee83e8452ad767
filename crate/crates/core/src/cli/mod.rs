//! Command-line front end: argument parsing, dispatch, and CSV/JSON/pretty
//! emission of labeled value tables.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 a
//! `reproduce` run finished but at least one cell missed its tolerance.

pub mod reproduce;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accel::{self, AccelError, ShanksTerm};
use crate::eigensolve::{self, EigensolveError};
use crate::grid::GridConfig;
use crate::oracles::{self, OracleError};
use crate::potential::{PotentialError, PotentialSpec};
use crate::ptsym::{self, PTError};
use crate::series::{EnergySeries, SeriesError};
use crate::variational;

/// Name of the environment variable holding a partial GridConfig JSON
/// blob; explicit command-line flags still win over it.
pub const GRID_OVERRIDE_ENV: &str = "ENERGY_SERIES_GRID_OVERRIDE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Eigensolve(#[from] EigensolveError),
    #[error(transparent)]
    Accel(#[from] AccelError),
    #[error(transparent)]
    Pt(#[from] PTError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    #[value(name = "T1")]
    T1,
    #[value(name = "T2")]
    T2,
    #[value(name = "T3")]
    T3,
    #[value(name = "T4")]
    T4,
    #[value(name = "T5")]
    T5,
    #[value(name = "T6")]
    T6,
    #[value(name = "T7")]
    T7,
    #[value(name = "S3-shanks")]
    S3Shanks,
    #[value(name = "S4-expect")]
    S4Expect,
    #[value(name = "S5-pt")]
    S5Pt,
    #[value(name = "E18")]
    E18,
    #[value(name = "E20")]
    E20,
    #[value(name = "E22")]
    E22,
    #[value(name = "E23")]
    E23,
}

impl TableId {
    pub fn id(&self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
            TableId::T6 => "T6",
            TableId::T7 => "T7",
            TableId::S3Shanks => "S3-shanks",
            TableId::S4Expect => "S4-expect",
            TableId::S5Pt => "S5-pt",
            TableId::E18 => "E18",
            TableId::E20 => "E20",
            TableId::E22 => "E22",
            TableId::E23 => "E23",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "energy-series",
    version,
    about = "Eigenvalues of one-dimensional wells from the power series of the quantization function f(E)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output layout
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Uniform mesh step on [0, 1]
    #[arg(long, global = true)]
    base_step: Option<f64>,
    /// Bound on the estimated profile mass beyond the truncation point
    #[arg(long, global = true)]
    tail_tol: Option<f64>,
    /// Hard cap on the profile truncation point
    #[arg(long, global = true)]
    xmax_cap: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Expansion coefficients a_k with grid-refinement error estimates
    Coeffs {
        #[arg(long)]
        potential: PotentialSpec,
        #[arg(long)]
        order: usize,
    },
    /// Ground-state estimates from successive truncations of f(E) = 1
    Ground {
        #[arg(long)]
        potential: PotentialSpec,
        #[arg(long)]
        order: usize,
    },
    /// Accelerate a numeric column read from a CSV file
    Shanks {
        /// CSV file; the column is picked by header name or index
        #[arg(long)]
        input: PathBuf,
        /// Column header name, or a zero-based index
        #[arg(long, default_value = "value")]
        column: String,
    },
    /// Level tables from diagonal rational approximants of f
    Levels {
        #[arg(long)]
        potential: PotentialSpec,
        /// Highest diagonal order; needs 2x as many series coefficients
        #[arg(long)]
        pade_order: usize,
    },
    /// Variational sharpening of the truncation roots
    Expect {
        #[arg(long)]
        potential: PotentialSpec,
        #[arg(long)]
        order: usize,
    },
    /// Spectrum of the non-Hermitian -(ix)^N family on its real-spectrum branch
    Pt {
        /// Power N >= 2 of the potential
        #[arg(long = "N")]
        exponent: f64,
        #[arg(long)]
        order: usize,
    },
    /// Direct eigenvalue reference, independent of the series pipeline
    Oracle {
        #[arg(long)]
        potential: PotentialSpec,
        #[arg(long)]
        level: usize,
    },
    /// Closed-form quantization function reference
    OracleF {
        #[arg(long)]
        potential: PotentialSpec,
        #[arg(long = "E")]
        energy: f64,
    },
    /// Recompute one published table and gate each cell on its tolerance
    Reproduce {
        #[arg(ignore_case = true)]
        table: TableId,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Coeffs { .. } => "coeffs",
            Command::Ground { .. } => "ground",
            Command::Shanks { .. } => "shanks",
            Command::Levels { .. } => "levels",
            Command::Expect { .. } => "expect",
            Command::Pt { .. } => "pt",
            Command::Oracle { .. } => "oracle",
            Command::OracleF { .. } => "oracle-f",
            Command::Reproduce { .. } => "reproduce",
        }
    }

    fn potential_label(&self) -> Option<String> {
        match self {
            Command::Coeffs { potential, .. }
            | Command::Ground { potential, .. }
            | Command::Levels { potential, .. }
            | Command::Expect { potential, .. }
            | Command::Oracle { potential, .. }
            | Command::OracleF { potential, .. } => Some(potential.to_string()),
            Command::Pt { exponent, .. } => Some(format!("ptpower:{exponent}")),
            Command::Shanks { .. } | Command::Reproduce { .. } => None,
        }
    }
}

/// Fully resolved invocation: subcommand, grid, and emission settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridConfig,
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn usage_error(msg: String) -> clap::Error {
    Cli::command().error(ErrorKind::ValueValidation, msg)
}

// Grid resolution order: defaults, then the environment override blob,
// then explicit flags.
fn resolve_grid(
    env_blob: Option<&str>,
    base_step: Option<f64>,
    tail_tol: Option<f64>,
    xmax_cap: Option<f64>,
) -> Result<GridConfig, String> {
    let mut grid = match env_blob {
        Some(blob) if !blob.trim().is_empty() => serde_json::from_str::<GridConfig>(blob)
            .map_err(|e| format!("invalid {GRID_OVERRIDE_ENV} JSON: {e}"))?,
        _ => GridConfig::default(),
    };
    if let Some(v) = base_step {
        grid.base_step = v;
    }
    if let Some(v) = tail_tol {
        grid.tail_tol = v;
    }
    if let Some(v) = xmax_cap {
        grid.xmax_cap = v;
    }
    if !(grid.base_step > 0.0 && grid.tail_tol > 0.0 && grid.xmax_cap > 1.0) {
        return Err("grid overrides out of range: need base_step > 0, tail_tol > 0, xmax_cap > 1".into());
    }
    Ok(grid)
}

/// Parse argv into a validated [`RunConfig`]. Help and version requests
/// surface as `clap` errors with their usual rendering.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let order = match &cli.command {
        Command::Coeffs { order, .. }
        | Command::Ground { order, .. }
        | Command::Expect { order, .. }
        | Command::Pt { order, .. } => Some(*order),
        Command::Levels { pade_order, .. } => Some(*pade_order),
        _ => None,
    };
    if order == Some(0) {
        return Err(usage_error("--order must be at least 1".into()));
    }
    let env_blob = std::env::var(GRID_OVERRIDE_ENV).ok();
    let grid = resolve_grid(env_blob.as_deref(), cli.base_step, cli.tail_tol, cli.xmax_cap)
        .map_err(usage_error)?;
    Ok(RunConfig {
        command: cli.command,
        grid,
        format: cli.format,
        output: cli.output,
    })
}

/// One labeled result cell. `reference` and `abs_error` are filled when a
/// frozen comparison value exists; `note` carries human context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub abs_error: Option<f64>,
    pub note: Option<String>,
}

impl Row {
    fn plain(label: impl Into<String>, value: f64) -> Row {
        Row {
            label: label.into(),
            value: Some(value),
            reference: None,
            abs_error: None,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub potential: Option<String>,
    pub grid: GridConfig,
    /// Headline acceptance tolerance for reproduce runs.
    pub tolerance: Option<f64>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: Vec<Row>,
}

impl Report {
    fn new(command: &Command, grid: &GridConfig, rows: Vec<Row>) -> Report {
        Report {
            meta: Meta {
                command: command.name().to_string(),
                potential: command.potential_label(),
                grid: *grid,
                tolerance: None,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            rows,
        }
    }
}

fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(1e-3..1e7).contains(&a) {
        format!("{v:.9e}")
    } else {
        let s = format!("{v:.10}");
        let s = s.trim_end_matches('0');
        s.trim_end_matches('.').to_string()
    }
}

fn render_pretty(report: &Report) -> String {
    let mut out = String::new();
    let m = &report.meta;
    out.push_str(&format!("command: {}", m.command));
    if let Some(p) = &m.potential {
        out.push_str(&format!("   potential: {p}"));
    }
    out.push_str(&format!("   version: {}\n", m.version));
    let g = &m.grid;
    out.push_str(&format!(
        "grid: base_step={} growth={} step_cap={} resolution={} ode_resolution={} tail_tol={:e} xmax_cap={}\n",
        g.base_step, g.growth, g.step_cap, g.resolution, g.ode_resolution, g.tail_tol, g.xmax_cap
    ));
    if let Some(t) = m.tolerance {
        out.push_str(&format!("headline tolerance: {t:e}\n"));
    }
    out.push('\n');
    let cells: Vec<[String; 4]> = report
        .rows
        .iter()
        .map(|r| {
            [
                r.label.clone(),
                r.value.map(fmt_value).unwrap_or_default(),
                r.reference.map(fmt_value).unwrap_or_default(),
                r.abs_error.map(|e| format!("{e:.2e}")).unwrap_or_default(),
            ]
        })
        .collect();
    let header = ["label", "value", "reference", "abs_error"];
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cols: [&str; 4], note: Option<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(widths.iter()).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(&format!("{c:<w$}"));
        }
        if let Some(n) = note {
            s.push_str("  ");
            s.push_str(n);
        }
        s.trim_end().to_string() + "\n"
    };
    out.push_str(&line(header, Some("note")));
    for (row, cell) in report.rows.iter().zip(cells.iter()) {
        out.push_str(&line(
            [cell[0].as_str(), cell[1].as_str(), cell[2].as_str(), cell[3].as_str()],
            row.note.as_deref(),
        ));
    }
    out
}

fn render_csv(report: &Report) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "value", "reference", "abs_error"])
        .map_err(|e| CliError::Io(e.to_string()))?;
    for r in &report.rows {
        let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            r.label.clone(),
            f(r.value),
            f(r.reference),
            f(r.abs_error),
        ])
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Render a report in the requested format. JSON output parses back into
/// an equal `Report`.
pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Pretty => Ok(render_pretty(report)),
        Format::Csv => render_csv(report),
        Format::Json => serde_json::to_string_pretty(report)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn series_for(spec: PotentialSpec, order: usize, grid: &GridConfig) -> Result<EnergySeries, CliError> {
    if !spec.is_hermitian() {
        return Err(CliError::Usage(format!(
            "{spec} is handled by the `pt` command; this command takes power:N or square-well"
        )));
    }
    Ok(EnergySeries::build(spec, order, grid)?)
}

// Reference ground energy when an independent route exists, used for the
// ratio columns of `ground` and `expect`.
fn reference_ground(spec: PotentialSpec) -> Option<f64> {
    match spec {
        PotentialSpec::SquareWell => Some(std::f64::consts::PI.powi(2) / 4.0),
        PotentialSpec::PowerLaw(n) if n == 2.0 => Some(1.0),
        PotentialSpec::PowerLaw(_) => oracles::shooting_level(spec, 0).ok().map(|r| r.value),
        PotentialSpec::PTPower(_) => None,
    }
}

fn run_coeffs(spec: PotentialSpec, order: usize, grid: &GridConfig) -> Result<Vec<Row>, CliError> {
    let series = series_for(spec, order, grid)?;
    let errors = series.coeff_errors();
    Ok(series
        .coefficients()
        .iter()
        .zip(errors.iter())
        .enumerate()
        .map(|(k, (a, err))| Row {
            label: format!("a_{}", k + 1),
            value: Some(*a),
            reference: None,
            abs_error: Some(*err),
            note: None,
        })
        .collect())
}

fn run_ground(spec: PotentialSpec, order: usize, grid: &GridConfig) -> Result<Vec<Row>, CliError> {
    let series = series_for(spec, order, grid)?;
    let exact = reference_ground(spec);
    let mut rows = Vec::new();
    for n in 1..=order {
        let est = eigensolve::truncated_root(&series, n)?;
        rows.push(Row {
            label: format!("E_{n}"),
            value: Some(est.value),
            reference: exact,
            abs_error: exact.map(|e| (est.value - e).abs()),
            note: est.error_estimate.map(|b| format!("tail bound {b:.1e}")),
        });
    }
    if let Some(e) = exact {
        for n in 1..=order {
            let est = eigensolve::truncated_root(&series, n)?;
            rows.push(Row::plain(format!("E_{n}/E_exact"), est.value / e));
        }
    }
    Ok(rows)
}

fn run_shanks(input: &PathBuf, column: &str) -> Result<Vec<Row>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("malformed CSV: {e}")))?;
    if records.is_empty() {
        return Err(CliError::Usage("input CSV is empty".into()));
    }
    // column selection: a header cell matching `column` wins, then a
    // numeric index, then the first field that parses in each row
    let header_pos = records[0].iter().position(|f| f.trim() == column);
    let index: Option<usize> = header_pos.or_else(|| column.parse().ok());
    let data = if header_pos.is_some() {
        &records[1..]
    } else {
        &records[..]
    };
    let mut values = Vec::new();
    for rec in data {
        let field = match index {
            Some(i) => rec.get(i).and_then(|f| f.trim().parse::<f64>().ok()),
            None => rec.iter().find_map(|f| f.trim().parse::<f64>().ok()),
        };
        if let Some(v) = field {
            values.push(v);
        }
    }
    if values.len() < 3 {
        return Err(CliError::Usage(format!(
            "column {column:?} yields {} numeric entries; the transform needs at least 3",
            values.len()
        )));
    }
    let terms = accel::shanks(&values)?;
    Ok(terms
        .iter()
        .enumerate()
        .map(|(i, t)| match t {
            ShanksTerm::Value(v) => Row::plain(format!("S_{}", i + 1), *v),
            ShanksTerm::Degenerate => Row {
                label: format!("S_{}", i + 1),
                value: None,
                reference: None,
                abs_error: None,
                note: Some("degenerate segment: flat input triple".into()),
            },
        })
        .collect())
}

fn run_levels(spec: PotentialSpec, pade_order: usize, grid: &GridConfig) -> Result<Vec<Row>, CliError> {
    let series = series_for(spec, 2 * pade_order, grid)?;
    let table = accel::level_table(&series, pade_order)?;
    let mut rows = Vec::new();
    for row in &table.rows {
        for level in &row.levels {
            let reference = oracles::shooting_level(spec, level.index).ok().map(|r| r.value);
            rows.push(Row {
                label: format!("P({0},{0}) E_{1}", row.pade_order, level.index),
                value: Some(level.value),
                reference,
                abs_error: reference.map(|r| (level.value - r).abs()),
                note: None,
            });
        }
    }
    Ok(rows)
}

fn run_expect(spec: PotentialSpec, order: usize, grid: &GridConfig) -> Result<Vec<Row>, CliError> {
    let series = series_for(spec, order, grid)?;
    let exact = reference_ground(spec);
    let mut rows = Vec::new();
    for n in 1..=order {
        let root = eigensolve::truncated_root(&series, n)?;
        let h = variational::expectation(&series, n)?;
        rows.push(Row::plain(format!("E_{n}"), root.value));
        rows.push(Row::plain(format!("<H>_{n}"), h.value));
        if let Some(e) = exact {
            rows.push(Row {
                label: format!("<H>_{n}/E_exact"),
                value: Some(h.value / e),
                reference: Some(1.0),
                abs_error: Some((h.value / e - 1.0).abs()),
                note: None,
            });
        }
    }
    Ok(rows)
}

fn run_pt(exponent: f64, order: usize, grid: &GridConfig) -> Result<Vec<Row>, CliError> {
    let base = EnergySeries::build(PotentialSpec::PowerLaw(exponent), order.max(3), grid)?;
    let pt = ptsym::pt_series(base, exponent)?;
    let e0 = oracles::stokes_line_ground(exponent)?.value;
    let mut rows = vec![Row::plain("E_0 (matched)", e0)];
    for n in 1..=order {
        let root = ptsym::pt_root(&pt, n)?;
        let h = ptsym::pt_expectation(&pt, n)?;
        rows.push(Row::plain(format!("E_{n}"), root.value));
        rows.push(Row::plain(format!("E_{n}/E_0"), root.value / e0));
        rows.push(Row::plain(format!("<H>_{n}/E_0"), h.value / e0));
    }
    Ok(rows)
}

fn run_oracle(spec: PotentialSpec, level: usize) -> Result<Vec<Row>, CliError> {
    let result = match spec {
        PotentialSpec::PTPower(n) => {
            if level != 0 {
                return Err(CliError::Oracle(OracleError::InvalidIndex(level, 0)));
            }
            oracles::stokes_line_ground(n)?
        }
        _ => oracles::shooting_level(spec, level)?,
    };
    Ok(vec![Row {
        label: format!("E_{level}"),
        value: Some(result.value),
        reference: None,
        abs_error: None,
        note: result.warning,
    }])
}

fn run_oracle_f(spec: PotentialSpec, energy: f64) -> Result<Vec<Row>, CliError> {
    let result = oracles::closed_form_f(spec, energy)?;
    Ok(vec![Row {
        label: format!("f({})", fmt_value(energy)),
        value: Some(result.value),
        reference: None,
        abs_error: None,
        note: result.warning,
    }])
}

fn write_out(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Execute a parsed invocation and return the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    let (report, code) = match &cfg.command {
        Command::Coeffs { potential, order } => (
            Report::new(&cfg.command, &cfg.grid, run_coeffs(*potential, *order, &cfg.grid)?),
            0,
        ),
        Command::Ground { potential, order } => (
            Report::new(&cfg.command, &cfg.grid, run_ground(*potential, *order, &cfg.grid)?),
            0,
        ),
        Command::Shanks { input, column } => (
            Report::new(&cfg.command, &cfg.grid, run_shanks(input, column)?),
            0,
        ),
        Command::Levels { potential, pade_order } => (
            Report::new(&cfg.command, &cfg.grid, run_levels(*potential, *pade_order, &cfg.grid)?),
            0,
        ),
        Command::Expect { potential, order } => (
            Report::new(&cfg.command, &cfg.grid, run_expect(*potential, *order, &cfg.grid)?),
            0,
        ),
        Command::Pt { exponent, order } => (
            Report::new(&cfg.command, &cfg.grid, run_pt(*exponent, *order, &cfg.grid)?),
            0,
        ),
        Command::Oracle { potential, level } => (
            Report::new(&cfg.command, &cfg.grid, run_oracle(*potential, *level)?),
            0,
        ),
        Command::OracleF { potential, energy } => (
            Report::new(&cfg.command, &cfg.grid, run_oracle_f(*potential, *energy)?),
            0,
        ),
        Command::Reproduce { table } => {
            let (mut report, breach) = reproduce::run(*table, &cfg.grid)?;
            report.meta.command = cfg.command.name().to_string();
            (report, if breach { 3 } else { 0 })
        }
    };
    let text = render(&report, cfg.format)?;
    write_out(&text, cfg.output.as_ref())?;
    Ok(code)
}

/// Full entry point used by the binary: parse, run, map errors to the
/// documented exit codes.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        parse_args(std::iter::once("energy-series").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn ground_invocation_parses_to_the_expected_config() {
        let cfg = parse(&["ground", "--potential", "square-well", "--order", "6"]);
        match cfg.command {
            Command::Ground { potential, order } => {
                assert_eq!(potential, PotentialSpec::SquareWell);
                assert_eq!(order, 6);
            }
            other => panic!("wrong command {other:?}"),
        }
        assert_eq!(cfg.format, Format::Pretty);
        assert_eq!(cfg.grid, GridConfig::default());
    }

    #[test]
    fn coeffs_invocation_carries_format_and_power_spec() {
        let cfg = parse(&["coeffs", "--potential", "power:4", "--order", "3", "--format", "json"]);
        match cfg.command {
            Command::Coeffs { potential, order } => {
                assert_eq!(potential, PotentialSpec::PowerLaw(4.0));
                assert_eq!(order, 3);
            }
            other => panic!("wrong command {other:?}"),
        }
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn nonpositive_exponent_is_a_usage_error() {
        let r = parse_args(["energy-series", "ground", "--potential", "power:0", "--order", "2"]);
        assert!(r.is_err());
    }

    #[test]
    fn zero_order_is_a_usage_error() {
        let r = parse_args(["energy-series", "ground", "--potential", "square-well", "--order", "0"]);
        assert!(r.is_err());
    }

    #[test]
    fn unknown_spec_error_echoes_the_grammar() {
        let err = parse_args(["energy-series", "ground", "--potential", "cubic", "--order", "2"])
            .unwrap_err();
        assert!(err.to_string().contains("square-well"), "{err}");
    }

    #[test]
    fn grid_override_blob_is_partial_and_flags_win() {
        let grid = resolve_grid(Some(r#"{"base_step": 0.004, "xmax_cap": 12.0}"#), None, None, Some(9.0))
            .unwrap();
        assert_eq!(grid.base_step, 0.004);
        assert_eq!(grid.xmax_cap, 9.0);
        assert_eq!(grid.growth, GridConfig::default().growth);
        assert!(resolve_grid(Some("{nope"), None, None, None).is_err());
    }

    #[test]
    fn json_report_round_trips_exactly() {
        let report = Report {
            meta: Meta {
                command: "ground".into(),
                potential: Some("power:2".into()),
                grid: GridConfig::default(),
                tolerance: Some(1e-4),
                version: "0.1.0".into(),
            },
            rows: vec![
                Row {
                    label: "E_1".into(),
                    value: Some(1.2732395447351628),
                    reference: Some(1.0),
                    abs_error: Some(0.2732395447351628),
                    note: None,
                },
                Row {
                    label: "S_2".into(),
                    value: None,
                    reference: None,
                    abs_error: None,
                    note: Some("degenerate segment".into()),
                },
            ],
        };
        let text = render(&report, Format::Json).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn csv_has_the_fixed_column_order() {
        let report = Report {
            meta: Meta {
                command: "coeffs".into(),
                potential: Some("square-well".into()),
                grid: GridConfig::default(),
                tolerance: None,
                version: "0".into(),
            },
            rows: vec![Row {
                label: "a_1".into(),
                value: Some(1.0 / 3.0),
                reference: None,
                abs_error: Some(1e-11),
                note: None,
            }],
        };
        let text = render(&report, Format::Csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("label,value,reference,abs_error"));
        let data = lines.next().unwrap();
        assert!(data.starts_with("a_1,0.3333333333333"), "{data}");
        assert!(data.ends_with(",,0.00000000001") || data.ends_with(",,1e-11"), "{data}");
    }

    #[test]
    fn shanks_column_selection_prefers_the_header() {
        let dir = std::env::temp_dir().join("energy-series-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ratios.csv");
        // geometric approach to 2: shanks of any inner triple is exact
        std::fs::write(&path, "label,value\nr_1,2.5\nr_2,2.25\nr_3,2.125\nr_4,2.0625\n").unwrap();
        let rows = run_shanks(&path, "value").unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert!((row.value.unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn table_ids_parse_case_insensitively() {
        let cfg = parse(&["reproduce", "t1"]);
        match cfg.command {
            Command::Reproduce { table } => assert_eq!(table.id(), "T1"),
            other => panic!("wrong command {other:?}"),
        }
        let cfg = parse(&["reproduce", "S4-EXPECT"]);
        match cfg.command {
            Command::Reproduce { table } => assert_eq!(table.id(), "S4-expect"),
            other => panic!("wrong command {other:?}"),
        }
    }
}
