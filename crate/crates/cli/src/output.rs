//! CSV and JSON serialization, plus the CSV reader used by `plot`.
//!
//! Numbers are written in shortest round-trip decimal form, so parsing any
//! emitted value gives back the identical `f64`.

use std::fs;
use std::io::Write;
use std::path::Path;

use jcdyn::sweep::{Sample, SweepReport};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TIMESERIES_HEADER: [&str; 11] =
    ["gt", "g_eff", "x1", "x2", "x3_re", "x3_im", "x5", "x6", "concurrence", "purity", "energy"];
pub const EPE_HEADER: [&str; 4] = ["gt", "concurrence", "purity", "energy"];
pub const SCAN_HEADER: [&str; 17] = [
    "p",
    "kbar",
    "lbar",
    "delta",
    "g",
    "motion",
    "min_concurrence",
    "max_concurrence",
    "min_purity",
    "max_purity",
    "min_energy",
    "max_energy",
    "death_intervals",
    "first_death",
    "death_span",
    "period_estimate",
    "expected_period",
];

/// Shortest decimal string that parses back to `v`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn timeseries_row(s: &Sample) -> [f64; 11] {
    let r = &s.rho;
    [s.gt, s.g_eff, r.x1, r.x2, r.x3.re, r.x3.im, r.x5, r.x6, s.epe.concurrence, s.epe.purity, s.epe.energy]
}

fn epe_row(s: &Sample) -> [f64; 4] {
    [s.gt, s.epe.concurrence, s.epe.purity, s.epe.energy]
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> CliResult<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn timeseries_csv(samples: &[Sample]) -> CliResult<Vec<u8>> {
    csv_bytes(&TIMESERIES_HEADER, samples.iter().map(|s| timeseries_row(s).map(num)))
}

pub fn epe_csv(samples: &[Sample]) -> CliResult<Vec<u8>> {
    csv_bytes(&EPE_HEADER, samples.iter().map(|s| epe_row(s).map(num)))
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn scan_csv(reports: &[SweepReport]) -> CliResult<Vec<u8>> {
    let rows = reports.iter().map(|r| {
        let c = &r.config;
        let span = r.death_intervals.iter().fold(0.0, |acc, (a, b)| acc + (b - a));
        vec![
            c.params.p.to_string(),
            num(c.kbar),
            num(c.lbar),
            num(c.params.delta),
            num(c.params.g),
            c.params.motion_enabled.to_string(),
            num(r.concurrence.min),
            num(r.concurrence.max),
            num(r.purity.min),
            num(r.purity.max),
            num(r.energy.min),
            num(r.energy.max),
            r.death_intervals.len().to_string(),
            opt(r.death_intervals.first().map(|d| d.0)),
            num(span),
            opt(r.period_estimate),
            opt(r.expected_period),
        ]
    });
    csv_bytes(&SCAN_HEADER, rows)
}

/// Inputs echoed into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub command: &'static str,
    pub version: &'static str,
    #[serde(flatten)]
    pub inputs: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl Metadata {
    pub fn new(command: &'static str, inputs: serde_json::Value, timestamp: bool) -> Self {
        let generated_unix = timestamp.then(|| {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        });
        Self { command, version: env!("CARGO_PKG_VERSION"), inputs, generated_unix }
    }
}

fn columns<const N: usize>(header: &[&str; N], rows: impl Iterator<Item = [f64; N]>) -> serde_json::Map<String, serde_json::Value> {
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); N];
    for row in rows {
        for (col, v) in cols.iter_mut().zip(row) {
            col.push(v);
        }
    }
    header.iter().zip(cols).map(|(h, c)| ((*h).to_owned(), serde_json::Value::from(c))).collect()
}

fn json_bytes(metadata: &Metadata, body_key: &str, body: serde_json::Value) -> CliResult<Vec<u8>> {
    let mut root = serde_json::Map::new();
    root.insert("metadata".into(), serde_json::to_value(metadata).map_err(|e| CliError::Io(e.to_string()))?);
    root.insert(body_key.into(), body);
    let mut out = serde_json::to_vec_pretty(&root).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn timeseries_json(samples: &[Sample], metadata: &Metadata) -> CliResult<Vec<u8>> {
    let cols = columns(&TIMESERIES_HEADER, samples.iter().map(timeseries_row));
    json_bytes(metadata, "columns", cols.into())
}

pub fn epe_json(samples: &[Sample], metadata: &Metadata) -> CliResult<Vec<u8>> {
    let cols = columns(&EPE_HEADER, samples.iter().map(epe_row));
    json_bytes(metadata, "columns", cols.into())
}

pub fn scan_json(reports: &[SweepReport], metadata: &Metadata) -> CliResult<Vec<u8>> {
    json_bytes(metadata, "reports", serde_json::to_value(reports).map_err(|e| CliError::Io(e.to_string()))?)
}

/// Writes the finished buffer in one go, to a file or standard output.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Numeric CSV table held column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }
}

/// Reads a numeric CSV with a header row. Errors name the offending line.
pub fn read_table(path: &Path) -> CliResult<Table> {
    let file = fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let parse_err = |line: u64, msg: String| CliError::Io(format!("{}: line {line}: {msg}", path.display()));
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(e.position().map_or(1, |p| p.line()), e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(parse_err(1, "missing header".into()));
    }
    let mut columns = vec![Vec::new(); header.len()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v = field.trim().parse::<f64>().map_err(|_| parse_err(line, format!("`{field}` is not a number")))?;
            col.push(v);
        }
    }
    Ok(Table { header, columns })
}
