// SPDX-License-Identifier: Apache-2.0

//! Machine-readable reports.
//!
//! A [`ReportDocument`] is one table with a unit for every column. CSV output
//! starts with `#`-prefixed metadata lines (schema version, command, input
//! digest, a `#units` row aligned with the header, warnings); the switching
//! point footer is also commented out so plain CSV readers skip it. Numbers
//! use the shortest representation that parses back to the same `f64`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::explorer::{Crossing, ParetoRow, SweepResult, SwitchingPoint};
use crate::params::units::Dimension;
use crate::params::Config;
use crate::pipeline::Evaluation;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(format_f64(*v)),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&Value> for Cell {
    fn from(v: &Value) -> Self {
        match v {
            Value::Number(n) => match n.as_u64() {
                Some(u) => Cell::Int(u),
                None => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        }
    }
}

/// Shortest round-trip decimal form; exponent notation outside
/// `[1e-5, 1e15)`.
pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-5..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs_digest: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Trailing `key,value...` lines, e.g. switching points.
    pub footer: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
}

/// SHA-256 (hex) of the canonical serialization of `value`. Object keys are
/// sorted, so equal inputs give equal digests.
pub fn digest(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("JSON values always serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of resolved configurations plus the command parameters.
pub fn inputs_digest(configs: &[&Config], params: &Value) -> String {
    let docs: Vec<Value> = configs.iter().map(|c| c.to_document()).collect();
    digest(&json!({"configs": docs, "params": params}))
}

impl ReportDocument {
    pub fn new(command: &str, inputs_digest: String, columns: Vec<Column>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            inputs_digest,
            columns,
            rows: Vec::new(),
            footer: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn units(&self) -> BTreeMap<&str, &str> {
        self.columns
            .iter()
            .map(|c| (c.name.as_str(), c.unit.as_str()))
            .collect()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(["#schema_version", &self.schema_version])?;
        w.write_record(["#command", &self.command])?;
        w.write_record(["#inputs_digest", &self.inputs_digest])?;
        w.write_record(std::iter::once("#units").chain(self.columns.iter().map(|c| c.unit.as_str())))?;
        for warning in &self.warnings {
            w.write_record(["#warning", warning])?;
        }
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        for line in &self.footer {
            let mut fields: Vec<String> = line.iter().map(Cell::render).collect();
            if let Some(first) = fields.first_mut() {
                first.insert(0, '#');
            }
            w.write_record(&fields)?;
        }
        w.flush()?;
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.name.clone(), v.to_json()))
                        .collect(),
                )
            })
            .collect();
        let footer: Vec<Value> = self
            .footer
            .iter()
            .map(|l| Value::Array(l.iter().map(Cell::to_json).collect()))
            .collect();
        json!({
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "columns": self.columns.iter().map(|c| &c.name).collect::<Vec<_>>(),
            "units": self.units(),
            "rows": rows,
            "footer": footer,
            "warnings": self.warnings,
        })
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(&self.to_json_value())?;
        out.push(b'\n');
        Ok(out)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

const KG: &str = "kg CO2e";

/// Columns describing one evaluated design, shared by estimate and sweep
/// reports.
pub fn evaluation_columns() -> Vec<Column> {
    vec![
        Column::new("integration", ""),
        Column::new("n_dies", ""),
        Column::new("gamma", ""),
        Column::new("equivalent_2d_area", "cm2"),
        Column::new("total_die_area", "cm2"),
        Column::new("package_area", "cm2"),
        Column::new("substrate_area", "cm2"),
        Column::new("c_die", KG),
        Column::new("c_bonding", KG),
        Column::new("c_packaging", KG),
        Column::new("c_substrate", KG),
        Column::new("c_embodied_overall", KG),
        Column::new("energy", "kWh"),
        Column::new("c_operational", KG),
        Column::new("c_embodied_amortized", KG),
        Column::new("c_total", KG),
        Column::new("cdp", "kg CO2e*s"),
        Column::new("cep", "kg CO2e*kWh"),
        Column::new("tcdp", "kg CO2e*s"),
    ]
}

pub fn evaluation_cells(integration: &str, n_dies: usize, ev: &Evaluation) -> Vec<Cell> {
    let c = &ev.carbon;
    let g = &ev.geometry;
    vec![
        integration.into(),
        (n_dies as u64).into(),
        c.gamma.into(),
        g.equivalent_2d_area.into(),
        g.total_die_area().into(),
        g.package_area.into(),
        g.substrate_area.into(),
        c.c_die.into(),
        c.c_bonding.into(),
        c.c_packaging.into(),
        c.c_substrate.into(),
        c.c_embodied_overall.into(),
        c.energy.into(),
        c.c_operational.into(),
        c.c_embodied_amortized.into(),
        c.c_total.into(),
        c.metrics.cdp.into(),
        c.metrics.cep.into(),
        c.metrics.tcdp.into(),
    ]
}

/// Canonical unit of a sweep axis, taken from the field it sets.
pub fn axis_unit(path: &str) -> &'static str {
    let field = path.rsplit('.').next().unwrap_or(path);
    let field = field.split('[').next().unwrap_or(field);
    match Dimension::of_field(field) {
        Some(d) if d == Dimension::LENGTH => "cm",
        Some(d) if d == Dimension::AREA => "cm2",
        Some(d) if d == Dimension::ENERGY => "kWh",
        Some(d) if d == Dimension::ENERGY_PER_AREA => "kWh/cm2",
        Some(d) if d == Dimension::MASS_PER_AREA => "kg CO2e/cm2",
        Some(d) if d == Dimension::PER_AREA => "1/cm2",
        Some(d) if d == Dimension::CARBON_INTENSITY => "kg CO2e/kWh",
        Some(d) if d == Dimension::POWER_DENSITY => "W/cm2",
        Some(d) if d == Dimension::LIFETIME => "h",
        Some(d) if d == Dimension::DELAY => "s",
        _ => "",
    }
}

/// Single-design report with one row.
pub fn estimate_report(cfg: &Config, ev: &Evaluation, digest: String) -> ReportDocument {
    let mut doc = ReportDocument::new("estimate", digest, evaluation_columns());
    doc.rows.push(evaluation_cells(
        cfg.design.integration.as_str(),
        cfg.design.n_dies(),
        ev,
    ));
    doc.warnings = ev.warnings.clone();
    doc
}

/// Component-by-component report: one row per die followed by the bonding,
/// packaging and substrate terms and the totals.
pub fn breakdown_report(ev: &Evaluation, digest: String) -> ReportDocument {
    let columns = vec![
        Column::new("component", ""),
        Column::new("die", ""),
        Column::new("area", "cm2"),
        Column::new("beol_layers", ""),
        Column::new("dies_per_wafer", ""),
        Column::new("yield", ""),
        Column::new("carbon", KG),
    ];
    let mut doc = ReportDocument::new("estimate", digest, columns);
    for (i, (d, g)) in ev.carbon.dies.iter().zip(&ev.geometry.dies).enumerate() {
        doc.rows.push(vec![
            "die".into(),
            (i as u64).into(),
            g.total_area.into(),
            (g.beol_layers as u64).into(),
            d.dpw.into(),
            d.yield_y.into(),
            d.c_die.into(),
        ]);
    }
    let c = &ev.carbon;
    for (name, value) in [
        ("bonding", c.c_bonding),
        ("packaging", c.c_packaging),
        ("substrate", c.c_substrate),
        ("embodied_overall", c.c_embodied_overall),
        ("operational", c.c_operational),
        ("embodied_amortized", c.c_embodied_amortized),
        ("total", c.c_total),
    ] {
        let mut row: Vec<Cell> = vec![name.into()];
        row.extend((0..5).map(|_| Cell::from("")));
        row.push(value.into());
        doc.rows.push(row);
    }
    doc.warnings = ev.warnings.clone();
    doc
}

pub fn sweep_report(result: &SweepResult, digest: String) -> ReportDocument {
    let mut columns: Vec<Column> = result
        .axes
        .iter()
        .map(|a| Column::new(a.clone(), axis_unit(a)))
        .collect();
    columns.extend(evaluation_columns());
    let baseline = result.rows.iter().any(|r| r.baseline.is_some());
    if baseline {
        columns.push(Column::new("c_embodied_2d", KG));
        columns.push(Column::new("c_total_2d", KG));
    }
    let mut doc = ReportDocument::new("sweep", digest, columns);
    for row in &result.rows {
        let mut cells: Vec<Cell> = row.values.iter().map(Cell::from).collect();
        cells.extend(evaluation_cells(row.integration.as_str(), row.n_dies, &row.evaluation));
        if let Some(b) = &row.baseline {
            cells.push(b.c_embodied_overall.into());
            cells.push(b.c_total.into());
        }
        doc.rows.push(cells);
        for w in &row.evaluation.warnings {
            if !doc.warnings.contains(w) {
                doc.warnings.push(w.clone());
            }
        }
    }
    if !result.switching_points.is_empty() {
        doc.footer.push(vec!["switching_points".into()]);
        let last = result.axes.last().map(String::as_str).unwrap_or("");
        doc.footer.push(vec![
            "row".into(),
            last.into(),
            "integration".into(),
            "becomes_cheaper".into(),
        ]);
        for c in &result.switching_points {
            doc.footer.push(vec![
                (c.row as u64).into(),
                c.axis_value.into(),
                c.integration.as_str().into(),
                c.becomes_cheaper.to_string().into(),
            ]);
        }
    }
    doc
}

pub fn switch_report(point: &SwitchingPoint, digest: String) -> ReportDocument {
    let columns = vec![
        Column::new("integration", ""),
        Column::new("node", ""),
        Column::new("n_dies", ""),
        Column::new("status", ""),
        Column::new("gate_count", "gates"),
        Column::new("area_2d", "cm2"),
    ];
    let mut doc = ReportDocument::new("switch", digest, columns);
    let status = match point.crossing {
        Crossing::Always => "always_cheaper",
        Crossing::Never => "never_cheaper",
        Crossing::At(_) => "crossing",
    };
    doc.rows.push(vec![
        point.integration.as_str().into(),
        point.node.clone().into(),
        (point.n_dies as u64).into(),
        status.into(),
        point.gate_count.into(),
        point.area_2d.into(),
    ]);
    doc.warnings = point.search.warnings.clone();
    doc
}

pub fn pareto_report(rows: &[ParetoRow], digest: String) -> ReportDocument {
    let columns = vec![
        Column::new("design", ""),
        Column::new("gamma", ""),
        Column::new("c_operational", KG),
        Column::new("c_embodied_amortized", KG),
        Column::new("c_total", KG),
        Column::new("tcdp", "kg CO2e*s"),
        Column::new("normalized_tcdp", ""),
    ];
    let mut doc = ReportDocument::new("pareto", digest, columns);
    for r in rows {
        doc.rows.push(vec![
            r.design.clone().into(),
            r.gamma.into(),
            r.c_operational.into(),
            r.c_embodied_amortized.into(),
            r.c_total.into(),
            r.tcdp.into(),
            r.normalized_tcdp.into(),
        ]);
    }
    doc
}

/// Reads the data rows of a CSV report, skipping metadata and footer lines.
pub fn read_csv_rows(bytes: &[u8]) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(bytes);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}
