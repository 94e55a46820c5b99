// SPDX-License-Identifier: Apache-2.0

//! Plain-text tables for terminals. Carbon is shown in grams.

use std::fmt::Write;

use carbon3d_core::report::{format_f64, Cell, ReportDocument};

/// Converts a machine unit to its display unit and scale factor.
fn display_unit(unit: &str) -> (String, f64) {
    match unit.strip_prefix("kg CO2e") {
        Some(rest) => (format!("g CO2e{rest}"), 1000.0),
        None => (unit.to_string(), 1.0),
    }
}

fn human(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() {
        format_f64(v)
    } else if (1e-3..1e6).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.4e}")
    }
}

fn cell_text(cell: &Cell, scale: f64) -> String {
    match cell {
        Cell::Num(v) => human(v * scale),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

/// Renders a report. Single-row reports are shown vertically as
/// `name value unit`.
pub fn render(doc: &ReportDocument) -> String {
    let units: Vec<(String, f64)> = doc.columns.iter().map(|c| display_unit(&c.unit)).collect();
    let mut out = String::new();
    if doc.rows.len() == 1 {
        let width = doc.columns.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let cells: Vec<String> = doc.rows[0]
            .iter()
            .zip(&units)
            .map(|(c, (_, s))| cell_text(c, *s))
            .collect();
        let vwidth = cells.iter().map(String::len).max().unwrap_or(0);
        for ((col, text), (unit, _)) in doc.columns.iter().zip(&cells).zip(&units) {
            let line = format!("{:<width$}  {:>vwidth$}  {unit}", col.name, text);
            let _ = writeln!(out, "{}", line.trim_end());
        }
    } else {
        let header: Vec<String> = doc
            .columns
            .iter()
            .zip(&units)
            .map(|(c, (u, _))| {
                if u.is_empty() {
                    c.name.clone()
                } else {
                    format!("{} [{u}]", c.name)
                }
            })
            .collect();
        let body: Vec<Vec<String>> = doc
            .rows
            .iter()
            .map(|r| r.iter().zip(&units).map(|(c, (_, s))| cell_text(c, *s)).collect())
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| {
                body.iter()
                    .filter_map(|r| r.get(i))
                    .map(String::len)
                    .chain([header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: &[String]| {
            let parts: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect();
            parts.join("  ")
        };
        let _ = writeln!(out, "{}", line(&header));
        for row in &body {
            let _ = writeln!(out, "{}", line(row));
        }
    }
    for f in &doc.footer {
        let fields: Vec<String> = f.iter().map(|c| cell_text(c, 1.0)).collect();
        let _ = writeln!(out, "{}", fields.join("  "));
    }
    out
}
