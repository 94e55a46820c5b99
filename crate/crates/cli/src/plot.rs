// SPDX-License-Identifier: Apache-2.0

//! Plot-data tables: one `x` column followed by one column per series.

use carbon3d_core::explorer::{ParetoRow, SweepAxis, SweepResult, SwitchingPoint};
use carbon3d_core::report::{axis_unit, Cell, Column, ReportDocument};
use serde_json::Value;

const KG: &str = "kg CO2e";

fn label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Sweep rows pivoted on the last axis. Each combination of the other axes
/// contributes an embodied and a total series.
pub fn sweep(result: &SweepResult, axes: &[SweepAxis], digest: String) -> ReportDocument {
    let last = axes.last().expect("sweeps have at least one axis");
    let m = last.values.len();
    let combos = result.rows.len() / m;
    let mut columns = vec![Column::new("x", axis_unit(&last.path))];
    for c in 0..combos {
        let row = &result.rows[c * m];
        let key: Vec<String> = axes[..axes.len() - 1]
            .iter()
            .zip(&row.values)
            .map(|(a, v)| format!("{}={}", a.path, label(v)))
            .collect();
        let prefix = if key.is_empty() {
            String::new()
        } else {
            format!("{}:", key.join(";"))
        };
        columns.push(Column::new(format!("{prefix}c_embodied_overall"), KG));
        columns.push(Column::new(format!("{prefix}c_total"), KG));
    }
    let mut doc = ReportDocument::new("sweep-plot", digest, columns);
    for k in 0..m {
        let mut cells = vec![Cell::from(&last.values[k])];
        for c in 0..combos {
            let carbon = &result.rows[c * m + k].evaluation.carbon;
            cells.push(carbon.c_embodied_overall.into());
            cells.push(carbon.c_total.into());
        }
        doc.rows.push(cells);
    }
    doc
}

/// Pre-scan of a switching-point search: embodied carbon of the design minus
/// its 2D equivalent against gate count.
pub fn switch(point: &SwitchingPoint, digest: String) -> ReportDocument {
    let columns = vec![Column::new("x", "gates"), Column::new("embodied_gap", KG)];
    let mut doc = ReportDocument::new("switch-plot", digest, columns);
    for &(x, y) in &point.search.scan {
        doc.rows.push(vec![x.into(), y.into()]);
    }
    doc
}

/// Normalized tCDP of each design against γ.
pub fn pareto(rows: &[ParetoRow], labels: &[String], gammas: &[f64], digest: String) -> ReportDocument {
    let mut columns = vec![Column::new("x", "")];
    columns.extend(labels.iter().map(|l| Column::new(l.clone(), "")));
    let mut doc = ReportDocument::new("pareto-plot", digest, columns);
    for (k, &g) in gammas.iter().enumerate() {
        let mut cells = vec![Cell::from(g)];
        cells.extend((0..labels.len()).map(|d| Cell::from(rows[d * gammas.len() + k].normalized_tcdp)));
        doc.rows.push(cells);
    }
    doc
}
