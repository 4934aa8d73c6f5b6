//! CSV rendering for metric tables.
//!
//! The schema is fixed: header
//! `sweep_var,sweep_value,variant,metric,value,trials,stderr`, one row per
//! table entry, floats rendered with 17 significant digits, LF line
//! endings, rows in the canonical sort order. Re-running an identical
//! sweep therefore reproduces the file byte for byte.

use std::path::Path;

use onebit_doa::MetricTable;

use crate::CliError;

pub const CSV_HEADER: &str = "sweep_var,sweep_value,variant,metric,value,trials,stderr";

/// 17 significant digits, enough to round-trip any f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a table to CSV text in canonical row order.
pub fn render_csv(table: &MetricTable) -> String {
    let mut sorted = table.clone();
    sorted.sort_rows();
    let mut out = String::with_capacity(64 * (sorted.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &sorted.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.sweep_var,
            fmt17(row.sweep_value),
            row.variant,
            row.metric.as_str(),
            fmt17(row.value),
            row.trials,
            fmt17(row.stderr),
        ));
    }
    out
}

/// Write a table to `path` as CSV.
pub fn emit_csv(table: &MetricTable, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, render_csv(table))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
