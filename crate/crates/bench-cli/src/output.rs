//! CSV and JSON writers shared by every subcommand.

use anyhow::{ensure, Context, Result};
use serde::Serialize;
use std::path::Path;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// A row that knows its CSV header and textual fields.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
    /// Every numeric value in the row, checked for NaN and infinities.
    fn numbers(&self) -> Vec<f64>;
}

pub fn ensure_finite<R: CsvRow>(rows: &[R]) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        ensure!(r.numbers().iter().all(|x| x.is_finite()), "row {i} holds a non-finite value");
    }
    Ok(())
}

pub fn write_csv<R: CsvRow>(path: &Path, rows: &[R]) -> Result<()> {
    ensure_finite(rows)?;
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 0.0, 123456.789] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_opt(None), "");
    }
}
