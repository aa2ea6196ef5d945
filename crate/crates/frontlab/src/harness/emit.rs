//! Deterministic file output: CSV with 12 significant digits and LF line
//! endings, JSON through ordered maps, and the Markdown report table.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::experiments::ExperimentRecord;

/// Float formatting used in every CSV cell: 12 significant digits.
pub fn csv_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 && v.abs() >= 1e-4 || v == 0.0 {
        // Integral values still carry full precision but read naturally.
        format!("{v:.6}")
    } else {
        format!("{v:.11e}")
    }
}

/// Write a CSV file: header row plus rows of preformatted cells.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

/// One row per criterion across all records, Markdown table format.
pub fn write_markdown_report(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut text = String::new();
    text.push_str("# Experiment report\n\n");
    text.push_str("| experiment | criterion | expected | provenance | measured | pass |\n");
    text.push_str("|---|---|---|---|---|---|\n");
    for rec in records {
        for c in &rec.criteria {
            let _ = writeln!(
                text,
                "| {} | {} | {} | {} | {} | {} |",
                rec.name,
                c.name,
                c.expected,
                c.provenance,
                csv_float(c.measured),
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    let total: usize = records.iter().map(|r| r.criteria.len()).sum();
    let passed: usize =
        records.iter().map(|r| r.criteria.iter().filter(|c| c.pass).count()).sum();
    let _ = writeln!(text, "\n{passed}/{total} criteria passed.");
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_have_12_significant_digits() {
        assert_eq!(csv_float(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(csv_float(2.0), "2.000000");
        assert_eq!(csv_float(-1.5e-7), "-1.50000000000e-7");
    }

    #[test]
    fn csv_emit_is_byte_identical_on_reemit() {
        let dir = std::env::temp_dir().join("frontlab_emit_test");
        std::fs::create_dir_all(&dir).unwrap();
        let rows: Vec<Vec<String>> = (0..10)
            .map(|k| vec![csv_float(k as f64 * 0.1), csv_float((k as f64).sin())])
            .collect();
        let p1 = dir.join("a.csv");
        let p2 = dir.join("b.csv");
        write_csv(&p1, &["t", "v"], &rows).unwrap();
        write_csv(&p2, &["t", "v"], &rows).unwrap();
        let a = std::fs::read(&p1).unwrap();
        let b = std::fs::read(&p2).unwrap();
        assert_eq!(a, b);
        assert!(a.ends_with(b"\n"));
        assert!(!a.contains(&b'\r'));
    }
}
