//! Numeric CSV: header row, comma separated, 17 significant digits, '\n'
//! line endings.

use std::fmt::Write as _;

use super::CliError;

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render(header: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_value(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Checks an emitted table: consistent column count, finite values and a
/// strictly increasing first column.
pub fn validate(text: &str) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Numerical(format!("CSV self-check failed: {msg}")));
    if text.contains('\r') {
        return fail("carriage return in output".into());
    }
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return fail("empty output".into());
    };
    let width = header.split(',').count();
    let mut prev = f64::NEG_INFINITY;
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return fail(format!("row {} has {} fields, header has {width}", i + 1, fields.len()));
        }
        for f in &fields {
            match f.parse::<f64>() {
                Ok(x) if x.is_finite() => {}
                _ => return fail(format!("row {}: non-finite value '{f}'", i + 1)),
            }
        }
        let first: f64 = fields[0].parse().expect("checked above");
        if first <= prev {
            return fail(format!("row {}: first column not increasing", i + 1));
        }
        prev = first;
    }
    Ok(())
}
