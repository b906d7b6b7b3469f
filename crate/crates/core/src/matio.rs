//! Plain-text matrix files: a header line `rows cols`, then one line per row
//! of comma separated values printed with 17 significant digits.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits, independent of locale.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| format_f64(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::ParseError("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::ParseError(format!("bad header `{header}`: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(Error::ParseError(format!(
            "header must be `rows cols`, got `{header}`"
        )));
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (i, line) in lines.enumerate() {
        if i >= rows {
            return Err(Error::ParseError(format!("more than {rows} data rows")));
        }
        let before = data.len();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::ParseError(format!("row {}: bad number `{}`", i + 1, field.trim()))
            })?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(Error::ParseError(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                data.len() - before
            )));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::ParseError(format!(
            "expected {rows} data rows, found {seen}"
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}
