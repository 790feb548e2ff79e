//! Plain-text 4×4 complex matrices: four rows of four whitespace-separated
//! entries such as `0.5`, `-0.5i`, `i` or `0.70710678-0.1e-3i`. Blank lines
//! and lines starting with `#` are ignored.

use std::path::Path;

use linalg_core::{ComplexMatrix, C64};

use crate::error::{io_err, Result, RunnerError};

fn number(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// Parses one `a+bi` entry.
pub fn parse_complex(s: &str) -> Option<C64> {
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse().ok().map(|x| C64::new(x, 0.0));
    };
    // The imaginary part starts at the last sign that is neither leading
    // nor part of an exponent.
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, c)| (c == '+' || c == '-') && k > 0 && !body[..k].ends_with(['e', 'E']))
        .map(|(k, _)| k);
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            Some(C64::new(re, number(&body[k..])?))
        }
        None => Some(C64::new(0.0, number(body)?)),
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| RunnerError::MatrixFile { line: idx + 1, message };
        let row: Vec<C64> = line
            .split_whitespace()
            .map(|tok| parse_complex(tok).ok_or_else(|| err(format!("cannot read {tok:?} as a complex number"))))
            .collect::<Result<_>>()?;
        if row.len() != 4 {
            return Err(err(format!("expected 4 entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(RunnerError::MatrixFile { line: 0, message: format!("expected 4 rows, found {}", rows.len()) });
    }
    Ok(ComplexMatrix::from_rows(&rows))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&std::fs::read_to_string(path).map_err(io_err(path))?)
}
