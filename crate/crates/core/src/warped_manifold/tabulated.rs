use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum number of `(r, phi, f)` samples in a tabulated profile.
pub const MIN_TABULATED_SAMPLES: usize = 16;

/// Samples of a warp and weight on strictly increasing radii starting at the
/// pole.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile<T> {
    pub r: Vec<T>,
    pub phi: Vec<T>,
    pub f: Vec<T>,
}

/// Parses whitespace-separated `r phi f` triples, one per line. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_tabulated<T: Real>(text: &str) -> Result<TabulatedProfile<T>> {
    let mut table = TabulatedProfile {
        r: Vec::new(),
        phi: Vec::new(),
        f: Vec::new(),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Profile(format!(
                "line {}: expected 3 values `r phi f`, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut values = [T::zero(); 3];
        for (slot, field) in values.iter_mut().zip(&fields) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Profile(format!("line {}: `{field}` is not a number", lineno + 1)))?;
            if !v.is_finite() {
                return Err(Error::Profile(format!("line {}: non-finite value `{field}`", lineno + 1)));
            }
            *slot = T::lit(v);
        }
        if let Some(&prev) = table.r.last() {
            if !(values[0] > prev) {
                return Err(Error::Profile(format!(
                    "line {}: radii must be strictly increasing ({} after {prev})",
                    lineno + 1,
                    values[0]
                )));
            }
        }
        table.r.push(values[0]);
        table.phi.push(values[1]);
        table.f.push(values[2]);
    }
    if table.r.len() < MIN_TABULATED_SAMPLES {
        return Err(Error::Profile(format!(
            "tabulated profile needs at least {MIN_TABULATED_SAMPLES} samples, found {}",
            table.r.len()
        )));
    }
    if table.r[0] != T::zero() || table.phi[0].abs() > T::lit(1e-12) {
        return Err(Error::Profile(format!(
            "first sample must be the pole r = 0 with phi = 0, found r = {}, phi = {}",
            table.r[0], table.phi[0]
        )));
    }
    Ok(table)
}

pub fn read_tabulated<T: Real>(path: &Path) -> Result<TabulatedProfile<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_tabulated(&text)
}
