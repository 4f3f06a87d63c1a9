use crate::{CliError, Result};
use linops::{Matrix, MatrixJson};
use serde::de::DeserializeOwned;
use std::path::Path;

/// Reads and deserializes a JSON file; parse errors carry line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let what = if e.is_data() { "unexpected content" } else { "malformed JSON" };
        CliError::Input(format!("{}: {what} at line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    Ok(read_json::<MatrixJson>(path)?.to_matrix()?)
}

pub fn require<'a, T>(x: &'a Option<T>, flag: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| CliError::Input(format!("missing required flag {flag}")))
}

/// Parses a 1-based comma-separated index list into 0-based indices.
pub fn parse_subset(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(CliError::Input(format!("subset entries are 1-based indices, got {t:?}"))),
        })
        .collect()
}

/// Parses `lo:hi:step`.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Input(format!("expected lo:hi:step, got {s:?}"));
    let parts: Vec<usize> = s.split(':').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    match parts.as_slice() {
        [lo, hi] if lo <= hi => Ok((*lo..=*hi).collect()),
        [lo, hi, step] if lo <= hi && *step > 0 => Ok((*lo..=*hi).step_by(*step).collect()),
        _ => Err(bad()),
    }
}

/// Indices of a random subset, each included with probability 1/2.
pub fn random_subset(rng: &mut linops::Rng64, m: usize) -> Vec<usize> {
    use rand::Rng;
    (0..m).filter(|_| rng.random_bool(0.5)).collect()
}

/// 1-based rendering of a 0-based subset.
pub fn show_subset(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}
