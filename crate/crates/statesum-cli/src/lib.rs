//! Model files, result tables and command plumbing for the `statesum` binary.

pub mod error;
pub mod model;
pub mod table;

pub use error::{CliError, Result};
pub use model::{build_model, parse_model, Model, ModelFile};

/// Inclusive ranges `a..b`, `a..=b`, single values, or comma lists of these.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad range {s:?}: expected N, A..B or a comma list"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Comma-separated bits, e.g. `1,0,1,1`.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(CliError::Usage(format!("expected bit 0 or 1, got {other:?}"))),
        })
        .collect()
}
