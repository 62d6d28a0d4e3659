//! Result tables: exact values with a display-only decimal rendering.

use std::io::Write;

use serde::Serialize;
use statesum::Cyclo;

use crate::error::{CliError, Result};

pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One row. Fields are declared in sorted order so JSON keys come out canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Row {
    pub decimal: String,
    pub model: String,
    pub note: String,
    pub structure: String,
    pub surface: String,
    pub value: String,
}

impl Row {
    pub fn new(model: &str, surface: impl Into<String>, structure: impl Into<String>, value: &Cyclo) -> Self {
        Row {
            decimal: value.to_decimal(DECIMAL_DIGITS),
            model: model.to_string(),
            note: String::new(),
            structure: structure.into(),
            surface: surface.into(),
            value: value.to_string(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn key(&self) -> (&str, &str, &str) {
        (&self.model, &self.surface, &self.structure)
    }
}

/// Rows in canonical order: by model, surface, then structure; genus-like suffixes compare
/// numerically so `genus 10` follows `genus 9`.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        let (x, y) = (a.key(), b.key());
        natural(x.0, y.0).then_with(|| natural(x.1, y.1)).then_with(|| natural(x.2, y.2))
    });
}

fn natural(a: &str, b: &str) -> std::cmp::Ordering {
    let split = |s: &str| {
        let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, tail) = s.split_at(s.len() - digits);
        (head.to_string(), tail.parse::<u64>().ok())
    };
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

/// Writes any serializable rows as CSV (with header) or a pretty JSON array.
pub fn write_table<T: Serialize>(out: &mut dyn Write, rows: &[T], format: Format) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io { path: "<stdout>".into(), source: e };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| io(e.into()))?;
            writeln!(out).map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| io(e.into()))?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

/// One entity check for `verify` and `spin verify`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub detail: String,
    pub entity: String,
    pub passed: bool,
}

pub fn report_rows(entity: &str, report: &statesum::Report) -> Vec<CheckRow> {
    report
        .checks
        .iter()
        .map(|c| CheckRow { check: c.name.clone(), detail: c.detail.clone(), entity: entity.to_string(), passed: c.passed })
        .collect()
}

/// Maps `f` over `items` on scoped threads; output order follows input order.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<U>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
