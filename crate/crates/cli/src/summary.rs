//! JSON summaries. Top-level keys, in order: `config`, `seed`,
//! `stats` or `sweep`, `version`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use bubble_core::analysis::{SummaryStats, SweepResult};
use serde::Serialize;

use crate::config::FileConfig;
use crate::error::CliError;

pub const VERSION: &str = concat!("bubblesim ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Serialize)]
pub struct RunSummary<'a> {
    pub config: &'a FileConfig,
    pub seed: u64,
    pub stats: &'a SummaryStats,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary<'a> {
    pub config: &'a FileConfig,
    pub seed: &'a [u64],
    pub sweep: &'a SweepResult,
    pub version: &'static str,
}

pub fn write_summary_json<T: Serialize>(summary: &T, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, summary).map_err(|e| CliError::io(path, e.into()))?;
    w.write_all(b"\n")
        .and_then(|()| w.flush())
        .map_err(|e| CliError::io(path, e))
}
