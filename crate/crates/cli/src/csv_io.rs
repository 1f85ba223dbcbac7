//! Trajectory CSV: one row per period with a fixed header.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use bubble_core::analysis::CrashEvent;
use bubble_core::model::{ModelParams, StepRecord, Trajectory};

use crate::error::CliError;
use crate::number::format_g17;

pub const TRAJECTORY_HEADER: [&str; 8] = [
    "t",
    "log_price",
    "momentum",
    "lambda",
    "x",
    "trade",
    "direction",
    "n_trades",
];

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for r in &traj.records {
        w.write_record([
            r.t.to_string(),
            format_g17(r.log_price),
            format_g17(r.momentum),
            format_g17(r.lambda),
            format_g17(r.x),
            bit(r.trade).to_string(),
            bit(r.direction).to_string(),
            r.n_trades.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trajectory(traj, BufWriter::new(file)).map_err(|e| CliError::io(path, e.into()))
}

/// Reads a trajectory CSV back. The file carries no parameters or seed, so
/// the caller supplies them.
pub fn read_trajectory_csv(
    path: &Path,
    params: ModelParams,
    seed: u64,
) -> Result<Trajectory, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e.into()))?;
    let bad = |msg: String| {
        CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, msg),
        )
    };

    let header = rdr.headers().map_err(|e| CliError::io(path, e.into()))?;
    if header.iter().ne(TRAJECTORY_HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }

    let mut records = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| CliError::io(path, e.into()))?;
        let field = |i: usize| row.get(i).unwrap_or_default();
        let num = |i: usize| {
            field(i)
                .parse::<f64>()
                .map_err(|e| bad(format!("row {}: {}: {e}", line + 2, TRAJECTORY_HEADER[i])))
        };
        let int = |i: usize| {
            field(i)
                .parse::<u64>()
                .map_err(|e| bad(format!("row {}: {}: {e}", line + 2, TRAJECTORY_HEADER[i])))
        };
        let flag = |i: usize| match field(i) {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(bad(format!(
                "row {}: {} must be 0 or 1, got {other:?}",
                line + 2,
                TRAJECTORY_HEADER[i]
            ))),
        };
        records.push(StepRecord {
            t: int(0)? as usize,
            log_price: num(1)?,
            momentum: num(2)?,
            lambda: num(3)?,
            x: num(4)?,
            trade: flag(5)?,
            direction: flag(6)?,
            n_trades: int(7)?,
        });
    }
    Ok(Trajectory {
        params,
        seed,
        records,
    })
}

pub const CRASH_HEADER: [&str; 5] = [
    "t_cross",
    "t_peak",
    "peak_log_price",
    "t_trough",
    "drawdown",
];

pub fn write_crashes_csv(events: &[CrashEvent], path: &Path) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(CRASH_HEADER).map_err(io)?;
    for e in events {
        w.write_record([
            e.t_cross.to_string(),
            e.t_peak.to_string(),
            format_g17(e.peak_log_price),
            e.t_trough.to_string(),
            format_g17(e.drawdown),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
