//! CSV and JSON emission: exact float formatting, trace writers, and the
//! metadata sidecar written next to every output file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::search::GateTrace;
use crate::Result;

/// Formats a float with 17 significant digits, enough to round-trip `f64`
/// exactly through text.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV file with a one-line header.
pub fn write_csv<P: AsRef<Path>>(
    path: P,
    header: &str,
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Reads two named columns of a CSV file as float pairs.
pub fn read_csv_columns(path: &Path, x_col: &str, y_col: &str) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| crate::Error::InvalidConfig("empty csv".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let xi = names.iter().position(|&c| c == x_col).ok_or_else(|| {
        crate::Error::InvalidConfig(format!("column '{x_col}' not found in {names:?}"))
    })?;
    let yi = names.iter().position(|&c| c == y_col).ok_or_else(|| {
        crate::Error::InvalidConfig(format!("column '{y_col}' not found in {names:?}"))
    })?;
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let parse = |i: usize| -> Result<f64> {
            cells
                .get(i)
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| {
                    crate::Error::InvalidConfig(format!("bad numeric cell in line '{line}'"))
                })
        };
        out.push((parse(xi)?, parse(yi)?));
    }
    Ok(out)
}

/// Per-iteration trace of a fixed-parameter run:
/// `iteration,oracle_count,P_combined_opt,P_first_opt`, optionally followed by
/// one probability column per element.
pub struct IterationTrace {
    pub iterations: Vec<IterationRow>,
    pub dump_elements: bool,
}

pub struct IterationRow {
    pub iteration: usize,
    pub oracle_count: u64,
    pub p_combined: f64,
    pub p_first: f64,
    /// Combined output distribution, present when dumping elements.
    pub elements: Option<Vec<f64>>,
}

impl IterationTrace {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut header = String::from("iteration,oracle_count,P_combined_opt,P_first_opt");
        if self.dump_elements {
            if let Some(row) = self.iterations.first() {
                let n = row.elements.as_ref().map_or(0, Vec::len);
                for x in 1..=n {
                    header.push_str(&format!(",P_{x}"));
                }
            }
        }
        let rows = self.iterations.iter().map(|row| {
            let mut cells = vec![
                row.iteration.to_string(),
                row.oracle_count.to_string(),
                fmt_float(row.p_combined),
                fmt_float(row.p_first),
            ];
            if self.dump_elements {
                if let Some(elements) = &row.elements {
                    cells.extend(elements.iter().map(|&p| fmt_float(p)));
                }
            }
            cells
        });
        write_csv(path, &header, rows)
    }
}

/// Per-gate trace of a searched run:
/// `gate,op,oracle_count,P_combined_opt,P_first_opt`.
pub fn write_gate_trace(trace: &GateTrace, path: &Path) -> Result<()> {
    let rows = (0..trace.len()).map(|i| {
        vec![
            (i + 1).to_string(),
            trace.ops[i].to_string(),
            trace.oracle_count_at(i).to_string(),
            fmt_float(trace.probs_combined[i]),
            fmt_float(trace.probs_first[i]),
        ]
    });
    write_csv(path, "gate,op,oracle_count,P_combined_opt,P_first_opt", rows)
}

/// Run metadata written as a JSON sidecar next to each primary output.
#[derive(Debug, Serialize)]
pub struct RunMetadata {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    pub wall_time_s: f64,
}

/// Hash of the resolved run configuration, hex-encoded SHA-256.
pub fn config_hash<C: Serialize>(config: &C) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Tracks wall time for one CLI run and writes the metadata sidecar.
pub struct RunClock {
    command: String,
    config_hash: String,
    started: Instant,
}

impl RunClock {
    pub fn start<C: Serialize>(command: &str, config: &C) -> Self {
        Self {
            command: command.to_string(),
            config_hash: config_hash(config),
            started: Instant::now(),
        }
    }

    /// Writes `<output>.meta.json` describing this run.
    pub fn finish(self, output: &Path) -> Result<()> {
        let metadata = RunMetadata {
            command: self.command,
            config_hash: self.config_hash,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let mut path = PathBuf::from(output);
        let stem = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        path.set_file_name(format!("{stem}.meta.json"));
        fs::write(path, serde_json::to_string_pretty(&metadata).expect("serializes"))?;
        Ok(())
    }
}
