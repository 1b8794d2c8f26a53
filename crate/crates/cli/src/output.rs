//! CSV tables and JSON metadata sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Rows of already formatted cells under one header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Files written by one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub csv: Vec<PathBuf>,
    pub metadata: PathBuf,
}

/// Writes `<stem>.csv` per table plus `<command>.meta.json`.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    command: &str,
    tables: &[(String, Table)],
    summary: Value,
    warnings: &[String],
    wall_clock: f64,
) -> Result<Outputs, CliError> {
    fs::create_dir_all(&cfg.output_dir)?;
    let mut csv = Vec::new();
    for (stem, t) in tables {
        let path = cfg.output_dir.join(format!("{stem}.csv"));
        t.write(&path)?;
        csv.push(path);
    }
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "files": csv.iter().map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned())).collect::<Vec<_>>(),
        "summary": summary,
        "warnings": warnings,
        "wall_clock_seconds": wall_clock,
        "finished_unix_seconds": started,
    });
    let metadata = cfg.output_dir.join(format!("{command}.meta.json"));
    fs::write(&metadata, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(Outputs { csv, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.6321205588285577] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn table_is_lf_terminated_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let path = dir.path().join("t.csv");
        t.write(&path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
