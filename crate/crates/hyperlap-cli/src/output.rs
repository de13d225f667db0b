//! Report envelopes and CSV writers shared by the subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hyperlap::{CutResult, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wraps a command result with the tool version and the resolved configuration.
pub fn envelope(command: &str, config: &impl Serialize, result: Value) -> Result<Value> {
    Ok(json!({
        "tool": "hyperlap",
        "version": VERSION,
        "command": command,
        "config": serde_json::to_value(config)?,
        "result": result,
    }))
}

/// Output directory plus the config line stamped on every CSV.
pub struct Sink {
    dir: PathBuf,
    stamp: String,
}

impl Sink {
    pub fn new(dir: &Path, report_config: &Value) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let stamp = format!("# hyperlap {VERSION} {}", serde_json::to_string(report_config)?);
        Ok(Self { dir: dir.to_path_buf(), stamp })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Opens `name` for writing with the stamp line already written.
    pub fn csv(&self, name: &str) -> Result<BufWriter<File>> {
        let mut out = BufWriter::new(File::create(self.path(name))?);
        writeln!(out, "{}", self.stamp)?;
        Ok(out)
    }

    pub fn json(&self, name: &str, value: &Value) -> Result<()> {
        let mut out = BufWriter::new(File::create(self.path(name))?);
        serde_json::to_writer_pretty(&mut out, value)?;
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }
}

/// One row per labelled cut: `label,size,subset_weight,cut_weight,expansion,vertices`, vertices
/// space-separated.
pub fn write_cuts_csv<W: Write>(out: W, rows: &[(&str, &CutResult<f64>)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["label", "size", "subset_weight", "cut_weight", "expansion", "vertices"])?;
    for (label, c) in rows {
        wtr.write_record([
            label.to_string(),
            c.subset.len().to_string(),
            c.subset_weight.to_string(),
            c.cut_weight.to_string(),
            c.expansion.to_string(),
            join(&c.subset),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Summary of a partition: `part,size,subset_weight,cut_weight,expansion,mu,vertices`.
pub fn write_partition_csv<W: Write>(out: W, parts: &[CutResult<f64>], measures: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["part", "size", "subset_weight", "cut_weight", "expansion", "mu", "vertices"])?;
    for (i, c) in parts.iter().enumerate() {
        wtr.write_record([
            (i + 1).to_string(),
            c.subset.len().to_string(),
            c.subset_weight.to_string(),
            c.cut_weight.to_string(),
            c.expansion.to_string(),
            measures.get(i).map_or_else(String::new, |m| m.to_string()),
            join(&c.subset),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
