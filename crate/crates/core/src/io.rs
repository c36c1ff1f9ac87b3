//! File formats: line-delimited JSON segments, CSV assignments and
//! per-iteration stats, and the JSON run manifest.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ahc::Assignment;
use crate::data::{Dataset, Segment};
use crate::error::{Error, Result};
use crate::mahc::{IterationStats, MahcConfig};

/// Stats CSV header.
pub const STATS_HEADER: [&str; 8] = ["iter", "P", "max_occ", "min_occ", "S", "K_est", "fmeasure", "seconds"];

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Text(String),
    Int(i64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: u64,
    #[serde(default)]
    label: Option<RawLabel>,
    frames: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct OutRecord<'a> {
    id: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    frames: Vec<&'a [f64]>,
}

/// Reads one segment per non-blank line.
pub fn load_segments(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };

    let mut segments = Vec::new();
    let mut line_of_id = HashMap::new();
    let mut dim = None;
    let mut labelled = None;
    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RawRecord = serde_json::from_str(&line).map_err(|e| parse_err(line_no, e.to_string()))?;
        if let Some(first) = line_of_id.insert(rec.id, line_no) {
            return Err(parse_err(line_no, format!("duplicate id {} (first seen on line {first})", rec.id)));
        }
        let label = rec.label.map(|l| match l {
            RawLabel::Text(s) => s,
            RawLabel::Int(i) => i.to_string(),
        });
        if *labelled.get_or_insert(label.is_some()) != label.is_some() {
            return Err(parse_err(line_no, "labels must be present on all records or on none".into()));
        }
        let seg = Segment::new(rec.id, label, rec.frames).map_err(|e| parse_err(line_no, e.to_string()))?;
        let d = *dim.get_or_insert(seg.dim());
        if seg.dim() != d {
            return Err(parse_err(line_no, format!("frame dimension {} differs from {d}", seg.dim())));
        }
        segments.push(seg);
    }
    Dataset::new(segments)
}

pub fn save_segments(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for s in dataset.segments() {
        let rec = OutRecord { id: s.id(), label: s.label(), frames: s.frames().collect() };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `segment_id,cluster_id` rows in dataset order.
pub fn write_assignment(dataset: &Dataset, assignment: &Assignment, path: impl AsRef<Path>) -> Result<()> {
    if dataset.len() != assignment.len() {
        return Err(Error::invalid("assignment does not cover the dataset"));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["segment_id", "cluster_id"])?;
    for (s, c) in dataset.segments().iter().zip(assignment.labels()) {
        w.write_record([s.id().to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an assignment CSV and aligns it to `dataset` by segment id.
pub fn read_assignment(dataset: &Dataset, path: impl AsRef<Path>) -> Result<Assignment> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["segment_id", "cluster_id"] {
        return Err(Error::Parse { path: path.to_path_buf(), line: 1, message: "expected header segment_id,cluster_id".into() });
    }
    let mut cluster_of = HashMap::new();
    for (k, row) in r.deserialize::<(u64, usize)>().enumerate() {
        let line = k + 2;
        let (id, cluster) = row.map_err(|e| Error::Parse { path: path.to_path_buf(), line, message: e.to_string() })?;
        if cluster_of.insert(id, cluster).is_some() {
            return Err(Error::Parse { path: path.to_path_buf(), line, message: format!("duplicate segment id {id}") });
        }
    }
    if cluster_of.len() != dataset.len() {
        return Err(Error::invalid(format!(
            "assignment lists {} segments, dataset has {}",
            cluster_of.len(),
            dataset.len()
        )));
    }
    let keys = dataset
        .segments()
        .iter()
        .map(|s| cluster_of.get(&s.id()).copied().ok_or_else(|| Error::invalid(format!("segment {} is not assigned", s.id()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Assignment::from_keys(keys))
}

/// Writes the stats trace, one row per iteration.
pub fn write_stats(stats: &[IterationStats], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(STATS_HEADER)?;
    for r in stats {
        w.write_record([
            r.iteration.to_string(),
            r.subsets.to_string(),
            r.max_occupancy.to_string(),
            r.min_occupancy.to_string(),
            r.medoids.to_string(),
            r.k_estimate.to_string(),
            r.f_measure.map(|f| f.to_string()).unwrap_or_default(),
            format!("{:.6}", r.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Which procedure a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One Ward AHC over the whole dataset.
    AhcBaseline,
    /// Multi-stage clustering without size management.
    Mahc,
    /// Multi-stage clustering with the occupancy cap.
    MahcM,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::AhcBaseline => "ahc-baseline",
            Mode::Mahc => "mahc",
            Mode::MahcM => "mahc-m",
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub mode: Mode,
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub config: MahcConfig,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

impl RunManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}
