//! Frame log: one JSON object per line, one line per sensor sweep.
//!
//! Beams are `[azimuth, range, label]` triples with `null` range for a
//! non-return. Floats use the shortest decimal form that parses back to the
//! same `f64`, so a round trip is exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use pgt_core::{BeamLabel, BeamReturn, FrameRecord, PointCloud, Pose2D};

use crate::error::{HarnessError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseLine {
    x: f64,
    y: f64,
    heading: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CloudLine {
    frame_id: u64,
    timestamp: f64,
    beams: Vec<(f64, Option<f64>, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameLine {
    seq_id: u64,
    timestamp: f64,
    pose: PoseLine,
    raw: CloudLine,
    filtered: CloudLine,
    removed: Vec<usize>,
}

fn cloud_line(c: &PointCloud) -> CloudLine {
    CloudLine {
        frame_id: c.frame_id,
        timestamp: c.timestamp,
        beams: c.beams.iter().map(|b| (b.azimuth, b.range, b.label.as_str().to_string())).collect(),
    }
}

fn cloud_from_line(c: CloudLine) -> std::result::Result<PointCloud, String> {
    let mut beams = Vec::with_capacity(c.beams.len());
    for (az, range, label) in c.beams {
        let label = BeamLabel::parse(&label).ok_or_else(|| format!("unknown beam label `{label}`"))?;
        beams.push(BeamReturn { azimuth: az, range, label });
    }
    Ok(PointCloud::new(c.frame_id, c.timestamp, beams))
}

/// Serializes one frame as a single line without the trailing newline.
pub fn frame_to_line(f: &FrameRecord) -> Result<String> {
    let line = FrameLine {
        seq_id: f.seq_id,
        timestamp: f.timestamp,
        pose: PoseLine { x: f.pose.x(), y: f.pose.y(), heading: f.pose.heading() },
        raw: cloud_line(&f.raw_cloud),
        filtered: cloud_line(&f.filtered_cloud),
        removed: f.removed_indices.clone(),
    };
    serde_json::to_string(&line).map_err(|e| HarnessError::data(format!("frame {}", f.seq_id), e))
}

pub fn write_log_to<W: Write>(frames: &[FrameRecord], mut out: W) -> Result<()> {
    for f in frames {
        let line = frame_to_line(f)?;
        out.write_all(line.as_bytes()).and_then(|_| out.write_all(b"\n")).map_err(|e| HarnessError::io("<log>", e))?;
    }
    out.flush().map_err(|e| HarnessError::io("<log>", e))
}

pub fn write_log(frames: &[FrameRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_log_to(frames, BufWriter::new(file)).map_err(|e| match e {
        HarnessError::Io { source, .. } => HarnessError::io(path, source),
        other => other,
    })
}

/// Parses a log. Errors carry the 1-based line number.
pub fn read_log_from<R: BufRead>(input: R, name: &str) -> Result<Vec<FrameRecord>> {
    let mut frames: Vec<FrameRecord> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| HarnessError::data(format!("{name}:{n}"), e))?;
        if line.is_empty() {
            return Err(HarnessError::data(format!("{name}:{n}"), "empty line"));
        }
        let l: FrameLine = serde_json::from_str(&line).map_err(|e| HarnessError::data(format!("{name}:{n}"), e))?;
        if let Some(prev) = frames.last() {
            if l.seq_id <= prev.seq_id {
                return Err(HarnessError::data(format!("{name}:{n}"), "seq_id not strictly increasing"));
            }
        }
        let pose = Pose2D::try_new(l.pose.x, l.pose.y, l.pose.heading).map_err(|e| HarnessError::data(format!("{name}:{n}"), e))?;
        let raw = cloud_from_line(l.raw).map_err(|e| HarnessError::data(format!("{name}:{n}"), e))?;
        let filtered = cloud_from_line(l.filtered).map_err(|e| HarnessError::data(format!("{name}:{n}"), e))?;
        if let Some(bad) = l.removed.iter().find(|i| **i >= raw.len()) {
            return Err(HarnessError::data(format!("{name}:{n}"), format!("removed index {bad} out of range")));
        }
        frames.push(FrameRecord {
            seq_id: l.seq_id,
            timestamp: l.timestamp,
            pose,
            raw_cloud: raw,
            filtered_cloud: filtered,
            removed_indices: l.removed,
        });
    }
    Ok(frames)
}

pub fn read_log(path: &Path) -> Result<Vec<FrameRecord>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_log_from(BufReader::new(file), &path.display().to_string())
}
