//! CSV exports of the sensor and limitation catalogs.

use serde::Serialize;

use pgt_core::{limitation_catalog, sensor_catalog_rows};

use crate::error::{HarnessError, Result};

#[derive(Serialize)]
struct SensorCsvRow<'a> {
    model: &'a str,
    range_m: f64,
    fov_horizontal_deg: f64,
    accuracy_distance_m: Option<f64>,
    accuracy_deg: Option<f64>,
    cycle_time_ms: f64,
}

#[derive(Serialize)]
struct LimitationCsvRow<'a> {
    index: u8,
    name: &'a str,
    category: &'a str,
    evidence: &'a str,
    modeled: bool,
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| HarnessError::data("csv", e))?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::data("csv", e))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::data("csv", e))
}

/// Sensor products as published; blank datasheet cells are empty fields.
pub fn sensors_csv() -> Result<String> {
    to_csv(sensor_catalog_rows().iter().map(|r| SensorCsvRow {
        model: r.model,
        range_m: r.range_m,
        fov_horizontal_deg: r.fov_deg,
        accuracy_distance_m: r.accuracy_m,
        accuracy_deg: r.accuracy_deg,
        cycle_time_ms: r.cycle_ms,
    }))
}

pub fn limitations_csv() -> Result<String> {
    let entries = limitation_catalog();
    to_csv(entries.iter().map(|e| LimitationCsvRow {
        index: e.index,
        name: e.name,
        category: e.category.code(),
        evidence: e.evidence.as_str(),
        modeled: e.modeled,
    }))
}
