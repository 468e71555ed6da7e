//! KPI report as a flat JSON object and as CSV rows.

use serde::Serialize;

use pgt_core::{FilterStats, KpiReport, Scenario};

use crate::error::{HarnessError, Result};

/// Scenario fields that label a report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLabel {
    pub scenario_id: String,
    pub weather_kind: String,
    pub intensity: f64,
}

impl RunLabel {
    pub fn of(s: &Scenario) -> Self {
        Self {
            scenario_id: s.name.clone(),
            weather_kind: s.weather.kind.name().to_string(),
            intensity: s.weather.kind.intensity(),
        }
    }
}

/// Infinite intensities (unlimited fog visibility) are written as `"inf"`.
fn intensity_text(x: f64) -> String {
    if x.is_infinite() { "inf".to_string() } else { x.to_string() }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario_id: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weather_kind: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intensity: Option<serde_json::Value>,
    pearson: Option<f64>,
    map_score: Option<f64>,
    occupied_cells_ratio: Option<f64>,
    n_observed: usize,
    n_gt_occupied_observed: usize,
    valid: bool,
    threshold_pearson: f64,
    threshold_map_score: f64,
    threshold_ocr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    filter_true_positives: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filter_false_positives: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filter_false_negatives: Option<usize>,
}

/// Pretty-printed JSON with a trailing newline. Undefined KPIs are `null`.
pub fn report_to_json(report: &KpiReport, label: Option<&RunLabel>, stats: Option<&FilterStats>) -> Result<String> {
    let intensity = label.map(|l| {
        if l.intensity.is_finite() {
            serde_json::Value::from(l.intensity)
        } else {
            serde_json::Value::from(intensity_text(l.intensity))
        }
    });
    let json = ReportJson {
        scenario_id: label.map(|l| l.scenario_id.as_str()),
        weather_kind: label.map(|l| l.weather_kind.as_str()),
        intensity,
        pearson: report.pearson,
        map_score: report.map_score,
        occupied_cells_ratio: report.occupied_cells_ratio,
        n_observed: report.n_observed,
        n_gt_occupied_observed: report.n_gt_occupied_observed,
        valid: report.valid,
        threshold_pearson: report.thresholds.pearson_min,
        threshold_map_score: report.thresholds.map_score_min,
        threshold_ocr: report.thresholds.ocr_min,
        filter_true_positives: stats.map(|s| s.true_positives),
        filter_false_positives: stats.map(|s| s.false_positives),
        filter_false_negatives: stats.map(|s| s.false_negatives),
    };
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| HarnessError::data("report", e))?;
    text.push('\n');
    Ok(text)
}

/// One CSV row. Undefined KPIs are empty fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub scenario_id: String,
    pub weather_kind: String,
    pub intensity: String,
    pub pearson: Option<f64>,
    pub map_score: Option<f64>,
    pub ocr: Option<f64>,
    pub n_observed: usize,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReportRow {
    pub fn new(report: &KpiReport, label: &RunLabel, seed: Option<u64>) -> Self {
        Self {
            scenario_id: label.scenario_id.clone(),
            weather_kind: label.weather_kind.clone(),
            intensity: intensity_text(label.intensity),
            pearson: report.pearson,
            map_score: report.map_score,
            ocr: report.occupied_cells_ratio,
            n_observed: report.n_observed,
            valid: report.valid,
            seed,
        }
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| HarnessError::data("csv", e))?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::data("csv", e))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::data("csv", e))
}
