//! Parameter sweeps over weather intensity and seeds.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use pgt_core::{run_scenario, FilterStats, KpiReport, Scenario, WeatherKind};

use crate::error::{HarnessError, Result};
use crate::report::{ReportRow, RunLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// mm/h.
    RainRate,
    /// Meters; `inf` allowed.
    FogVisibility,
    /// mm/h.
    SnowRate,
    /// `[0, 1]`.
    SunLevel,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::RainRate => "rain_rate",
            SweepParam::FogVisibility => "fog_visibility",
            SweepParam::SnowRate => "snow_rate",
            SweepParam::SunLevel => "sun_level",
        }
    }

    /// Copy of `base` with the weather replaced; wavelength is kept.
    pub fn apply(&self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        s.weather.kind = match self {
            SweepParam::RainRate => WeatherKind::Rain { rate: value },
            SweepParam::FogVisibility => WeatherKind::Fog { visibility: value },
            SweepParam::SnowRate => WeatherKind::Snow { rate: value },
            SweepParam::SunLevel => WeatherKind::Sunlight { level: value },
        };
        s
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rain_rate" => Ok(SweepParam::RainRate),
            "fog_visibility" => Ok(SweepParam::FogVisibility),
            "snow_rate" => Ok(SweepParam::SnowRate),
            "sun_level" => Ok(SweepParam::SunLevel),
            other => Err(format!("unknown sweep parameter `{other}` (rain_rate, fog_visibility, snow_rate, sun_level)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub value: f64,
    pub seed: u64,
    pub report: KpiReport,
    pub filter_stats: FilterStats,
    pub label: RunLabel,
}

impl SweepResult {
    pub fn row(&self) -> ReportRow {
        ReportRow::new(&self.report, &self.label, Some(self.seed))
    }
}

/// One run per `(value, seed)`, executed in parallel. Results follow the
/// order of `values`, then `seeds`, as given.
pub fn sweep(base: &Scenario, param: SweepParam, values: &[f64], seeds: &[u64]) -> Result<Vec<SweepResult>> {
    if values.is_empty() {
        return Err(HarnessError::Usage("sweep needs at least one value".into()));
    }
    if seeds.is_empty() {
        return Err(HarnessError::Usage("sweep needs at least one seed".into()));
    }
    let jobs: Vec<(f64, u64)> = values.iter().flat_map(|v| seeds.iter().map(move |s| (*v, *s))).collect();
    jobs.par_iter()
        .map(|&(value, seed)| {
            let mut s = param.apply(base, value);
            s.seed = seed;
            let run = run_scenario(&s).map_err(|source| HarnessError::Scenario {
                scenario: format!("{} ({param}={value}, seed={seed})", s.name),
                source,
            })?;
            Ok(SweepResult { value, seed, report: run.report, filter_stats: run.filter_stats, label: RunLabel::of(&s) })
        })
        .collect()
}

/// Parses `1..5` (inclusive) or a comma list `1,4,9`.
pub fn parse_seeds(spec: &str) -> std::result::Result<Vec<u64>, String> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| format!("bad seed range start `{a}`"))?;
        let hi: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| format!("bad seed range end `{b}`"))?;
        if hi < lo {
            return Err(format!("empty seed range `{spec}`"));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',').map(|t| t.trim().parse().map_err(|_| format!("bad seed `{t}`"))).collect()
}

/// Parses a comma list of floats; `inf` is accepted.
pub fn parse_values(spec: &str) -> std::result::Result<Vec<f64>, String> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().ok().filter(|v| !v.is_nan()).ok_or_else(|| format!("bad value `{t}`"))
        })
        .collect()
}
