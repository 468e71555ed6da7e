//! Scenario files: UTF-8 JSON, lengths in meters, angles in degrees.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pgt_core::weather::AzimuthSector;
use pgt_core::{
    lookup_sensor, FilterParams, KpiThresholds, Obstacle, Point2D, Scenario, SensorSpec, Trajectory,
    Wavelength, WeatherCondition, WeatherKind, WorldModel,
};

use crate::error::{HarnessError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    world: WorldFile,
    trajectory: TrajectoryFile,
    sensor: Value,
    weather: WeatherFile,
    grid_resolution: f64,
    seed: u64,
    filter: FilterFile,
    thresholds: ThresholdsFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldFile {
    bounds: [f64; 2],
    #[serde(default)]
    obstacles: Vec<ObstacleFile>,
    #[serde(default)]
    surface_wet: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleFile {
    min: [f64; 2],
    max: [f64; 2],
    reflectivity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryFile {
    waypoints: Vec<[f64; 2]>,
    speed: f64,
}

/// Inline sensor. With `base`, only the given fields override the catalog entry.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_range: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_range: Option<f64>,
    /// Degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fov_horizontal: Option<f64>,
    /// Degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angular_resolution: Option<f64>,
    /// 1σ, meters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    range_accuracy: Option<f64>,
    /// Seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle_time: Option<f64>,
    /// Names of stand-in fields: `min_range`, `angular_resolution`, `range_accuracy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assumed: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Intensity {
    Number(f64),
    /// Only `"inf"`, for unlimited fog visibility.
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeatherFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intensity: Option<Intensity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wavelength_class: Option<String>,
    /// `[start, end]` pairs in degrees, for `dirt`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sectors: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterFile {
    enabled: bool,
    k_min: usize,
    beta: f64,
    sr_min: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsFile {
    pearson: f64,
    map_score: f64,
    ocr: f64,
}

fn parse_at<T: DeserializeOwned>(prefix: &str, v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let mut path: Vec<String> = [prefix.to_string(), e.path().to_string()]
            .into_iter()
            .filter(|p| !p.is_empty() && p != ".")
            .collect();
        let inner = e.into_inner();
        // Missing keys are reported at the enclosing object.
        let message = inner.to_string();
        if let Some(name) = ["missing field `", "unknown field `"]
            .iter()
            .find_map(|head| message.strip_prefix(head).and_then(|rest| rest.split('`').next()))
        {
            if path.last().is_none_or(|p| p.rsplit('.').next() != Some(name)) {
                path.push(name.to_string());
            }
        }
        let field = if path.is_empty() { ".".to_string() } else { path.join(".") };
        HarnessError::data(format!("scenario field `{field}`"), inner)
    })
}

fn field_error(prefix: &str, e: pgt_core::Error) -> HarnessError {
    match e {
        pgt_core::Error::InvalidParameter { field, reason } => {
            let field = if prefix.is_empty() || field.starts_with(prefix) {
                field.to_string()
            } else {
                format!("{prefix}.{field}")
            };
            HarnessError::data(format!("scenario field `{field}`"), reason)
        }
        other => HarnessError::Core(other),
    }
}

fn point(p: [f64; 2]) -> Point2D {
    Point2D::new(p[0], p[1])
}

/// Parses and validates a scenario. Errors name the offending field.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    let raw: Value = serde_json::from_str(text).map_err(|e| HarnessError::data("scenario", e))?;
    let file: ScenarioFile = parse_at("", raw)?;

    let world = WorldModel {
        width: file.world.bounds[0],
        height: file.world.bounds[1],
        obstacles: file.world.obstacles.iter().map(|o| Obstacle::new(point(o.min), point(o.max), o.reflectivity)).collect(),
        surface_wet: file.world.surface_wet,
    };
    world.validate().map_err(|e| field_error("world", e))?;

    let trajectory = Trajectory { waypoints: file.trajectory.waypoints.into_iter().map(point).collect(), speed: file.trajectory.speed };
    trajectory.validate().map_err(|e| field_error("trajectory", e))?;

    let sensor = sensor_from_value(file.sensor)?;
    sensor.validate().map_err(|e| field_error("sensor", e))?;

    let weather = weather_from_file(file.weather)?;
    weather.validate().map_err(|e| field_error("weather", e))?;

    if !(file.grid_resolution > 0.0 && file.grid_resolution.is_finite()) {
        return Err(HarnessError::data("scenario field `grid_resolution`", "must be positive"));
    }

    let filter = FilterParams { enabled: file.filter.enabled, k_min: file.filter.k_min, beta: file.filter.beta, sr_min: file.filter.sr_min };
    filter.validate().map_err(|e| field_error("filter", e))?;
    let thresholds = KpiThresholds { pearson_min: file.thresholds.pearson, map_score_min: file.thresholds.map_score, ocr_min: file.thresholds.ocr };
    thresholds.validate().map_err(|e| field_error("thresholds", e))?;

    Ok(Scenario {
        name: file.name.unwrap_or_default(),
        world,
        trajectory,
        sensor,
        weather,
        grid_resolution: file.grid_resolution,
        seed: file.seed,
        filter,
        thresholds,
    })
}

fn catalog_sensor(name: &str, field: &str) -> Result<SensorSpec> {
    lookup_sensor(name).ok_or_else(|| HarnessError::data(format!("scenario field `{field}`"), format!("unknown sensor model `{name}`")))
}

fn sensor_from_value(v: Value) -> Result<SensorSpec> {
    if let Value::String(name) = &v {
        return catalog_sensor(name, "sensor");
    }
    let f: SensorFile = parse_at("sensor", v)?;
    let base = match &f.base {
        Some(name) => Some(catalog_sensor(name, "sensor.base")?),
        None => None,
    };
    let required = |value: Option<f64>, from_base: Option<f64>, field: &str| -> Result<f64> {
        value.or(from_base).ok_or_else(|| HarnessError::data(format!("scenario field `sensor.{field}`"), "missing field"))
    };
    let b = base.as_ref();
    let mut spec = SensorSpec {
        model_name: f.model_name.clone().or_else(|| b.map(|s| s.model_name.clone())).unwrap_or_else(|| "custom".into()),
        max_range: required(f.max_range, b.map(|s| s.max_range), "max_range")?,
        min_range: f.min_range.or(b.map(|s| s.min_range)).unwrap_or(pgt_core::sensor::DEFAULT_MIN_RANGE),
        fov_horizontal: match f.fov_horizontal {
            Some(d) => d.to_radians(),
            None => required(None, b.map(|s| s.fov_horizontal), "fov_horizontal")?,
        },
        angular_resolution: match f.angular_resolution {
            Some(d) => d.to_radians(),
            None => required(None, b.map(|s| s.angular_resolution), "angular_resolution")?,
        },
        range_accuracy_sigma: required(f.range_accuracy, b.map(|s| s.range_accuracy_sigma), "range_accuracy")?,
        cycle_time: required(f.cycle_time, b.map(|s| s.cycle_time), "cycle_time")?,
        assumed: b.map(|s| s.assumed).unwrap_or_default(),
    };
    // Overridden fields are no longer stand-ins.
    if f.min_range.is_some() {
        spec.assumed.min_range = false;
    }
    if f.angular_resolution.is_some() {
        spec.assumed.angular_resolution = false;
    }
    if f.range_accuracy.is_some() {
        spec.assumed.range_accuracy = false;
    }
    if base.is_none() && f.min_range.is_none() {
        spec.assumed.min_range = true;
    }
    if let Some(list) = &f.assumed {
        spec.assumed = Default::default();
        for name in list {
            match name.as_str() {
                "min_range" => spec.assumed.min_range = true,
                "angular_resolution" => spec.assumed.angular_resolution = true,
                "range_accuracy" => spec.assumed.range_accuracy = true,
                other => return Err(HarnessError::data("scenario field `sensor.assumed`", format!("unknown field name `{other}`"))),
            }
        }
    }
    Ok(spec)
}

fn weather_from_file(w: WeatherFile) -> Result<WeatherCondition> {
    let wavelength = match &w.wavelength_class {
        None => Wavelength::Nm905,
        Some(s) => Wavelength::parse(s).ok_or_else(|| {
            HarnessError::data("scenario field `weather.wavelength_class`", format!("unknown wavelength class `{s}` (nm905 or nm1550)"))
        })?,
    };
    let intensity = || -> Result<f64> {
        match &w.intensity {
            Some(Intensity::Number(x)) => Ok(*x),
            Some(Intensity::Text(s)) if s.eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
            Some(Intensity::Text(s)) => Err(HarnessError::data("scenario field `weather.intensity`", format!("expected a number or \"inf\", got `{s}`"))),
            None => Err(HarnessError::data("scenario field `weather.intensity`", format!("required for kind `{}`", w.kind))),
        }
    };
    let kind = match w.kind.as_str() {
        "clear" => WeatherKind::Clear,
        "rain" => WeatherKind::Rain { rate: intensity()? },
        "fog" => WeatherKind::Fog { visibility: intensity()? },
        "snow" => WeatherKind::Snow { rate: intensity()? },
        "spray" => WeatherKind::Spray { level: intensity()? },
        "sunlight" => WeatherKind::Sunlight { level: intensity()? },
        "dirt" => {
            let sectors = w.sectors.as_ref().ok_or_else(|| HarnessError::data("scenario field `weather.sectors`", "required for kind `dirt`"))?;
            WeatherKind::DirtSectors(sectors.iter().map(|s| AzimuthSector { start: s[0].to_radians(), end: s[1].to_radians() }).collect())
        }
        other => {
            return Err(HarnessError::data(
                "scenario field `weather.kind`",
                format!("unknown weather kind `{other}` (clear, rain, fog, snow, spray, sunlight, dirt)"),
            ))
        }
    };
    Ok(WeatherCondition::new(kind, wavelength))
}

/// Degree value whose `to_radians` reproduces `rad` bit for bit, if one lies
/// within a few ulps of the naive conversion.
pub fn degrees_exact(rad: f64) -> f64 {
    let d = rad.to_degrees();
    if !d.is_finite() || d.to_radians() == rad {
        return d;
    }
    let mut up = d;
    let mut down = d;
    for _ in 0..16 {
        up = up.next_up();
        down = down.next_down();
        if up.to_radians() == rad {
            return up;
        }
        if down.to_radians() == rad {
            return down;
        }
    }
    d
}

/// Serializes a scenario. The sensor is always written inline.
pub fn save_scenario(s: &Scenario) -> Result<String> {
    let mut assumed = Vec::new();
    if s.sensor.assumed.min_range {
        assumed.push("min_range".to_string());
    }
    if s.sensor.assumed.angular_resolution {
        assumed.push("angular_resolution".to_string());
    }
    if s.sensor.assumed.range_accuracy {
        assumed.push("range_accuracy".to_string());
    }
    let sensor = SensorFile {
        base: None,
        model_name: Some(s.sensor.model_name.clone()),
        max_range: Some(s.sensor.max_range),
        min_range: Some(s.sensor.min_range),
        fov_horizontal: Some(degrees_exact(s.sensor.fov_horizontal)),
        angular_resolution: Some(degrees_exact(s.sensor.angular_resolution)),
        range_accuracy: Some(s.sensor.range_accuracy_sigma),
        cycle_time: Some(s.sensor.cycle_time),
        assumed: Some(assumed),
    };
    let (intensity, sectors) = match &s.weather.kind {
        WeatherKind::Clear => (None, None),
        WeatherKind::Fog { visibility } if visibility.is_infinite() => (Some(Intensity::Text("inf".into())), None),
        WeatherKind::DirtSectors(list) => {
            (None, Some(list.iter().map(|a| [degrees_exact(a.start), degrees_exact(a.end)]).collect()))
        }
        other => (Some(Intensity::Number(other.intensity())), None),
    };
    let file = ScenarioFile {
        name: (!s.name.is_empty()).then(|| s.name.clone()),
        world: WorldFile {
            bounds: [s.world.width, s.world.height],
            obstacles: s
                .world
                .obstacles
                .iter()
                .map(|o| ObstacleFile { min: [o.min.x, o.min.y], max: [o.max.x, o.max.y], reflectivity: o.reflectivity })
                .collect(),
            surface_wet: s.world.surface_wet,
        },
        trajectory: TrajectoryFile { waypoints: s.trajectory.waypoints.iter().map(|p| [p.x, p.y]).collect(), speed: s.trajectory.speed },
        sensor: serde_json::to_value(sensor).map_err(|e| HarnessError::data("scenario", e))?,
        weather: WeatherFile {
            kind: s.weather.kind.name().to_string(),
            intensity,
            wavelength_class: Some(s.weather.wavelength.as_str().to_string()),
            sectors,
        },
        grid_resolution: s.grid_resolution,
        seed: s.seed,
        filter: FilterFile { enabled: s.filter.enabled, k_min: s.filter.k_min, beta: s.filter.beta, sr_min: s.filter.sr_min },
        thresholds: ThresholdsFile { pearson: s.thresholds.pearson_min, map_score: s.thresholds.map_score_min, ocr: s.thresholds.ocr_min },
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| HarnessError::data("scenario", e))?;
    text.push('\n');
    Ok(text)
}

pub fn read_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    load_scenario(&text).map_err(|e| match e {
        HarnessError::Data { context, message } => HarnessError::Data { context: format!("{}: {context}", path.display()), message },
        other => other,
    })
}
