//! File formats, scenario runner and sweeps around [`pgt_core`].
//!
//! `run_to_dir` writes everything one scenario produces:
//!
//! | file | content |
//! |---|---|
//! | `gt.grid`, `pgt.grid` | `PGTGRID 1` log-odds grids |
//! | `frames.jsonl` | one line per sensor sweep |
//! | `report.json` | KPIs, validity and filter counts |
//! | `gt.pgm`, `pgt.pgm` | grayscale previews |

pub mod catalog;
pub mod error;
pub mod gridio;
pub mod log;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use pgt_core::{run_scenario, FilterStats, KpiReport, OccupancyGrid, Scenario};

pub use error::{HarnessError, Result};
pub use gridio::{export_grid_image, read_grid, write_grid};
pub use log::{read_log, write_log};
pub use scenario::{load_scenario, read_scenario, save_scenario};
pub use sweep::{sweep, SweepParam, SweepResult};

#[derive(Debug, Clone)]
pub struct RunResult {
    pub gt: OccupancyGrid,
    pub pgt: OccupancyGrid,
    pub report: KpiReport,
    pub log_path: PathBuf,
    pub filter_stats: FilterStats,
}

/// Runs `scenario` and writes its outputs into `dir`, creating it if needed.
pub fn run_to_dir(scenario: &Scenario, dir: &Path) -> Result<RunResult> {
    let run = run_scenario(scenario).map_err(|source| HarnessError::Scenario { scenario: scenario.name.clone(), source })?;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let log_path = dir.join("frames.jsonl");
    write_log(&run.frames, &log_path)?;
    write_grid(&run.gt, &dir.join("gt.grid"))?;
    write_grid(&run.pgt, &dir.join("pgt.grid"))?;
    export_grid_image(&run.gt, &dir.join("gt.pgm"))?;
    export_grid_image(&run.pgt, &dir.join("pgt.pgm"))?;
    let label = report::RunLabel::of(scenario);
    let json = report::report_to_json(&run.report, Some(&label), Some(&run.filter_stats))?;
    let report_path = dir.join("report.json");
    fs::write(&report_path, json).map_err(|e| HarnessError::io(&report_path, e))?;
    Ok(RunResult { gt: run.gt, pgt: run.pgt, report: run.report, log_path, filter_stats: run.filter_stats })
}
