use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use pgt_core::{evaluate, KpiThresholds};
use pgt_harness::report::{report_to_json, rows_to_csv};
use pgt_harness::sweep::{parse_seeds, parse_values};
use pgt_harness::{catalog, export_grid_image, read_grid, read_scenario, run_to_dir, sweep, HarnessError, Result, SweepParam};

#[derive(Parser, Debug)]
#[command(name = "pgt", version, about = "LiDAR pseudo-ground-truth benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write grids, log, report and images to a directory.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a PGT grid against a GT grid; prints the report JSON.
    Eval {
        #[arg(long)]
        pgt: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        /// Pearson, Map Score and OCR minimums, e.g. `0.95,0.9,0.9`.
        #[arg(long)]
        thresholds: Option<String>,
    },
    /// Run a scenario over weather values and seeds; writes one CSV row per run.
    Sweep {
        scenario: PathBuf,
        /// rain_rate, fog_visibility, snow_rate or sun_level.
        #[arg(long)]
        param: SweepParam,
        /// Comma list, e.g. `0,10,20` or `inf,200,100`.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// `1..5` (inclusive) or a comma list.
        #[arg(long, default_value = "1")]
        seeds: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a built-in catalog as CSV.
    #[command(group(ArgGroup::new("which").required(true).args(["sensors", "limitations"])))]
    Catalog {
        #[arg(long)]
        sensors: bool,
        #[arg(long)]
        limitations: bool,
    },
    /// Convert a grid file to a PGM image.
    Render {
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_thresholds(s: &str) -> Result<KpiThresholds> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| HarnessError::Usage(format!("bad --thresholds `{s}`")))?;
    let [p, m, o] = parts[..] else {
        return Err(HarnessError::Usage(format!("--thresholds needs three values, got `{s}`")));
    };
    KpiThresholds::new(p, m, o).map_err(|e| HarnessError::Usage(e.to_string()))
}

fn print(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| HarnessError::io("<stdout>", e))
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { scenario, out } => {
            let s = read_scenario(&scenario)?;
            let r = run_to_dir(&s, &out)?;
            let fmt = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.4}"));
            eprintln!(
                "pearson {} map_score {} ocr {} valid {}",
                fmt(r.report.pearson),
                fmt(r.report.map_score),
                fmt(r.report.occupied_cells_ratio),
                r.report.valid
            );
            Ok(())
        }
        Command::Eval { pgt, gt, thresholds } => {
            let t = thresholds.as_deref().map(parse_thresholds).transpose()?.unwrap_or_default();
            let pgt = read_grid(&pgt)?;
            let gt = read_grid(&gt)?;
            let report = evaluate(&pgt, &gt, &t).map_err(|e| match e {
                pgt_core::Error::Invariant(_) => HarnessError::Core(e),
                other => HarnessError::data("eval", other),
            })?;
            print(&report_to_json(&report, None, None)?)
        }
        Command::Sweep { scenario, param, values, seeds, out } => {
            let values = parse_values(&values).map_err(HarnessError::Usage)?;
            let seeds = parse_seeds(&seeds).map_err(HarnessError::Usage)?;
            let base = read_scenario(&scenario)?;
            let results = sweep(&base, param, &values, &seeds)?;
            let rows: Vec<_> = results.iter().map(|r| r.row()).collect();
            fs::write(&out, rows_to_csv(&rows)?).map_err(|e| HarnessError::io(&out, e))
        }
        Command::Catalog { sensors, .. } => print(&if sensors { catalog::sensors_csv()? } else { catalog::limitations_csv()? }),
        Command::Render { grid, out } => export_grid_image(&read_grid(&grid)?, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pgt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
