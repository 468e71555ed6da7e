use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgt")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scenario_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).display().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_eval_render() {
    let tmp = tempfile::tempdir().unwrap();
    let out: PathBuf = tmp.path().join("run");
    let o = pgt(&["run", &scenario_path("room_snow.json"), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["frames.jsonl", "gt.grid", "pgt.grid", "gt.pgm", "pgt.pgm", "report.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let report: serde_json::Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();

    let o = pgt(&["eval", "--pgt", s(&out.join("pgt.grid")), "--gt", s(&out.join("gt.grid"))]);
    assert_eq!(code(&o), 0);
    let eval: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(eval["pearson"], report["pearson"]);
    assert_eq!(eval["map_score"], report["map_score"]);

    let o = pgt(&["eval", "--pgt", s(&out.join("gt.grid")), "--gt", s(&out.join("gt.grid")), "--thresholds", "1,0.5,1"]);
    let eval: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(eval["pearson"], 1.0);
    assert_eq!(eval["threshold_map_score"], 0.5);

    let img = tmp.path().join("pgt.pgm");
    assert_eq!(code(&pgt(&["render", s(&out.join("pgt.grid")), "--out", s(&img)])), 0);
    assert_eq!(fs::read(&img).unwrap(), fs::read(out.join("pgt.pgm")).unwrap());
}

#[test]
fn sweep_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("sweep.csv");
    let o = pgt(&[
        "sweep",
        &scenario_path("room_snow.json"),
        "--param",
        "snow_rate",
        "--values",
        "0,15",
        "--seeds",
        "1..2",
        "--out",
        s(&csv),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].ends_with(",seed"));
    assert!(lines[1].starts_with("room-snow-driveby,snow,0,") && lines[1].ends_with(",1"));
    assert!(lines[4].starts_with("room-snow-driveby,snow,15,") && lines[4].ends_with(",2"));
}

#[test]
fn catalogs() {
    let o = pgt(&["catalog", "--sensors"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("model,range_m,"));

    let o = pgt(&["catalog", "--limitations"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("index,name,category,evidence,modeled"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&pgt(&[])), 1);
    assert_eq!(code(&pgt(&["--help"])), 0);
    assert_eq!(code(&pgt(&["catalog"])), 1);
    assert_eq!(code(&pgt(&["catalog", "--sensors", "--limitations"])), 1);
    assert_eq!(code(&pgt(&["frobnicate"])), 1);

    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.json");
    let o = pgt(&["run", s(&missing), "--out", s(tmp.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("pgt: "));

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"seed\": 1}").unwrap();
    let o = pgt(&["run", s(&bad), "--out", s(tmp.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("scenario field"));

    let o = pgt(&["sweep", &scenario_path("room_snow.json"), "--param", "rain_rate", "--values", "", "--out", s(&tmp.path().join("x.csv"))]);
    assert_eq!(code(&o), 1);
    let o = pgt(&["sweep", &scenario_path("room_snow.json"), "--param", "hail", "--values", "1", "--out", s(&tmp.path().join("x.csv"))]);
    assert_eq!(code(&o), 1);

    let grid = tmp.path().join("g.grid");
    fs::write(&grid, "PGTGRID 1 2 1 0.1 0 0\n0\n").unwrap();
    assert_eq!(code(&pgt(&["render", s(&grid), "--out", s(&tmp.path().join("g.pgm"))])), 2);
    let o = pgt(&["eval", "--pgt", s(&grid), "--gt", s(&grid), "--thresholds", "1,2"]);
    assert_eq!(code(&o), 1);
}
