use std::path::Path;
use std::process::{Command, Output};

use uavnet::model::file::BASELINE_TOML;
use uavnet::sweep::Table;

fn uavnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavnet")).args(args).output().expect("run uavnet")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn validate_accepts_baseline_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ok.toml", BASELINE_TOML);
    let out = uavnet(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));
}

#[test]
fn invalid_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &BASELINE_TOML.replace("ho_delay_data_s = 0.1", "ho_delay_data_s = 0.9"));
    for verb in ["validate", "point", "sweep"] {
        let out = uavnet(&[verb, "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{verb}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("data handover delay"));
    }
}

#[test]
fn parse_error_names_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = BASELINE_TOML.replace("height_m = 45.0", "height_m = forty-five");
    let line = text.lines().position(|l| l.contains("forty-five")).unwrap() + 1;
    let cfg = write(dir.path(), "broken.toml", &text);
    let out = uavnet(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("broken.toml:{line}:")), "{err}");
}

#[test]
fn invalid_grid_exits_with_two() {
    for grid in ["", "0,5,5", "10:0:5", "a,b"] {
        let out = uavnet(&["sweep", "--grid", grid]);
        assert_eq!(out.status.code(), Some(2), "{grid:?}");
    }
    let out = uavnet(&["sweep", "--variable", "velocity", "--coupling", "uav-led"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_with_three() {
    let out = uavnet(&["point", "--chords", "2", "--seed", "1", "--velocity", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.csv");
    let out = uavnet(&["sweep", "--chords", "2", "--seed", "1", "--grid", "0,10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("4 of 4 sweep points failed"), "{err}");
    // The partial table still carries its header.
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn velocity_sweep_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let json = dir.path().join("v.json");
    for (path, fmt) in [(&csv, "csv"), (&json, "json")] {
        let out = uavnet(&["sweep", "--format", fmt, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 19);
    let table = Table::parse_csv(&text).unwrap();
    assert_eq!(table.rows.len(), 18);

    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 18);
    for (obj, row) in rows.iter().zip(&table.rows) {
        let obj = obj.as_object().unwrap();
        assert_eq!(obj.keys().collect::<Vec<_>>(), table.columns.iter().collect::<Vec<_>>());
        for (name, cell) in table.columns.iter().zip(row) {
            match cell.as_f64() {
                Some(x) => assert_eq!(obj[name].as_f64().unwrap(), x, "{name}"),
                None => assert_eq!(obj[name].as_str().unwrap(), cell.render()),
            }
        }
    }
}

#[test]
fn point_matches_golden() {
    let golden = Table::parse_csv(include_str!("golden/point_v20.csv")).unwrap();
    let out = uavnet(&["point", "--velocity", "20", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let fresh = Table::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(fresh.columns, golden.columns);
    for (a, b) in fresh.rows.iter().zip(&golden.rows) {
        for ((name, x), y) in fresh.columns.iter().zip(a).zip(b) {
            match (x.as_f64(), y.as_f64()) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-7 * y.abs().max(1e-300), "{name}: {x} vs {y}"),
                _ => assert_eq!(x, y),
            }
        }
    }
}

#[test]
fn oracle_reports_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("raw.csv");
    let out = uavnet(&[
        "oracle",
        "--samples",
        "2000",
        "--trajectories",
        "20",
        "--mode",
        "split",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = Table::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    // 3 association + 4 coverage + 3 spectral efficiency + 7 handover rows.
    assert_eq!(table.rows.len(), 17);
    let raw = std::fs::read_to_string(dump).unwrap();
    assert_eq!(raw.lines().count(), 2001);
    assert!(raw.starts_with("trial,seed,tier,distance_m,sinr"));
}

#[test]
fn threshold_and_intensity_sweeps_run() {
    let out = uavnet(&["sweep", "--variable", "threshold", "--grid=-5:10:5", "--mode", "conventional"]);
    assert_eq!(out.status.code(), Some(0));
    let t = Table::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.columns[0], "threshold_db");
    let cov: Vec<f64> = t.values("coverage").unwrap().into_iter().map(Option::unwrap).collect();
    assert_eq!(cov.len(), 4);
    assert!(cov.windows(2).all(|w| w[1] < w[0]));

    let out = uavnet(&["sweep", "--variable", "uav_intensity", "--coupling", "0.5,0.25", "--grid", "1,4", "--outputs", "a_v,at_u_bps"]);
    assert_eq!(out.status.code(), Some(0));
    let t = Table::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.columns, vec!["uav_intensity_per_km2", "mode", "a_v", "at_u_bps"]);
    assert_eq!(t.rows.len(), 4);
}
