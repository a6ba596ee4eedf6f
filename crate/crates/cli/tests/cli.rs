use std::path::PathBuf;
use std::process::{Command, Output};

use xxring::entanglement::full_report;
use xxring::spectral::{eigendecompose, gibbs_state, Temperature};
use xxring::spin_model::{build_xx_hamiltonian, ModelParams};
use xxring::sweep::{run_sweep, Axis, GridSpec, Quantity};
use xxring::table_io::{read_boundary_csv, read_csv, read_jsonl};

fn xxring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxring")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("xxring-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scalar(out: &Output) -> f64 {
    stdout(out)
        .lines()
        .next()
        .unwrap()
        .split('=')
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn spectrum_with_closed_form() {
    let out = xxring(&["spectrum", "--j", "1", "--b", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,numeric,analytic,abs_diff"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    for r in &rows {
        assert!(r[0].starts_with('E'));
        assert!(r[3].parse::<f64>().unwrap() < 1e-10);
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("max |numeric - analytic|"));
}

#[test]
fn spectrum_at_zero_coupling_and_field() {
    let out = xxring(&["spectrum", "--j", "0", "--b", "0"]);
    for line in stdout(&out).lines().skip(1) {
        let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(e.abs(), 0.0);
    }
}

#[test]
fn spectrum_without_closed_form() {
    let out = xxring(&["spectrum", "--j", "1", "--b", "0.5", "--delta", "0.3"]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(cells[0].starts_with('#'));
        assert_eq!((cells[2], cells[3]), ("", ""));
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent"));
}

#[test]
fn concurrence_reference_points() {
    let c = scalar(&xxring(&["concurrence", "--j", "1", "--b", "0.7", "--t", "0.01"]));
    assert!((c - 0.5).abs() < 1e-6);
    let c = scalar(&xxring(&["concurrence", "--j", "1", "--b", "0", "--t", "0.5"]));
    assert_eq!(c, 0.0);
}

#[test]
fn pair_selection_matches_full_report() {
    let out = xxring(&[
        "concurrence",
        "--j",
        "1",
        "--b",
        "0.5",
        "--t",
        "0.5",
        "--pair",
        "1,2",
        "--format",
        "jsonl",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let c = v["concurrence"].as_f64().unwrap();

    let spec = eigendecompose(&build_xx_hamiltonian(&ModelParams::xx4(1.0, 0.5)).unwrap());
    let rho = gibbs_state(&spec, Temperature::new(0.5).unwrap()).unwrap();
    let report = full_report(&rho, 4).unwrap();
    assert!((c - report.pair(1, 2).unwrap()).abs() <= 1e-12);

    let full = xxring(&["concurrence", "--b", "0.5", "--t", "0.5", "--pair", "1,2", "--full"]);
    let text = stdout(&full);
    let listed: f64 = text.lines().find(|l| l.starts_with("C(1,2)")).unwrap()[9..]
        .trim()
        .parse()
        .unwrap();
    assert!((listed - c).abs() <= 1e-12);
    assert!(text.contains("IC_4") && text.contains("Q = ") && text.contains("residual = "));
}

#[test]
fn zero_temperature_needs_flag() {
    assert_eq!(
        xxring(&["concurrence", "--b", "0.7", "--t", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(xxring(&["concurrence", "--b", "0.7"]).status.code(), Some(2));
    assert_eq!(
        xxring(&["concurrence", "--b", "0.7", "--t", "0.1", "--zero-temp"])
            .status
            .code(),
        Some(2)
    );
    let c = scalar(&xxring(&["concurrence", "--b", "0.7", "--zero-temp"]));
    assert!((c - 0.5).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["concurrence", "--t", "0.1", "--pair", "1,1"],
        vec!["concurrence", "--t", "0.1", "--pair", "1,5"],
        vec!["concurrence", "--t", "-0.1"],
        vec!["spectrum", "--n-sites", "13"],
        vec!["spectrum", "--threads", "0"],
        vec!["figure", "fig9"],
        vec!["tc", "--bracket", "5,1"],
        vec!["validate", "--only", "12"],
        vec!["sweep", "--b-axis", "1:0:5", "--t", "0.1"],
        vec!["sweep"],
    ] {
        let out = xxring(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = scratch("failfast");
    let target = dir.join("out.csv");
    let out = xxring(&["concurrence", "--t", "0", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
    let out = xxring(&[
        "sweep",
        "--b-axis",
        "0:1:0",
        "--t",
        "0.1",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
}

#[test]
fn unwritable_output_exits_1() {
    let out = xxring(&["spectrum", "-o", "/nonexistent-dir/spectrum.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fig2a_shape() {
    let dir = scratch("fig2a");
    let path = dir.join("fig2a.csv");
    assert!(xxring(&["figure", "fig2a", "-o", path.to_str().unwrap()])
        .status
        .success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("j,b,t,delta,quantity,value\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 301);
    let table = read_csv(text.as_bytes()).unwrap();
    assert!(table
        .rows
        .iter()
        .all(|r| r.quantity == Quantity::CAlternate && r.error.is_none()));
}

#[test]
fn fig1b_writes_grid_and_boundary() {
    let dir = scratch("fig1b").join("out");
    assert!(xxring(&["figure", "fig1b", "-o", dir.to_str().unwrap()])
        .status
        .success());
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["boundary.csv", "fig1b.csv"]);
    let boundary = std::fs::read_to_string(dir.join("boundary.csv")).unwrap();
    assert!(boundary.starts_with("b,t_c,branch\n"));
    let points = read_boundary_csv(boundary.as_bytes()).unwrap();
    assert!(!points.is_empty());
    assert_eq!(
        std::fs::read_to_string(dir.join("fig1b.csv")).unwrap().lines().count(),
        1 + 121 * 100
    );
    assert_eq!(xxring(&["figure", "fig1b"]).status.code(), Some(2));
}

#[test]
fn sweep_csv_round_trips_library_table() {
    let out = xxring(&[
        "sweep",
        "--j",
        "1",
        "--b-axis",
        "0:1.5:16",
        "--t-axis",
        "0.05,0.5",
        "--delta-axis",
        "-0.5:0.5:3",
        "--quantities",
        "c_alternate,c_nearest,z",
    ]);
    assert!(out.status.success());
    let parsed = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(parsed.len(), 16 * 2 * 3 * 3);

    let spec = GridSpec::new(
        ModelParams::xx4(1.0, 0.0),
        Axis::range(0.0, 1.5, 16),
        Axis::Values(vec![0.05, 0.5]),
        Axis::range(-0.5, 0.5, 3),
        vec![Quantity::CAlternate, Quantity::CNearest, Quantity::Z],
    );
    assert_eq!(parsed, run_sweep(&spec).unwrap());
}

#[test]
fn sweep_jsonl_and_zero_temperature_rows() {
    let out = xxring(&[
        "sweep",
        "--b-axis",
        "0.2,0.7",
        "--zero-temp",
        "--quantities",
        "q,z",
        "--format",
        "jsonl",
    ]);
    assert!(out.status.success());
    let table = read_jsonl(out.stdout.as_slice()).unwrap();
    assert_eq!(table.len(), 4);
    let q = table.get(Quantity::Q, 0.7, 0.0, 0.0).unwrap();
    assert!((q - 0.75).abs() < 1e-9);
    // Z is undefined at T = 0: NaN row with a message, not an aborted sweep
    let z_rows: Vec<_> = table.quantity(Quantity::Z).collect();
    assert!(z_rows.iter().all(|r| r.value.is_nan() && r.error.is_some()));
}

#[test]
fn tc_lists_crossings() {
    let out = xxring(&["tc", "--b", "1.2"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "b,t_c,branch");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].ends_with(",lower") && rows[2].ends_with(",upper"));
    let out = xxring(&["tc", "--b", "0.7", "--level", "0.3"]);
    assert!(out.status.success());
}

fn strip_timing(s: &str) -> String {
    s.lines()
        .map(|l| l.rsplit_once(" (").map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn validate_is_seeded() {
    let args = ["validate", "--seed", "7", "--draws", "50", "--only", "1,3,4"];
    let a = xxring(&args);
    let b = xxring(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip_timing(&stdout(&a)), strip_timing(&stdout(&b)));
    assert!(stdout(&a).contains("50 draws"));
}

#[test]
fn quick_validation_is_fast() {
    let start = std::time::Instant::now();
    let out = xxring(&["validate", "--quick"]);
    assert!(start.elapsed().as_secs_f64() < 2.0);
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with('[')).count(), 11);
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_xxring"))
        .env("XXRING_THREADS", "2")
        .args(["sweep", "--b-axis", "0:1:5", "--t", "0.2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_xxring"))
        .env("XXRING_THREADS", "lots")
        .args(["spectrum"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn state_summary() {
    let out = xxring(&["state", "--b", "0.7", "--zero-temp", "--format", "jsonl"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["ground_degeneracy"], 1);
    assert!((v["ground_energy"].as_f64().unwrap() + 3.4).abs() < 1e-12);
    assert!((v["reduced_state"][1][2][0].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let text = stdout(&xxring(&["state", "--b", "0.5", "--t", "0.5", "--hamiltonian"]));
    assert!(text.contains("<0010|H|0001> = +1.0"));
    assert!(text.contains("<0000|H|0000> = -2.0"));
}
