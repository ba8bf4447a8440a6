//! End-to-end runs of the `itqsl` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use itqsl_cli::RunReport;
use tempfile::TempDir;

const TWO_LEVEL: &str = r#"{"kind": "two_level", "theta0": 0.7853981633974483, "energy": 1, "horizon": 1}"#;
const GROVER: &str =
    r#"{"kind": "grover", "dimension": 1024, "e_w": 0, "e_perp": 1, "epsilon": 0.01, "horizon": 10}"#;

fn itqsl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itqsl"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn report(path: &Path) -> RunReport {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn two_level_run_writes_trajectory_and_report() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "c.json", TWO_LEVEL);
    let out = itqsl(dir.path(), &["run", "c.json", "--out-dir", "out"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,log_norm,theta,delta_h,fidelity_target"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1001);
    let last: Vec<f64> = rows[1000].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    // 17 significant digits: one leading digit and sixteen after the point
    for v in rows[1000].split(',') {
        let mantissa = v.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{v}");
    }

    let r = report(&dir.path().join("out/report.json"));
    assert!(r.qsl.saturated);
    let tl = r.two_level.unwrap();
    assert!((tl.closed_form_integral - r.qsl.path_length).abs() <= 1e-8);
    assert_eq!(last[2], r.qsl.theta_t);
}

#[test]
fn grover_run_reports_crossing_time() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "g.json", GROVER);
    let out = itqsl(dir.path(), &["run", "g.json", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let g = report(&dir.path().join("report.json")).grover.unwrap();
    let crossing = g.measured_crossing_time.unwrap();
    assert!((crossing - g.runtime_bound_exact).abs() <= 1e-6);
    assert!((crossing - 8.07043).abs() <= 1e-4);
    assert!(g.runtime_bound_large_n > g.runtime_bound_exact);
}

#[test]
fn custom_instance_respects_the_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{
        "kind": "custom", "horizon": 3, "num_steps": 600,
        "hamiltonian": [
            [[0.3, 0], [0.5, 0.2], [0, -0.1], [0.7, 0]],
            [[0.5, -0.2], [-1.1, 0], [0.4, 0.4], [0, 0]],
            [[0, 0.1], [0.4, -0.4], [0.9, 0], [-0.3, 0.6]],
            [[0.7, 0], [0, 0], [-0.3, -0.6], [0.2, 0]]
        ],
        "initial_state": [[1, 0], [1, 1], [0, -1], [0.5, 0]],
        "outputs": {"trajectory_csv": "traj/custom.csv", "report_json": "custom.json"}
    }"#;
    write_config(dir.path(), "c.json", cfg);
    let out = itqsl(dir.path(), &["run", "c.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("traj/custom.csv").exists());
    let r = report(&dir.path().join("custom.json"));
    assert!(r.bound_holds);
    assert!(r.qsl.theta_t <= r.qsl.path_length * (1.0 + 1e-8));
    assert!(r.qsl.slack > 1e-3);
    assert!(!r.saturation.is_saturating);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "g.json", GROVER);
    for d in ["a", "b"] {
        let out = itqsl(dir.path(), &["run", "g.json", "--out-dir", d, "--steps", "200"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["trajectory.csv", "report.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
    let r = report(&dir.path().join("a/report.json"));
    assert_eq!(r.metadata.num_samples, 201);
    assert_eq!(r.scenario.num_steps, Some(200));
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("syntax.json", "{\"kind\": \"two_level\",, }"),
        (
            "gap.json",
            r#"{"kind": "grover", "dimension": 16, "e_w": 2, "e_perp": 1, "epsilon": 0.1, "horizon": 5}"#,
        ),
        (
            "herm.json",
            r#"{"kind": "custom", "horizon": 1, "hamiltonian": [[[0,0],[1,0]],[[0,0],[0,0]]], "initial_state": [[1,0],[0,0]]}"#,
        ),
        ("odd.json", r#"{"theta0": 0.5, "energy": 1, "horizon": 1, "num_steps": 3}"#),
    ];
    for (name, text) in cases {
        write_config(dir.path(), name, text);
        let out = itqsl(dir.path(), &["run", name]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    let stderr = String::from_utf8(itqsl(dir.path(), &["check", "gap.json"]).stderr).unwrap();
    assert!(stderr.contains("NonPositiveGap"));
    let stderr = String::from_utf8(itqsl(dir.path(), &["check", "herm.json"]).stderr).unwrap();
    assert!(stderr.contains("max deviation 1e0"), "{stderr}");
    write_config(dir.path(), "ok.json", TWO_LEVEL);
    assert_eq!(itqsl(dir.path(), &["run", "ok.json", "--steps", "5"]).status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_with_code_three() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"kind": "custom", "horizon": 1,
        "hamiltonian": [[[1e308,0],[1e308,0]],[[1e308,0],[-1e308,0]]],
        "initial_state": [[1,0],[1,0]]}"#;
    write_config(dir.path(), "c.json", cfg);
    assert_eq!(itqsl(dir.path(), &["run", "c.json"]).status.code(), Some(3));
}

#[test]
fn io_failures_exit_with_code_four() {
    let dir = TempDir::new().unwrap();
    assert_eq!(itqsl(dir.path(), &["run", "missing.json"]).status.code(), Some(4));
    write_config(dir.path(), "c.json", TWO_LEVEL);
    fs::write(dir.path().join("blocker"), "").unwrap();
    let out = itqsl(dir.path(), &["run", "c.json", "--out-dir", "blocker/sub"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_validates_without_writing() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "g.json", GROVER);
    let out = itqsl(dir.path(), &["check", "g.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "ok: kind=grover dimension=2 horizon=10 num_steps=1000"
    );
    assert!(!dir.path().join("report.json").exists());
}

fn sweep_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sweep_dimension_shows_logarithmic_scaling() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "g.json", GROVER);
    let out = itqsl(
        dir.path(),
        &["sweep", "g.json", "--param", "dimension", "--values", "16,64,256,1024", "--quiet"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let header = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(header.starts_with("dimension,theta_T,path_length,slack,bound_time,measured_crossing_time,error\n"));
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    let t: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    let n = [16.0f64, 64.0, 256.0, 1024.0];
    for k in 1..4 {
        let want = 0.5 * ((n[k] - 1.0) / (n[k - 1] - 1.0)).ln();
        assert!((t[k] - t[k - 1] - want).abs() <= 1e-6);
    }
}

#[test]
fn sweep_theta0_two_level_saturates_for_every_angle() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "c.json", TWO_LEVEL);
    let values = "0.39269908169872414,0.7853981633974483,1.1780972450961724";
    let out = itqsl(dir.path(), &["sweep", "c.json", "--param", "theta0", "--values", values]);
    assert_eq!(out.status.code(), Some(0));
    for row in sweep_rows(&dir.path().join("sweep.csv")) {
        let slack: f64 = row[3].parse().unwrap();
        assert!(slack.abs() <= 1e-10, "θ={}: slack {slack}", row[0]);
        assert!(row[5].is_empty() && row[6].is_empty());
    }
}

#[test]
fn sweep_records_failures_and_continues() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "g.json", GROVER);
    let out = itqsl(dir.path(), &["sweep", "g.json", "--param", "e_perp", "--values", "-1,2", "--steps", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = sweep_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows[0][6].contains("NonPositiveGap"));
    assert!(rows[1][6].is_empty());
    let t: f64 = rows[1][5].parse().unwrap();
    assert!((t - 8.07043 / 2.0).abs() <= 1e-4);
}

#[test]
fn sweep_with_no_values_is_empty() {
    let dir = TempDir::new().unwrap();
    write_config(dir.path(), "c.json", TWO_LEVEL);
    let out = itqsl(dir.path(), &["sweep", "c.json", "--param", "energy", "--values", "", "--out-dir", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(sweep_rows(&dir.path().join("s/sweep.csv")).is_empty());
    let bad = itqsl(dir.path(), &["sweep", "c.json", "--param", "dimension", "--values", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}
