//! End-to-end tests of the command-line surface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphheat"))
}

fn write_star(dir: &tempfile::TempDir) -> PathBuf {
    let path = dir.path().join("star5.json");
    std::fs::write(
        &path,
        r#"{"vertices": ["c", "t0", "t1", "t2", "t3", "t4"],
            "edges": [
              {"id": "e0", "from": "c", "to": "t0", "length": 1.0},
              {"id": "e1", "from": "c", "to": "t1", "length": 1.0},
              {"id": "e2", "from": "c", "to": "t2", "length": 1.0},
              {"id": "e3", "from": "c", "to": "t3", "length": 1.0},
              {"id": "e4", "from": "c", "to": "t4", "length": 1.0}
            ]}"#,
    )
    .unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn validate_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_star(&dir);
    let out = bin().args(["validate", "--graph"]).arg(&graph).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices=6"));
    assert!(text.contains("edges=5"));
}

#[test]
fn validate_rejects_broken_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"vertices": ["u"], "edges": [{"id": "e", "from": "u", "to": "w", "length": 1.0}]}"#,
    )
    .unwrap();
    let out = bin().args(["validate", "--graph"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown vertex"));
}

#[test]
fn grid_is_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_star(&dir);
    let run = |threads: &str| {
        let out = bin()
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "grid",
                "--edge",
                "e0",
                "--t",
                "0.005,0.01,0.02,0.05",
                "--samples",
                "50",
                "--graph",
            ])
            .arg(&graph)
            .output()
            .unwrap();
        assert!(out.status.success());
        stdout(&out)
    };
    let first = run("1");
    let second = run("4");
    assert_eq!(first, second);
    let mut lines = first.lines();
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 5);
    assert!(header.starts_with("x,t="));
    assert_eq!(lines.count(), 51);
}

#[test]
fn grid_covers_symmetric_tetrahedron() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.json");
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            edges.push(format!(
                "{{\"id\": \"e{i}_{j}\", \"from\": \"v{i}\", \"to\": \"v{j}\", \"length\": 1.0}}"
            ));
        }
    }
    let json = format!(
        "{{\"vertices\": [\"v0\", \"v1\", \"v2\", \"v3\"], \"edges\": [{}]}}",
        edges.join(", ")
    );
    std::fs::write(&path, json).unwrap();
    let out = bin()
        .args([
            "grid",
            "--edge",
            "e0_1",
            "--t",
            "0.005,0.01,0.02,0.05",
            "--samples",
            "20",
            "--graph",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    // Vertex dip: ends sit at 2/3 of the interior plateau at small t.
    let t = 0.005f64;
    let plateau = 1.0 / (4.0 * std::f64::consts::PI * t).sqrt();
    assert!((rows[0][1] / plateau - 2.0 / 3.0).abs() < 1e-6);
    assert!((rows[10][1] / plateau - 1.0).abs() < 1e-6);
    assert!((rows[20][1] / plateau - 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn heat_reports_value_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_star(&dir);
    let out = bin()
        .args(["heat", "--point", "e0:0.5", "--t", "0.05", "--graph"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,value,bound");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[1].parse().unwrap();
    let bound: f64 = row[2].parse().unwrap();
    assert!(value > 0.0 && bound <= 1e-10);
}

#[test]
fn spectrum_matches_known_star_levels() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_star(&dir);
    let out = bin()
        .args(["spectrum", "--sigma-max", "5", "--graph"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    // sigma = 0, pi/2 (x4), pi, 3 pi/2 (x4).
    assert_eq!(rows.len(), 4);
    let sigma1: f64 = rows[1][0].parse().unwrap();
    assert!((sigma1 - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert_eq!(rows[1][2], "4");
    assert_eq!(rows[2][2], "1");
}

#[test]
fn edge_trace_json_reports_constancy() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_star(&dir);
    let out = bin()
        .args([
            "edge-trace",
            "--edge",
            "e0",
            "--t",
            "0.2:1:5",
            "--lmax",
            "9",
            "--sigma-max",
            "16",
            "--format",
            "json",
            "--graph",
        ])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let dev = json["max_deviation"].as_f64().unwrap();
    assert!(dev < 1e-8, "max_deviation {dev}");
    assert_eq!(json["config"]["edge"], "e0");
}

#[test]
fn verify_scattering_suite_passes_and_fault_fails() {
    let ok = bin()
        .args(["verify", "--suite", "scattering"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(json["passed"], true);

    let broken = bin()
        .args(["verify", "--suite", "scattering", "--fault-beta", "1e-3"])
        .output()
        .unwrap();
    assert!(!broken.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&broken)).unwrap();
    assert_eq!(json["passed"], false);

    let unknown = bin().args(["verify", "--suite", "nonsense"]).output().unwrap();
    assert!(!unknown.status.success());
}
