use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rcw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcw"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run rcw")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(dir: &Path, name: &str) -> String {
    let file = format!("{name}.json");
    assert!(rcw(dir, &["gen", "fixture", name, "-o", &file])
        .status
        .success());
    file
}

#[test]
fn lps_generation_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    for f in ["a.json", "b.json"] {
        let out = rcw(
            dir.path(),
            &["gen", "lps", "--p", "5", "--q", "11", "-o", f],
        );
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    // Only the output name in the recorded command differs.
    let a = String::from_utf8(a).unwrap().replace("a.json", "X");
    let b = String::from_utf8(b).unwrap().replace("b.json", "X");
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["n"], 660);
    assert_eq!(v["d"], 6);
    assert_eq!(v["source"]["kind"], "lps");
}

#[test]
fn random_seed_is_recorded_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "random", "--n", "20", "--d", "3", "--seed", "7"];
    let a = json(&rcw(dir.path(), &args));
    let b = json(&rcw(dir.path(), &args));
    assert_eq!(a, b);
    assert_eq!(a["manifest"]["seeds"][0], 7);
    assert!(a["manifest"].get("wall_time_s").is_none());
}

#[test]
fn timing_flag_adds_wall_time() {
    let dir = TempDir::new().unwrap();
    let v = json(&rcw(dir.path(), &["--timing", "gen", "fixture", "k4"]));
    assert!(v["manifest"]["wall_time_s"].is_number());
}

#[test]
fn missing_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = rcw(dir.path(), &["mix", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"n\": 3}").unwrap();
    assert_eq!(
        rcw(dir.path(), &["spectrum", "bad.json"]).status.code(),
        Some(2)
    );
    assert_eq!(rcw(dir.path(), &["mix"]).status.code(), Some(2));
    assert_eq!(rcw(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn spectrum_classifies_petersen() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "petersen");
    let v = json(&rcw(dir.path(), &["spectrum", &g]));
    assert_eq!(v["classification"]["is_ramanujan"], true);
    let eig: Vec<f64> = serde_json::from_value(v["eigenvalues"].clone()).unwrap();
    assert!((eig[0] - 3.0).abs() < 1e-12);
    assert!((eig[9] + 2.0).abs() < 1e-12);
    assert!(v["manifest"]["graph_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn mix_writes_matching_csv() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "petersen");
    let v = json(&rcw(
        dir.path(),
        &["mix", &g, "--t-max", "6", "--csv", "m.csv"],
    ));
    let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,d_max,d_mean,d2,N_t,lower_bound"));
    assert_eq!(lines.count(), 7);
    let d1 = v["records"][1]["d_max"].as_f64().unwrap();
    assert!((d1 - 0.7).abs() < 1e-15);
}

#[test]
fn saved_spectrum_is_reused() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "heawood");
    let s = rcw(dir.path(), &["spectrum", &g, "--vectors", "-o", "s.json"]);
    assert!(s.status.success());
    let with = json(&rcw(
        dir.path(),
        &["variance", &g, "--t", "4", "--spectrum", "s.json"],
    ));
    let without = json(&rcw(dir.path(), &["variance", &g, "--t", "4"]));
    assert!(with["manifest"]["spectrum_sha256"].is_string());
    assert_eq!(with["w2_direct"], without["w2_direct"]);
}

#[test]
fn diameter_reports_k4_literal_failure() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "k4");
    let out = rcw(dir.path(), &["diameter", &g]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"fail\""), "{text}");
}

#[test]
fn density_on_bipartite_is_inapplicable() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "cube3");
    let v = json(&rcw(dir.path(), &["density", &g]));
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["bound"]["status"], "inapplicable", "{row}");
        assert_eq!(row["chain"]["status"], "inapplicable", "{row}");
    }
}

#[test]
fn verify_fails_only_on_k4_literal_row() {
    let dir = TempDir::new().unwrap();
    let out = rcw(dir.path(), &["verify", "-o", "v.json"]);
    assert_eq!(out.status.code(), Some(1));
    let rows: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(rows["failed"], 1);
    let failed: Vec<&Value> = rows["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .collect();
    assert_eq!(failed.len(), 1, "{failed:?}");
    assert_eq!(failed[0]["fixture"], "k4");
    assert!(failed[0]["claim"]
        .as_str()
        .unwrap()
        .starts_with("almost_diameter:"));

    let rest = rcw(
        dir.path(),
        &["verify", "--fixtures", "petersen,heawood,cube3"],
    );
    assert_eq!(rest.status.code(), Some(0));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "petersen");
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_rcw"))
            .current_dir(dir.path())
            .env("RCW_THREADS", threads)
            .args(["mix", &g])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}
