use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_driftlap");

fn driftlap(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(dir).env_remove("DRIFTLAP_CACHE_DIR").output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const INTERVAL: &str = r#"{
    "experiments": [{
        "id": "interval",
        "domain": {"kind": "interval", "a": 0, "b": "pi"},
        "source": {"solve": {"base_points": 63, "levels": 3}},
        "suite": ["ppw", "hp", "yang1", "yang2", "conjecture"],
        "k_max": 10
    }]
}"#;

#[test]
fn verify_writes_reports_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), INTERVAL);
    let out = driftlap(&["verify", &cfg, "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["checks.csv", "report.json", "plot_data.csv", "timings.json"] {
        assert!(tmp.path().join("out").join(f).is_file(), "{f}");
    }
    let csv = std::fs::read_to_string(tmp.path().join("out/checks.csv")).unwrap();
    // four asserted families plus the conjecture, ten k each
    assert_eq!(csv.lines().count(), 1 + 5 * 10);

    let again = driftlap(&["report", "out"], tmp.path());
    assert_eq!(again.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&again.stdout).contains("0 violated"));
}

#[test]
fn violation_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &INTERVAL.replace(r#""ppw", "hp", "yang1", "yang2", "conjecture""#, r#"{"name": "ppw", "c": -100}"#),
    );
    let out = driftlap(&["verify", &cfg, "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solver_failure_exits_three_and_keeps_going() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"{
        "experiments": [
            {
                "id": "stalls",
                "domain": {"kind": "box", "lo": [0, 0], "hi": [1, 1]},
                "source": {"solve": {"base_points": 20, "levels": 2}},
                "solver": {"method": "iterative", "max_iterations": 1, "tol": 1e-14},
                "suite": ["ppw"],
                "k_max": 3
            },
            {
                "id": "oracle",
                "source": {"oracle": {"name": "interval", "length": 1}},
                "suite": ["ppw"],
                "k_max": 3
            }
        ]
    }"#;
    let cfg = write_config(tmp.path(), body);
    let out = driftlap(&["verify", &cfg, "--out", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(json["experiments"][0]["status"], "failed");
    assert_eq!(json["experiments"][1]["status"], "completed");
    assert_eq!(json["experiments"][1]["checks"].as_array().unwrap().len(), 3);

    let spectrum = driftlap(&["spectrum", &cfg, "stalls"], tmp.path());
    assert_eq!(spectrum.status.code(), Some(3));
}

#[test]
fn conjecture_never_sets_the_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), INTERVAL);
    let out = driftlap(&["conjecture", &cfg, "interval", "--kmax", "8", "--out", "c"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 8);
    assert!(stdout.lines().all(|l| l.ends_with("holds") || l.ends_with("holds_strictly")));
}

#[test]
fn oracle_prints_closed_forms() {
    let tmp = tempfile::tempdir().unwrap();
    let out = driftlap(&["oracle", "sphere", r#"{"m": 2, "radius": 1}"#, "--k", "5"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eigenvalues"], serde_json::json!([0.0, 2.0, 2.0, 2.0, 6.0]));
    assert_eq!(v["index_base"], 0);
}

#[test]
fn bad_input_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(driftlap(&["verify", "missing.json"], tmp.path()).status.code(), Some(1));
    assert_eq!(driftlap(&["oracle", "nope"], tmp.path()).status.code(), Some(1));
    assert_eq!(driftlap(&["frobnicate"], tmp.path()).status.code(), Some(1));
}
