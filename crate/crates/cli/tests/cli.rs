use std::process::{Command, Output};

use serde_json::Value;

fn motsheaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motsheaf"))
        .args(args)
        .env_remove("MOTSHEAF_MAX_POINTS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hilbert_scheme_of_two_points() {
    let o = motsheaf(&["hilb", "--surface", "p2", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,0,2,0,3,0,2,0,1\n");
    let o = motsheaf(&["hilb", "--surface", "p2", "--n", "3", "--euler"]);
    assert_eq!(stdout(&o), "22\n");
}

#[test]
fn s_parameter_query() {
    let o = motsheaf(&["s-param", "--surface", "f1", "--L", "2,3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn degree_eight_json_report() {
    let o = motsheaf(&["betti", "--surface", "p2", "--L", "8", "--chi", "-7", "--format", "json"]);
    assert!(o.status.success());
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["input", "normalization", "shift", "valid_degree_min", "raw_high", "reflected_low", "hodge", "flags"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    let low: Vec<u64> = j["reflected_low"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_u64().unwrap())
        .collect();
    assert_eq!(low, [1, 0, 2, 0, 6, 0, 13, 0, 29, 0, 57, 0, 113, 0]);
    assert_eq!(j["shift"]["dtilde"], 27);
    assert_eq!(j["raw_high"].as_array().unwrap().last().unwrap()[1], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(motsheaf(&["betti", "--surface", "p2", "--L", "8"]).status.code(), Some(1));
    assert_eq!(motsheaf(&["check", "--surface", "f7", "--L", "1,1"]).status.code(), Some(1));
    assert_eq!(motsheaf(&["check", "--surface", "p2", "--L", "1,1"]).status.code(), Some(1));
    assert_eq!(motsheaf(&["check", "--surface", "p2", "--L", "-2"]).status.code(), Some(1));
    let refused = motsheaf(&["betti", "--surface", "f1", "--L", "1,0", "--chi", "1"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("L^2"));
    assert_eq!(motsheaf(&["audit", "--surface", "f1", "--L", "3,0"]).status.code(), Some(2));
    assert_eq!(motsheaf(&["audit", "--surface", "p2", "--L", "9", "--chi", "-3"]).status.code(), Some(0));
    assert_eq!(motsheaf(&["--help"]).status.code(), Some(0));
}

#[test]
fn cap_comes_from_the_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_motsheaf"))
            .args(["betti", "--surface", "p2", "--L", "8", "--chi", "-7"])
            .env("MOTSHEAF_MAX_POINTS", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("10").status.code(), Some(1));
    assert!(run("30").status.success());
    assert_eq!(run("lots").status.code(), Some(1));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_motsheaf"))
        .args(["betti", "--surface", "p2", "--L", "8", "--chi", "-7", "--max-points", "40"])
        .env("MOTSHEAF_MAX_POINTS", "10")
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--surface", "f1", "--a", "1..4", "--b", "1..5", "--chis", "-2,1,3", "--format", "json"];
    let a = motsheaf(&args);
    let b = motsheaf(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn grid_tables() {
    let empty = motsheaf(&["table", "--surface", "p2", "--degrees", "3..2", "--format", "csv"]);
    assert!(empty.status.success());
    assert_eq!(stdout(&empty).lines().count(), 1);

    let grid = motsheaf(&["table", "--surface", "p2", "--degrees", "8..10", "--chis", "-1,-7", "--format", "csv"]);
    let text = stdout(&grid);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][0..2], pair[1][0..2]);
        assert_eq!(pair[0][11], pair[1][11], "reflected tables differ in chi");
    }

    let one = motsheaf(&["table", "--surface", "p2", "--degrees", "8", "--chis", "-7", "--format", "json"]);
    let single = motsheaf(&["betti", "--surface", "p2", "--L", "8", "--chi", "-7", "--format", "json"]);
    let t: Value = serde_json::from_str(&stdout(&one)).unwrap();
    let s: Value = serde_json::from_str(&stdout(&single)).unwrap();
    let row = &t["rows"][0];
    assert_eq!(row["chi0"], s["normalization"]["chi0"].to_string());
    assert_eq!(row["dtilde"], s["shift"]["dtilde"].to_string());
    assert_eq!(row["valid_degree_min"], s["valid_degree_min"].to_string());
}

#[test]
fn emitted_config_reruns_identically() {
    let args = ["betti", "--surface", "p2", "--L", "9", "--chi", "-3", "--format", "csv"];
    let direct = motsheaf(&args);
    let mut with_emit = args.to_vec();
    with_emit.push("--emit-config");
    let config = motsheaf(&with_emit);
    assert!(config.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, &config.stdout).unwrap();
    let rerun = motsheaf(&["run", "--config", path.to_str().unwrap()]);
    assert!(rerun.status.success());
    assert_eq!(rerun.stdout, direct.stdout);
}

#[test]
fn latex_and_audit_documents() {
    let o = motsheaf(&["betti", "--surface", "p2", "--L", "7", "--chi", "1", "--format", "latex"]);
    let t = stdout(&o);
    assert!(t.contains("$b_i$ & 1 & 0 & 2 & 0 & 6 & 0 & 13 & 0 & 29 & 0 & 57 & 0 \\\\"));
    let o = motsheaf(&["audit", "--surface", "p2", "--L", "6", "--chi", "1", "--format", "json"]);
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["audit"], "pass");
    let entries = j["sheaf"]["entries"].as_array().unwrap();
    let rational = entries.iter().find(|e| e["name"] == "rational-part k=3").unwrap();
    assert_eq!(rational["value"], 12);
}
