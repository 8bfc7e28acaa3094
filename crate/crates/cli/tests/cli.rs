use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
#[allow(clippy::approx_constant)] // the rounded eps is echoed verbatim
fn solve_finds_five_ninths() {
    let out = qgame(&[
        "corr-game",
        "solve",
        "--game",
        "pd1",
        "--g",
        "g3",
        "--delta",
        "0.5",
        "--eps",
        "0.785398",
    ]);
    let v = stdout_json(&out);
    let ne = v["quantum_ne"].as_array().unwrap();
    assert_eq!(ne.len(), 1);
    for p in ne[0].as_array().unwrap() {
        // eps is rounded on the command line, which moves the point by ~5e-9
        assert!((p.as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-7);
    }
    assert_eq!(v["method"], "dominance");
    assert_eq!(v["config"]["args"]["eps"], 0.785398);
    assert!(v["classical_ne"]["components"].is_array());
    assert!(v["payoffs"].is_array());
}

#[test]
fn scan_m13_flips_where_the_sum_crosses() {
    let out = qgame(&[
        "lhv", "scan-m13", "--from", "-0.3", "--to", "0.1", "--steps", "400", "--game", "pd2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let sum = header.iter().position(|h| *h == "sum").unwrap();
    let ne = header.iter().position(|h| *h == "ne_exists").unwrap();
    let rows: Vec<(f64, bool)> = lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[sum].parse().unwrap(), cells[ne] == "true")
        })
        .collect();
    assert_eq!(rows.len(), 401);
    assert!(rows.iter().filter(|r| r.0 < -0.25).all(|r| !r.1));
    let flips: Vec<usize> = (1..rows.len()).filter(|&i| rows[i].1 != rows[i - 1].1).collect();
    assert_eq!(flips.len(), 1);
    let (before, after) = (rows[flips[0] - 1].0, rows[flips[0]].0);
    assert!(before < -2.0 / 9.0 && -2.0 / 9.0 <= after, "{before} {after}");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seq: bool| {
        let report = dir.path().join(format!("{name}.json"));
        let records = dir.path().join(format!("{name}.csv"));
        let mut args = vec![
            "epr",
            "simulate",
            "--theta-a",
            "1.0472",
            "--theta-b",
            "0.5236",
            "--pa",
            "0.5",
            "--pb",
            "0.5",
            "--runs",
            "200000",
            "--seed",
            "7",
            "--quiet",
            "--out",
            report.to_str().unwrap(),
            "--records",
            records.to_str().unwrap(),
        ];
        if seq {
            args.push("--sequential");
        }
        let out = qgame(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stderr.is_empty());
        (fs::read(report).unwrap(), fs::read(records).unwrap())
    };
    let (r1, c1) = run("a", false);
    let (r2, c2) = run("b", false);
    assert_eq!(c1, c2);
    assert!(c1.starts_with(b"run,axisA,axisB,a,b\n"));
    // reports differ only in the echoed file paths
    let strip = |r: &[u8]| {
        let mut v: Value = serde_json::from_slice(r).unwrap();
        v["config"]["args"]["records"] = Value::Null;
        v["records"] = Value::Null;
        v
    };
    assert_eq!(strip(&r1), strip(&r2));
    let (r3, c3) = run("c", true);
    assert_eq!(c1, c3, "sequential and parallel runs draw the same records");
    assert_eq!(strip(&r1)["report"], strip(&r3)["report"]);
    assert_eq!(strip(&r1)["config"]["seed"], 7);

    let args = ["lhv", "scan-m13", "--steps", "50"];
    assert_eq!(qgame(&args).stdout, qgame(&args).stdout);
}

#[test]
fn exit_codes_and_error_json() {
    let usage = qgame(&["corr-game", "solve", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(2));

    let domain = qgame(&["gfun", "eval", "--g", "g1", "--theta", "4"]);
    assert_eq!(domain.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&domain.stderr).unwrap();
    assert_eq!(err["error"], "domain");
    assert!(err["message"].as_str().unwrap().contains("theta"));

    let unknown = qgame(&["corr-game", "solve", "--g", "g9"]);
    assert_eq!(unknown.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&unknown.stderr).unwrap();
    assert_eq!(err["error"], "invalid_g_function");

    let missing = qgame(&["lhv", "analyze", "--measure", "/nonexistent/m.json"]);
    assert_eq!(missing.status.code(), Some(1));

    assert_eq!(qgame(&["--help"]).status.code(), Some(0));
    assert_eq!(qgame(&["quantum", "eisert", "--help"]).status.code(), Some(0));
}

#[test]
fn schema_describes_output_fields() {
    let v = stdout_json(&qgame(&["corr-game", "solve", "--schema"]));
    assert_eq!(v["command"], "corr-game solve");
    let names: Vec<&str> = v["fields"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    for f in ["config", "classical_ne", "quantum_ne", "payoffs"] {
        assert!(names.contains(&f), "{f}");
    }
    let all = stdout_json(&qgame(&["--schema"]));
    assert_eq!(all.as_array().unwrap().len(), 14);
    assert_eq!(qgame(&["nope", "--schema"]).status.code(), Some(2));
}

#[test]
fn quantum_examples() {
    let chsh = stdout_json(&qgame(&[
        "quantum", "chsh", "--c00", "0.7071", "--c11", "0.7071", "--xb", "0.7071", "--zb", "0.7071",
    ]));
    assert!((chsh["delta"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    let eisert = stdout_json(&qgame(&[
        "quantum", "eisert", "--game", "pd1", "--gamma", "1.5708", "--qq",
    ]));
    for p in eisert["payoffs"].as_array().unwrap() {
        assert!((p.as_f64().unwrap() - 3.0).abs() < 1e-9);
    }
    let deg = stdout_json(&qgame(&[
        "--deg",
        "quantum",
        "eisert",
        "--gamma",
        "0",
        "--a-theta",
        "180",
    ]));
    assert_eq!(deg["payoffs"][0], 5.0);
    let meyer = stdout_json(&qgame(&["quantum", "meyer", "--p", "0.3"]));
    assert!((meyer["win_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let sep = stdout_json(&qgame(&[
        "quantum",
        "separable",
        "--amps",
        "0,0.7071067811865476,-0.7071067811865476,0",
    ]));
    assert_eq!(sep["separable"], false);
}

#[test]
fn plot_and_sweep_default_to_csv() {
    let out = qgame(&["gfun", "plot", "--g", "g3", "--steps", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# command=gfun plot\n"));
    assert!(text.contains("theta,g\n0,0.5\n"));
    assert!(text.ends_with("3.14159265359,1\n"));

    let sweep = qgame(&["corr-game", "sweep", "--g", "g1", "--steps", "2", "--out", "csv"]);
    let text = String::from_utf8(sweep.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "theta_a,theta_b,payoff_a,payoff_b");
    assert_eq!(data.len(), 10);

    let json = stdout_json(&qgame(&["gfun", "plot", "--steps", "2", "--format", "json"]));
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn lhv_analyze_reports_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, "[0,0,0,1,0,0,0,0,0,0,0,0,-0.2,0,0,0.2]").unwrap();
    let v = stdout_json(&qgame(&[
        "lhv",
        "analyze",
        "--measure",
        path.to_str().unwrap(),
        "--game",
        "pd2",
    ]));
    assert_eq!(v["ne_analysis"]["ne_exists"], false);
    assert_eq!(v["negative_indices"], serde_json::json!([13]));
    assert_eq!(v["split_payoffs"].as_array().unwrap().len(), 4);
    assert!(v["reduction_error"].is_null());
}
