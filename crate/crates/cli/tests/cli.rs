use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qoseval_core::EvaluationReport;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn qoseval(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qoseval"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_accepts_fixtures() {
    for name in ["voice_vs.json", "vs_clients.json", "two_networks.json"] {
        let out = qoseval(&[&"validate", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        assert!(stdout(&out).contains("is valid"));
    }
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.json");
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "network": "n", "rans": [{"id": "r1", "technology": "LTE",
            "applications": [
                {"id": "a", "class": "voice", "category": "health", "users": 1},
                {"id": "a", "class": "VS", "category": "health", "users": 1}
            ]}]}"#,
    )
    .unwrap();
    let out = qoseval(&[&"validate", &path]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("rans[0].applications[1].id"), "{err}");

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(qoseval(&[&"validate", &path]).status.code(), Some(1));
}

#[test]
fn missing_files_exit_with_two() {
    let out = qoseval(&[&"validate", &fixture("absent.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = qoseval(&[
        &"evaluate",
        &fixture("voice_vs.json"),
        &fixture("absent.csv"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_measurement_row_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    std::fs::write(
        &path,
        "ran_id,app_id,parameter,value,unit\nrural-urban,vs1,delay,300,percent\n",
    )
    .unwrap();
    let out = qoseval(&[&"evaluate", &fixture("vs_clients.json"), &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("row 2"), "{}", stderr(&out));
}

#[test]
fn text_report_shows_every_layer() {
    let out = qoseval(&[
        &"evaluate",
        &fixture("voice_vs.json"),
        &fixture("voice_vs.csv"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("QoSCM 0.810 good"), "{text}");
    assert!(text.contains("QoSRM 0.810 good"), "{text}");
    let voice = text
        .lines()
        .find(|l| l.trim_start().starts_with("voice"))
        .unwrap();
    assert!(
        voice.contains("0.620") && voice.contains("average"),
        "{voice}"
    );
    let vs = text
        .lines()
        .find(|l| l.trim_start().starts_with("vs "))
        .unwrap();
    assert!(vs.contains("1.000") && vs.contains("good"), "{vs}");
}

#[test]
fn json_report_round_trips() {
    let out = qoseval(&[
        &"evaluate",
        &fixture("vs_clients.json"),
        &fixture("vs_clients.csv"),
        &"--format",
        &"json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let report = EvaluationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text.trim_end());
    assert_eq!(report.rans.len(), 4);
    assert!(report.consistency_errors(1e-9).is_empty());
}

#[test]
fn whatif_reports_deltas_and_no_change() {
    let cfg = fixture("voice_vs.json");
    let csv = fixture("voice_vs.csv");
    let out = qoseval(&[&"whatif", &cfg, &csv, &"--set", &"voice", &"extreme", &"vs"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.810 good -> 0.620 average"), "{text}");
    assert!(text.contains("delta -0.190"), "{text}");
    assert!(stderr(&out).contains("weight 0"));

    let out = qoseval(&[&"whatif", &cfg, &csv, &"--set", &"voice", &"k1", &"vs"]);
    assert!(stdout(&out).contains("no change"));

    let out = qoseval(&[&"whatif", &cfg, &csv, &"--set", &"voice", &"k10", &"vs"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qoseval(&[
        &"whatif", &cfg, &csv, &"--set", &"voice", &"strong", &"nobody",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn weights_prints_matrices_and_vectors() {
    let out = qoseval(&[&"weights", &fixture("two_networks.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("comparison matrix"));
    assert!(text.contains("RAN N1") && text.contains("RAN N2"));
    // disjoint extents in the first network leave A2 with nothing
    assert!(stderr(&out).contains("N1/A2: application received weight 0"));

    let out = qoseval(&[
        &"weights",
        &fixture("two_networks.json"),
        &"--format",
        &"json",
    ]);
    assert!(stdout(&out).trim_start().starts_with('['));
}
