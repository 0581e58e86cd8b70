//! Behavior of the installed binary: exit codes, schema validation,
//! report round-trips, CSV emission, and cross-process reproducibility.

use std::path::Path;
use std::process::Command;

use aperture_cli::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aperture-lab"))
}

fn run_to_file(args: &[&str], out: &Path) -> std::process::Output {
    let mut cmd = bin();
    cmd.args(args).arg("--out").arg(out);
    cmd.output().expect("binary runs")
}

#[test]
fn search_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let out = run_to_file(&["search", "--seed", "7"], &path);
    assert!(out.status.success());

    let text = std::fs::read_to_string(&path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.command, "search");
    assert_eq!(report.seed, 7);
    assert_eq!(report.schema_version, 1);
    // Reload and re-serialize: identical value and identical bytes.
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(text, again);
}

#[test]
fn identical_config_and_seed_give_identical_payloads_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    for command in ["search", "boundary", "record", "bell", "trace"] {
        let a_path = dir.path().join(format!("{command}_a.json"));
        let b_path = dir.path().join(format!("{command}_b.json"));
        assert!(run_to_file(&[command, "--seed", "99"], &a_path)
            .status
            .success());
        assert!(run_to_file(&[command, "--seed", "99"], &b_path)
            .status
            .success());
        let a: RunReport =
            serde_json::from_str(&std::fs::read_to_string(&a_path).unwrap()).unwrap();
        let b: RunReport =
            serde_json::from_str(&std::fs::read_to_string(&b_path).unwrap()).unwrap();
        assert_eq!(
            a.payload_bytes().unwrap(),
            b.payload_bytes().unwrap(),
            "payload mismatch for {command}"
        );
    }
}

#[test]
fn malformed_config_fails_with_field_in_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"max_disc": 144, "max_summandz": 12}"#).unwrap();
    let out = bin()
        .args(["search", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("max_summandz"),
        "error should name the offending field: {stderr}"
    );
}

#[test]
fn check_mode_sets_exit_code() {
    // Passing checks exit 0.
    let out = bin().args(["search", "--check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    // A search space with no solutions fails the check assertions
    // without being an operational error: exit code 2.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.json");
    std::fs::write(&cfg, r#"{"max_disc": 10}"#).unwrap();
    let out = bin()
        .args(["search", "--check", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[FAIL]"));
}

#[test]
fn small_search_space_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.json");
    std::fs::write(&cfg, r#"{"max_disc": 10}"#).unwrap();
    let path = dir.path().join("small_out.json");
    let out = bin()
        .args(["search", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let solutions = report.payload["certificate"]["solutions"]
        .as_array()
        .unwrap();
    assert!(solutions.is_empty());
}

#[test]
fn csv_format_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solutions.csv");
    let out = bin()
        .args(["search", "--format", "csv", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("factors,K,R,G,A,disc\n"));
    assert!(text.contains("144"));

    // Bell emits two tables with suffixed names.
    let base = dir.path().join("bell.csv");
    let out = bin()
        .args(["bell", "--format", "csv", "--out"])
        .arg(&base)
        .output()
        .unwrap();
    assert!(out.status.success());
    let corr = dir.path().join("bell_correlation.csv");
    let scan = dir.path().join("bell_chsh_scan.csv");
    assert!(corr.exists() && scan.exists());
    let corr_text = std::fs::read_to_string(&corr).unwrap();
    assert!(corr_text.starts_with("theta,correlation_born,correlation_closed_form\n"));
}

#[test]
fn record_witness_appears_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("record.json");
    let out = run_to_file(&["record", "--seed", "61"], &path);
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let witness = &report.payload["witness"];
    assert!(witness.is_object(), "witness should be present");
    assert!(witness["gap"].as_f64().unwrap() > 1e-3);
    let markov = &report.payload["markov"];
    assert_eq!(markov["markovian"].as_bool(), Some(false));
}

#[test]
fn boundary_counterexample_for_in_sector_projection() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("boundary.json");
    std::fs::write(
        &cfg,
        r#"{"record_projection": {"kind": "rank_one_in_sector", "sector": 1}}"#,
    )
    .unwrap();
    let path = dir.path().join("boundary.json.out");
    let out = bin()
        .args(["boundary", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cf = &report.payload["context_free"];
    assert_eq!(cf["verdict"].as_str(), Some("counterexample"));
    assert!(cf["found_at_trial"].as_u64().unwrap() < 10);

    // Central projections (P1 + P3) stay invariant.
    let cfg2 = dir.path().join("boundary2.json");
    std::fs::write(
        &cfg2,
        r#"{"record_projection": {"kind": "sectors", "sectors": [0, 2]}}"#,
    )
    .unwrap();
    let path2 = dir.path().join("boundary2.json.out");
    let out = bin()
        .args(["boundary", "--config"])
        .arg(&cfg2)
        .arg("--out")
        .arg(&path2)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport =
        serde_json::from_str(&std::fs::read_to_string(&path2).unwrap()).unwrap();
    assert_eq!(
        report.payload["context_free"]["verdict"].as_str(),
        Some("invariant")
    );
}

#[test]
fn thread_cap_env_is_accepted() {
    let out = bin()
        .env("APERTURE_LAB_THREADS", "2")
        .args(["bell", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());

    let bad = bin()
        .env("APERTURE_LAB_THREADS", "zero")
        .args(["bell"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sampled_mode_reports_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sample.json");
    std::fs::write(
        &cfg,
        r#"{"mode": "sample", "samples": 5000, "unitary": {"kind": "identity"}, "initial_state": {"kind": "pure_basis", "index": 1}}"#,
    )
    .unwrap();
    let path = dir.path().join("sample_out.json");
    let out = bin()
        .args(["record", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // Identity dynamics from e2: every history is "2,2,2".
    let empirical = report.payload["empirical"].as_object().unwrap();
    assert_eq!(empirical.len(), 1);
    assert_eq!(empirical["2,2,2"].as_f64(), Some(1.0));
}

#[test]
fn identity_dynamics_reports_markovian() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("identity.json");
    std::fs::write(&cfg, r#"{"unitary": {"kind": "identity"}}"#).unwrap();
    let path = dir.path().join("identity_out.json");
    let out = bin()
        .args(["record", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.payload["markov"]["markovian"].as_bool(), Some(true));
    assert!(report.payload["witness"].is_null());
    // Every sector exit is scalar under the identity.
    let exits = report.payload["scalar_exits"].as_object().unwrap();
    assert!(exits.values().all(|v| v.as_bool() == Some(true)));
}

#[test]
fn matrix_exchange_input_drives_a_run() {
    // A 6x6 permutation supplied through the wire format: swaps the
    // sector-2 block with the first two basis vectors of sector 3.
    let mut entries = vec![[0.0, 0.0]; 36];
    for (row, col) in [(0usize, 0usize), (3, 1), (4, 2), (1, 3), (2, 4), (5, 5)] {
        entries[row * 6 + col] = [1.0, 0.0];
    }
    let cfg_json = serde_json::json!({
        "unitary": {"kind": "matrix", "matrix": {"dim": 6, "entries": entries}},
        "initial_state": {"kind": "pure_basis", "index": 1},
        "steps": 2,
        "witness_depth": 2
    });
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("matrix.json");
    std::fs::write(&cfg, serde_json::to_string(&cfg_json).unwrap()).unwrap();
    let path = dir.path().join("matrix_out.json");
    let out = bin()
        .args(["record", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: RunReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // e2 -> e4 (sector 3), then back to sector 2: history "3,2".
    let dist = report.payload["distribution"].as_object().unwrap();
    assert_eq!(dist["3,2"].as_f64(), Some(1.0));
}

#[test]
fn trace_lists_all_rows_verified() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    let out = run_to_file(&["trace"], &path);
    assert!(out.status.success());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = report.payload["rows"].as_array().unwrap();
    assert!(rows.len() >= 25, "expected a substantial claims table");
    for row in rows {
        assert_eq!(
            row["status"].as_str(),
            Some("verified"),
            "row {} not verified",
            row["id"]
        );
    }
}
