//! End-to-end checks of the `ergolab` binary: output shapes, schema
//! conformance, config merging, output-directory resolution, determinism,
//! and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ergolab"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(tag);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../../../schema/report.schema.json")).unwrap()
}

#[test]
fn list_systems_prints_the_registry_table() {
    let out = bin().arg("list-systems").output().unwrap();
    let text = stdout_of(&out);
    assert!(text.contains("rotation"));
    assert!(text.contains("bernoulli-shift:Z"));
    assert!(text.contains("lamplighter"));
    let rows = text.lines().count() - 1;
    assert!(rows >= 7, "only {rows} rows");
}

#[test]
fn list_systems_json_validates() {
    let out = bin().args(["list-systems", "--json"]).output().unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    ergolab_cli::schema::validate(&schema(), &doc).unwrap();
    assert_eq!(doc["tool"], "ergolab");
    assert!(doc["payload"].as_array().unwrap().len() >= 7);
}

#[test]
fn profile_emits_a_schema_valid_bounded_report_for_rotation() {
    let out = bin()
        .args([
            "profile",
            "--system",
            "rotation",
            "--seed",
            "42",
            "--sample-size",
            "1200",
        ])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    ergolab_cli::schema::validate(&schema(), &doc).unwrap();
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["payload"]["verdict"], "Bounded");
    assert!(doc["command"]
        .as_str()
        .unwrap()
        .starts_with("profile --system rotation:alpha="));
}

#[test]
fn same_seed_gives_byte_identical_reports() {
    let run = || {
        bin()
            .args([
                "profile",
                "--system",
                "odometer",
                "--seed",
                "9",
                "--sample-size",
                "1200",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn csv_format_emits_plot_ready_rows() {
    let out = bin()
        .args([
            "profile",
            "--system",
            "rotation",
            "--seed",
            "42",
            "--sample-size",
            "1200",
            "--n-list",
            "4,8",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,window_index,window_size,support_size,thinned,upper_count,lower_count,covered_fraction,saturated"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn flags_override_config_file_values() {
    let dir = tmpdir("config-merge");
    let cfg = dir.join("run.json");
    fs::write(
        &cfg,
        r#"{"system": "rotation", "epsilon": 0.2, "seed": 7, "sample_size": 1200, "n_list": [4, 8]}"#,
    )
    .unwrap();

    let from_file = bin()
        .args(["profile", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&from_file)).unwrap();
    assert_eq!(doc["payload"]["epsilon"], 0.2);
    assert_eq!(doc["seed"], 7);

    let overridden = bin()
        .args([
            "profile",
            "--config",
            cfg.to_str().unwrap(),
            "--epsilon",
            "0.1",
            "--seed",
            "8",
        ])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&overridden)).unwrap();
    assert_eq!(doc["payload"]["epsilon"], 0.1);
    assert_eq!(doc["seed"], 8);
}

#[test]
fn relative_out_paths_resolve_against_the_out_dir_env_var() {
    let dir = tmpdir("out-dir");
    let out = bin()
        .args([
            "tempered",
            "--group",
            "Z",
            "--n-max",
            "10",
            "--out",
            "shulman.json",
        ])
        .env("ERGOLAB_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "report should go to the file");
    let written = fs::read_to_string(dir.join("shulman.json")).unwrap();
    let doc: Value = serde_json::from_str(&written).unwrap();
    ergolab_cli::schema::validate(&schema(), &doc).unwrap();
    assert_eq!(doc["payload"]["constant"], 1.8);
}

#[test]
fn tempered_matches_the_interval_prefix_ratios() {
    let out = bin()
        .args(["tempered", "--group", "Z", "--n-max", "2"])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["payload"]["constant"], 1.0);
}

#[test]
fn equicont_records_mode_and_failure_on_the_full_shift() {
    let out = bin()
        .args([
            "equicont",
            "--system",
            "bernoulli-shift:Z",
            "--epsilon",
            "0.1",
            "--seed",
            "5",
            "--sample-size",
            "300",
        ])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    ergolab_cli::schema::validate(&schema(), &doc).unwrap();
    assert_eq!(doc["payload"]["mode"], "MeanEquicontinuity");
    assert_eq!(doc["payload"]["verdict"], "NotEquicontinuous");
    let rows = doc["payload"]["rows"].as_array().unwrap();
    assert!(
        rows.iter()
            .any(|r| !r["starved"].as_bool().unwrap()
                && r["failing_fraction"].as_f64().unwrap() > 0.5)
    );
}

#[test]
fn cross_validate_is_consistent_on_rotation_and_exits_zero() {
    let out = bin()
        .args(["cross-validate", "--system", "rotation", "--seed", "3"])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    ergolab_cli::schema::validate(&schema(), &doc).unwrap();
    assert_eq!(doc["payload"]["outcome"], "Consistent");
}

#[test]
fn cross_validate_exits_one_on_a_mislabeled_fixture() {
    let out = bin()
        .args([
            "cross-validate",
            "--system",
            "rotation:label=not-discrete",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["payload"]["outcome"], "Inconsistent");
}

#[test]
fn unknown_system_and_unknown_family_exit_two() {
    let out = bin()
        .args(["profile", "--system", "no-such-thing", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-thing"));

    let out = bin()
        .args(["tempered", "--group", "Z", "--family", "hexagons"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let out = bin()
        .args(["profile", "--system", "rotation"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn epsilon_sweeps_write_one_tagged_file_each() {
    let dir = tmpdir("sweep");
    let out_path = dir.join("p.json");
    let out = bin()
        .args([
            "profile",
            "--system",
            "rotation",
            "--seed",
            "4",
            "--sample-size",
            "1200",
            "--n-list",
            "4,8",
            "--epsilon",
            "0.1",
            "--epsilon",
            "0.2",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("p-e0.json")).unwrap()).unwrap();
    let b: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("p-e1.json")).unwrap()).unwrap();
    assert_eq!(a["payload"]["epsilon"], 0.1);
    assert_eq!(b["payload"]["epsilon"], 0.2);
}
