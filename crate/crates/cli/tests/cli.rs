use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/auto-mpg.data")
}

fn mpgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpgw"))
        .args(args)
        .env_remove(mpgw_cli::DATA_ENV)
        .output()
        .expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

fn csv_header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(String::from).collect()
}

#[test]
fn regress_writes_seven_rows_sorted_by_r2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mpgw(&[
        "regress",
        "--data",
        data_file().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = out.join("table3.csv");
    let header = csv_header(&path);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 7);
    let r2_col = header.iter().position(|h| h == "r2").unwrap();
    let r2: Vec<f64> = rows.iter().map(|r| r[r2_col].parse().unwrap()).collect();
    assert!(r2.windows(2).all(|w| w[0] >= w[1]), "{r2:?}");
    assert!(!out.join("regression.json").exists());
    assert!(out.join("figure4_true_vs_pred.csv").exists());
}

#[test]
fn eda_correlation_matches_known_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = mpgw(&[
        "eda",
        "--data",
        data_file().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = out.join("correlation.csv");
    let header = csv_header(&path);
    let col = header.iter().position(|h| h == "weight").unwrap();
    let row = csv_rows(&path).into_iter().find(|r| r[0] == "displacement").unwrap();
    let v: f64 = row[col].parse().unwrap();
    assert!((v - 0.933).abs() <= 0.005, "{v}");
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("eda.json")).unwrap()).unwrap();
    assert!(json["regression"].is_null());
    assert_eq!(json["provenance"]["data"]["n_rows"], 398);
    assert!(std::fs::read_to_string(out.join("eda.md"))
        .unwrap()
        .contains("Correlation matrix"));
}

#[test]
fn missing_data_file_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let missing = dir.path().join("nope.data");
    let o = mpgw(&[
        "report",
        "--data",
        missing.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn malformed_data_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.data");
    std::fs::write(&bad, "18.0   8   307.0   ?   3504.   12.0   70  1\t\"x\"\n").unwrap();
    let o = mpgw(&["validate-data", "--data", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let truncated = dir.path().join("short.data");
    let text = std::fs::read_to_string(data_file()).unwrap();
    std::fs::write(&truncated, text.lines().take(100).collect::<Vec<_>>().join("\n")).unwrap();
    let o = mpgw(&["validate-data", "--data", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_data_reports_reference_summary() {
    let o = mpgw(&["validate-data", "--data", data_file().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("398 rows"));
    assert!(stdout.contains("33, 127, 331, 337, 355, 375"));
    assert!(stdout.contains("matches the bundled reference file"));
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let data = data_file();
    let data = data.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    assert_eq!(
        mpgw(&["report", "--data", data, "--out", out_s, "--bogus"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mpgw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        mpgw(&["regress", "--data", data, "--out", out_s, "--split", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mpgw(&["regress", "--data", data, "--out", out_s, "--folds", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mpgw(&["regress", "--out", out_s]).status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(mpgw(&["--help"]).status.code(), Some(0));
    assert_eq!(mpgw(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        format!(
            "data_path = {:?}\nseed = 7\nformat = \"json\"\n",
            data_file().to_str().unwrap()
        ),
    )
    .unwrap();
    let out = dir.path().join("a");
    let o = mpgw(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("classification.json")).unwrap()).unwrap();
    // the flag wins over the file
    assert_eq!(json["provenance"]["config"]["seed"], 3);
    assert!(!out.join("table4.csv").exists());

    std::fs::write(dir.path().join("typo.toml"), "sead = 3\n").unwrap();
    let o = mpgw(&[
        "classify",
        "--config",
        dir.path().join("typo.toml").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = Command::new(env!("CARGO_BIN_EXE_mpgw"))
        .args(["validate-data"])
        .env(mpgw_cli::DATA_ENV, data_file())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_file();
    let mut outputs = Vec::new();
    for name in ["one", "two"] {
        let out = dir.path().join(name);
        let o = mpgw(&[
            "classify",
            "--data",
            data.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "5",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut files: Vec<_> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        outputs.push(files);
    }
    assert!(outputs[0].len() >= 6);
    assert_eq!(outputs[0], outputs[1]);
    // 2 classes x (5 models x 3 metrics + 5 precision + 5 recall)
    let bars = csv_rows(&dir.path().join("one/figures12_17_class_summary.csv"));
    assert_eq!(bars.len(), 50);
    assert_eq!(csv_rows(&dir.path().join("one/table4.csv")).len(), 10);
}
