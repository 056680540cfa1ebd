//! Black-box CLI tests: exit codes, thin-wrapper equivalence, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn linkpred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkpred"))
        .args(args)
        .output()
        .expect("spawn linkpred")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn write_fixture(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("fixture.csv");
    let rows = "\
t,layer,src,dst,weight
0,0,a,b,1
0,0,b,c,2
1,0,a,b,3
1,0,c,d,1
2,0,a,c,2
2,0,b,d,1
3,0,a,b,1
0,1,a,b,5
1,1,b,c,1
2,1,a,d,2
3,1,c,d,1
";
    fs::write(&path, rows).unwrap();
    path
}

#[test]
fn ingest_valid_file_prints_layer_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = dir.path().join("canonical.csv");
    let output = linkpred(&["ingest", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("layer 0:"));
    assert!(stdout.contains("layer 1:"));
    assert!(stdout.contains("nodes: 4"));
    assert!(out.exists());
}

#[test]
fn ingest_bad_header_names_missing_column() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "time,layer,src,dst,weight\n0,0,a,b,1\n").unwrap();
    let out = dir.path().join("out.csv");
    let output = linkpred(&["ingest", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 2);
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("\"t\""), "stderr: {stderr}");
}

#[test]
fn missing_data_file_exits_two() {
    let output = linkpred(&["evaluate", "--data", "/nonexistent.csv", "--target", "0", "--variants", "rank-only", "--out", "/tmp/nowhere"]);
    assert_eq!(code(&output), 2);
}

#[test]
fn out_of_range_theta_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = dir.path().join("pred.csv");
    let output = linkpred(&[
        "predict",
        "--data", input.to_str().unwrap(),
        "--target", "0",
        "--t", "3",
        "--theta", "1.2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 3);
}

#[test]
fn unknown_variant_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let output = linkpred(&[
        "predict",
        "--data", input.to_str().unwrap(),
        "--target", "0",
        "--t", "3",
        "--variant", "wizardry",
        "--out", "/tmp/x.csv",
    ]);
    assert_eq!(code(&output), 3);
}

#[test]
fn usage_error_exits_three_and_help_zero() {
    let output = linkpred(&["predict", "--no-such-flag"]);
    assert_eq!(code(&output), 3);
    let output = linkpred(&["--help"]);
    assert_eq!(code(&output), 0);
}

#[test]
fn predict_matches_library_call() {
    use linkpred::pipeline::{predict, PredictorSpec, Variant};
    use linkpred::temporal::DecayParams;

    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = dir.path().join("pred.csv");
    let output = linkpred(&[
        "predict",
        "--data", input.to_str().unwrap(),
        "--target", "0",
        "--t", "3",
        "--variant", "rank-only",
        "--T", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let text = fs::read_to_string(&out).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();

    let file = fs::File::open(&input).unwrap();
    let (series, _) = linkpred::MultiplexSeries::ingest_csv(std::io::BufReader::new(file)).unwrap();
    let spec = PredictorSpec {
        variant: Variant::RankOnly,
        decay: DecayParams { theta: 0.4, window_len: 2 },
        ..PredictorSpec::default()
    };
    let prediction = predict(&series, 0, 3, &spec).unwrap();
    let mut expected = Vec::new();
    prediction.scores.write_csv(&mut expected, series.labels(), &[]).unwrap();
    assert_eq!(body.as_bytes(), &expected[..], "CLI body diverges from library output");
}

#[test]
fn fixed_seed_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let output = linkpred(&[
            "generate",
            "--n", "50",
            "--layers", "2",
            "--snapshots", "4",
            "--rho", "0.5",
            "--seed", "7",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&output), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn evaluate_oracle_variant_reports_perfect_auroc() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bench.csv");
    let output = linkpred(&[
        "generate",
        "--n", "60",
        "--layers", "2",
        "--snapshots", "6",
        "--rho", "0.4",
        "--seed", "3",
        "--out", data.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);
    let out_dir = dir.path().join("eval");
    let output = linkpred(&[
        "evaluate",
        "--data", data.to_str().unwrap(),
        "--target", "0",
        "--variants", "oracle,random",
        "--T", "2",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let report = fs::read_to_string(out_dir.join("report_oracle.json")).unwrap();
    assert!(report.contains("\"mean\": 1.0"), "report: {report}");
    assert!(out_dir.join("overlap.csv").exists());
    assert!(out_dir.join("interactions.csv").exists());
    assert!(out_dir.join("likelihoods.csv").exists());
    assert!(out_dir.join("summary.txt").exists());
    assert!(out_dir.join("ttests.csv").exists());
}

#[test]
fn ingest_export_reingest_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let once = dir.path().join("once.csv");
    let twice = dir.path().join("twice.csv");
    let output = linkpred(&["ingest", "--input", input.to_str().unwrap(), "--out", once.to_str().unwrap()]);
    assert_eq!(code(&output), 0);
    let output = linkpred(&["ingest", "--input", once.to_str().unwrap(), "--out", twice.to_str().unwrap()]);
    assert_eq!(code(&output), 0);
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());
}
