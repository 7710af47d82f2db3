use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use confball::{stream_rng, ConfidenceBall, DensityOracle};
use tempfile::TempDir;

fn confball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confball"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_uniform_sample(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let sample = DensityOracle::uniform().sample(n, &mut stream_rng(seed, 0)).unwrap();
    let text: String = sample.points().iter().map(|x| format!("{x}\n")).collect();
    let path = dir.join("sample.txt");
    std::fs::write(&path, text).unwrap();
    path
}

/// Every row has as many fields as the header, and no header field is empty.
fn assert_rectangular(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    assert!(header.iter().all(|h| !h.is_empty()));
    lines
        .map(|l| {
            let fields: Vec<String> = l.split(',').map(str::to_string).collect();
            assert_eq!(fields.len(), header.len(), "row `{l}`");
            fields
        })
        .collect()
}

#[test]
fn ball_document_round_trips() {
    let dir = TempDir::new().unwrap();
    let input = write_uniform_sample(dir.path(), 100, 1);
    let out = confball(&["ball", "--input", input.to_str().unwrap(), "--format", "doc"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let ball: ConfidenceBall = serde_json::from_str(&text).unwrap();
    assert_eq!(ball.selected_dim, 1);
    assert_eq!(ball.report.records.len(), 4);
    let again = serde_json::to_string_pretty(&ball).unwrap() + "\n";
    assert_eq!(again, text);
    let sel = &ball.report.records[0];
    assert_eq!(ball.radius, (sel.v + sel.k).sqrt());

    let table = confball(&["ball", "--input", input.to_str().unwrap()]);
    let rows = assert_rectangular(&stdout(&table));
    for (row, record) in rows.iter().zip(&ball.report.records) {
        assert_eq!(row[0], record.model_id);
        assert_eq!(row[8].parse::<f64>().unwrap(), record.rho_hat);
    }
}

#[test]
fn ball_rejects_bad_input_with_line_number() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "0.5\n\n0.25\n1.5\n").unwrap();
    let out = confball(&["ball", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":4:"));
    let out = confball(&["ball"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_model_ball_has_one_row() {
    let dir = TempDir::new().unwrap();
    let input = write_uniform_sample(dir.path(), 30, 2);
    let out = confball(&["ball", "--input", input.to_str().unwrap(), "--dims", "4"]);
    assert!(out.status.success());
    assert_eq!(assert_rectangular(&stdout(&out)).len(), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let input = write_uniform_sample(dir.path(), 60, 3);
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        format!(
            "beta = 0.2\nkappaScale = 0.001\ninput = {:?}\n[collection]\nfamily = \"fourier\"\ndims = [1, 3, 5]\n",
            input.to_str().unwrap()
        ),
    )
    .unwrap();
    let doc = |extra: &[&str]| -> ConfidenceBall {
        let mut args = vec!["ball", "--config", config.to_str().unwrap(), "--format", "doc"];
        args.extend_from_slice(extra);
        let out = confball(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_str(&stdout(&out)).unwrap()
    };
    let from_file = doc(&[]);
    assert_eq!(from_file.beta, 0.2);
    assert_eq!(from_file.top_model_id, "fourier-2");
    let overridden = doc(&["--beta", "0.05", "--dims", "1,3"]);
    assert_eq!(overridden.beta, 0.05);
    assert_eq!(overridden.top_model_id, "fourier-1");

    std::fs::write(&config, "betta = 0.2\n").unwrap();
    assert_eq!(
        confball(&["ball", "--config", config.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn check_assumptions_exit_codes() {
    let ok = confball(&[
        "check-assumptions",
        "--family",
        "fourier",
        "--dims",
        "sobolev:1",
        "--n",
        "100",
    ]);
    assert!(ok.status.success());
    let rows = assert_rectangular(&stdout(&ok));
    assert!(rows.iter().all(|r| r[4] == "true"));

    // 2 sqrt(1024) ln(6 * 2 / 1e-3) / 100 = 6.0 > 4
    let args = ["check-assumptions", "--dims", "1,1024", "--n", "100", "--beta", "0.001"];
    let failing = confball(&args);
    assert_eq!(failing.status.code(), Some(1));
    let rows = assert_rectangular(&stdout(&failing));
    assert_eq!(rows.last().unwrap()[4], "false");
    let mut warn = args.to_vec();
    warn.push("--warn-only");
    assert_eq!(confball(&warn).status.code(), Some(0));

    let empty = confball(&["check-assumptions", "--dims", ""]);
    assert_eq!(empty.status.code(), Some(2));
}

#[test]
fn simulate_pw_table_shape() {
    let out = confball(&["simulate-pw", "--reps", "1", "--nb", "20"]);
    assert!(out.status.success());
    let rows = assert_rectangular(&stdout(&out));
    assert_eq!(rows.iter().filter(|r| r[0] == "data").count(), 1);
    let kinds: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(kinds, ["data", "mean", "sd", "min", "max"]);
}

#[test]
fn coverage_table_shape() {
    let out = confball(&["coverage", "--reps", "1", "--nb", "200", "--n", "40", "--dm", "8"]);
    assert!(out.status.success());
    let rows = assert_rectangular(&stdout(&out));
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0][0], "0.5");
    assert_eq!(rows[9][0], "0.95");
    assert!(rows.iter().all(|r| r[1] == "0" || r[1] == "1"));
    let bad = confball(&["coverage", "--alpha-grid", "0.5,1.2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("pw.csv");
    let out = confball(&[
        "simulate-pw",
        "--reps",
        "3",
        "--nb",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(assert_rectangular(&std::fs::read_to_string(path).unwrap()).len(), 7);
}
