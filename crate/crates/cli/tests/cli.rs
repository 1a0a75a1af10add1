use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adiabatic-kms"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eulerian_rows_and_cap() {
    let o = run(&["eulerian", "--n-max", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("MATCH").count(), 4);
    assert!(text.contains("1 11 11 1"));

    let o = run(&["eulerian", "--n-max", "1"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);

    let o = run(&["eulerian", "--n-max", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("cap exceeded"));
    assert_eq!(
        code(&run(&["eulerian", "--n-max", "12", "--recursive-only"])),
        0
    );
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        r#"{"schema_version": 1, "tolerances": {"ccr": -1e-10}}"#,
        r#"{"schema_version": 1, "ladders": {"mu": [40, 20]}}"#,
        "not json",
    ] {
        let cfg = write_config(dir.path(), body);
        for cmd in ["limits", "verify-all"] {
            let o = run(&["--config", &cfg, cmd]);
            assert_eq!(code(&o), 2, "{body} {cmd}");
        }
    }
    assert_eq!(code(&run(&["--config", "/nonexistent.json", "series"])), 2);
}

#[test]
fn limits_without_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "params": {"beta": 1, "m_sq": 1, "m0_sq": 1, "lambda": 0}}"#,
    );
    let out = dir.path().join("out");
    let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "limits"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_path(out.join("limits.csv")).unwrap();
    let gap = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "gap")
        .unwrap();
    for rec in rdr.records() {
        let g: f64 = rec.unwrap()[gap].parse().unwrap();
        assert!(g <= 1e-9, "{g}");
    }
}

#[test]
fn limits_gaps_decrease_along_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&run(&["--out", out.to_str().unwrap(), "limits"])), 0);
    let mut rdr = csv::Reader::from_path(out.join("limits.csv")).unwrap();
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[7].parse().unwrap())
        })
        .collect();
    for pair in rows.windows(2).filter(|w| w[0].0 == w[1].0) {
        assert!(pair[1].1 < pair[0].1, "{pair:?}");
    }
}

#[test]
fn series_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&run(&["--out", out.to_str().unwrap(), "series"])), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("series.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["rows"].as_array().unwrap().len(), 9);

    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "params": {"beta": 1, "m_sq": 1, "m0_sq": 1, "lambda": 0}, "ladders": {"orders": [0]}}"#,
    );
    let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "series"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("series.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["rows"][0]["gap_to_closed_form"], 0.0);

    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "params": {"beta": 1, "m_sq": 1, "m0_sq": 1, "lambda": 4}}"#,
    );
    let o = run(&["--config", &cfg, "series"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("not_expected_to_converge"));
}

#[test]
fn ness_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(
        code(&run(&["--out", out.to_str().unwrap(), "ness", "--sudden"])),
        0
    );
    let mut rdr = csv::Reader::from_path(out.join("ness.csv")).unwrap();
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|x| x == name).unwrap();
    let (ccr, sudden) = (col("ccr_residual"), col("sudden_gap"));
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert!(rec[ccr].parse::<f64>().unwrap() <= 1e-10);
        assert!(rec[sudden].parse::<f64>().unwrap() <= 1e-3);
    }
    let states = std::fs::read_to_string(out.join("states.csv")).unwrap();
    for label in [
        "free_kms",
        "adiabatic_classical",
        "adiabatic",
        "ness_classical",
    ] {
        assert!(states.contains(label));
    }

    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "params": {"beta": 1, "m_sq": 1, "m0_sq": 1, "lambda": 0}}"#,
    );
    let out0 = dir.path().join("free");
    assert_eq!(
        code(&run(&[
            "--config",
            &cfg,
            "--out",
            out0.to_str().unwrap(),
            "ness"
        ])),
        0
    );
    let mut rdr = csv::Reader::from_path(out0.join("ness.csv")).unwrap();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let a_plus: f64 = rec[1].parse().unwrap();
        let a_minus: f64 = rec[3]
            .parse::<f64>()
            .unwrap()
            .hypot(rec[4].parse().unwrap());
        assert!((a_plus.hypot(rec[2].parse().unwrap()) - 1.0).abs() <= 1e-10);
        assert!(a_minus <= 1e-10);
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        for cmd in ["series", "ness", "limits"] {
            assert_eq!(
                code(&run(&[
                    "--threads",
                    "2",
                    "--out",
                    out.to_str().unwrap(),
                    cmd
                ])),
                0
            );
        }
        files.push(out);
    }
    let mut names: Vec<_> = std::fs::read_dir(&files[0])
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != "metadata.json")
        .collect();
    names.sort();
    assert!(names.len() >= 7);
    for n in names {
        let a = std::fs::read(files[0].join(&n)).unwrap();
        let b = std::fs::read(files[1].join(&n)).unwrap();
        assert_eq!(a, b, "{n:?}");
    }
}

#[test]
fn verify_all_default_and_radius_skip() {
    let o = run(&["verify-all"]);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(code(&o), 0, "{text}");
    assert_eq!(text.matches("[PASS]").count(), 10);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "params": {"beta": 1, "m_sq": 1, "m0_sq": 1, "lambda": 4}}"#,
    );
    let o = run(&["--config", &cfg, "verify-all"]);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(code(&o), 0, "{text}");
    assert!(text.contains("[SKIPPED]  7"));
}
