//! End-to-end checks of the `ziptail` binary: round trips through the
//! subcommands and the exit-code contract (0 success, 2 configuration
//! errors, 3 runtime errors).

use std::path::Path;
use std::process::{Command, Output};

fn ziptail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ziptail"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("binary should not be killed by a signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

#[test]
fn simulate_then_estimate_recovers_the_index() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("law.json");
    let values = dir.path().join("values.txt");
    write(
        &spec,
        r#"{"kind": "heavy_tail", "beta": 0.7, "svf": {"kind": "constant", "c": 1.0}}"#,
    );

    let sim = ziptail(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--n",
        "20000",
        "--seed",
        "7",
        "--out",
        values.to_str().unwrap(),
    ]);
    assert_eq!(code(&sim), 0, "simulate failed: {}", String::from_utf8_lossy(&sim.stderr));
    let lines = std::fs::read_to_string(&values).unwrap().lines().count();
    assert_eq!(lines, 20000);

    let est = ziptail(&["estimate", "--input", values.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&est), 0);
    let body = stdout(&est);
    let mut rows = body.lines();
    let header: Vec<&str> = rows.next().unwrap().split(',').collect();
    let fields: Vec<&str> = rows.next().unwrap().split(',').collect();
    let col = |name: &str| fields[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("k"), "2");
    let beta: f64 = col("beta_hat").parse().unwrap();
    assert!(
        (beta - 0.7).abs() < 0.3,
        "estimate {beta} strayed too far from the simulated index 0.7"
    );
    assert_eq!(col("degenerate"), "false");
}

#[test]
fn estimate_scan_emits_bound_columns() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("values.txt");
    let sample: String = (1..=4000).map(|i| format!("{}\n", i % 600 + 1)).collect();
    write(&values, &sample);

    let out = ziptail(&[
        "estimate",
        "--input",
        values.to_str().unwrap(),
        "--k-range",
        "0",
        "4",
        "--bound-delta",
        "0.05",
    ]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    let mut lines = body.lines();
    let header = lines.next().unwrap();
    assert!(header.contains("bound") && header.contains("bound_applicable"));
    assert_eq!(lines.count(), 5, "one row per level in 0..=4");
}

#[test]
fn estimate_flag_conflicts_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("values.txt");
    write(&values, "1\n2\n3\n");

    let both = ziptail(&[
        "estimate", "--input", values.to_str().unwrap(), "--k", "3", "--k-range", "1", "4",
    ]);
    assert_eq!(code(&both), 2, "--k and --k-range are mutually exclusive");

    let neither = ziptail(&["estimate", "--input", values.to_str().unwrap()]);
    assert_eq!(code(&neither), 2, "one of --k / --k-range is required");

    let bad_ci = ziptail(&[
        "estimate", "--input", values.to_str().unwrap(), "--k", "2", "--ci", "1.5",
    ]);
    assert_eq!(code(&bad_ci), 2, "confidence level outside (0,1)");

    let window = ziptail(&[
        "estimate", "--input", values.to_str().unwrap(), "--k", "1", "--avg-m", "3",
    ]);
    assert_eq!(code(&window), 2, "window wider than the level");
}

#[test]
fn estimate_runtime_failures_exit_3() {
    let missing = ziptail(&["estimate", "--input", "/nonexistent/values.txt", "--k", "2"]);
    assert_eq!(code(&missing), 3);

    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("values.txt");
    write(&values, "1\n1\n2\n");
    let no_mass = ziptail(&[
        "estimate", "--input", values.to_str().unwrap(), "--k", "30", "--ci", "0.95",
    ]);
    assert_eq!(code(&no_mass), 3, "interval is undefined without tail mass");

    let garbled = dir.path().join("garbled.txt");
    write(&garbled, "1\ntwo\n3\n");
    let parse = ziptail(&["estimate", "--input", garbled.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code(&parse), 3);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));
}

#[test]
fn simulate_chain_writes_initial_state_plus_n_steps() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("chain.json");
    let states = dir.path().join("states.txt");
    write(&spec, r#"{"kind": "ssrw"}"#);

    let out = ziptail(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "3",
        "--out",
        states.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&states).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 51, "initial state plus one line per step");
    assert_eq!(lines[0], "0");
}

#[test]
fn simulate_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    let out_path = dir.path().join("out.txt");

    write(&spec, "{not json");
    let malformed = ziptail(&[
        "simulate", "--spec", spec.to_str().unwrap(), "--n", "10", "--seed", "1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&malformed), 2);

    write(&spec, r#"{"kind": "zeta", "s": 0.5}"#);
    let invalid = ziptail(&[
        "simulate", "--spec", spec.to_str().unwrap(), "--n", "10", "--seed", "1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&invalid), 2, "zeta exponent must exceed 1");

    let missing = ziptail(&[
        "simulate", "--spec", "/nonexistent/spec.json", "--n", "10", "--seed", "1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&missing), 3);
}

#[test]
fn mc_runs_a_scenario_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let out_dir = dir.path().join("artifacts");
    write(
        &config,
        r#"{
            "scenario": "iid_scan",
            "replicates": 3,
            "n": 5000,
            "seed": 21,
            "distribution": {"kind": "zeta", "s": 1.5}
        }"#,
    );

    let out = ziptail(&[
        "mc", "--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "mc failed: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("artifacts in"));
    assert!(out_dir.join("manifest.json").exists());
    assert!(out_dir.join("scan.csv").exists());
}

#[test]
fn mc_configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let out_dir = dir.path().join("artifacts");

    write(&config, "{broken");
    let malformed = ziptail(&[
        "mc", "--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&malformed), 2);

    write(
        &config,
        r#"{"scenario": "iid_scan", "replicates": 0, "n": 5000, "seed": 1,
           "distribution": {"kind": "zeta", "s": 1.5}}"#,
    );
    let zero_reps = ziptail(&[
        "mc", "--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&zero_reps), 2);

    let missing = ziptail(&[
        "mc", "--config", "/nonexistent/config.json", "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&missing), 3, "an unreadable config file is a runtime failure");
}

#[test]
fn usage_and_help_exit_codes() {
    assert_eq!(code(&ziptail(&["--help"])), 0);
    assert_eq!(code(&ziptail(&["estimate", "--help"])), 0);
    assert_eq!(code(&ziptail(&["no-such-command"])), 2);
    assert_eq!(code(&ziptail(&[])), 2);
}
