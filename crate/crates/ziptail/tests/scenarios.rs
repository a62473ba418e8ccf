//! Scenario-harness guarantees that cut across individual runners:
//! reproducibility independent of worker threads, failure accounting,
//! and artifact shapes.

use std::path::Path;

use ziptail::scenario::{run_scenario, ScenarioConfig};
use ziptail::AppError;

fn config(value: serde_json::Value) -> ScenarioConfig {
    serde_json::from_value(value).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn csv_bodies_do_not_depend_on_the_thread_count() {
    let config = config(serde_json::json!({
        "scenario": "markov_kde", "replicates": 12, "n": 20_000, "seed": 42,
        "chains": [
            {"label": "ssrw", "kind": "ssrw"},
            {"label": "bessel", "kind": "bessel", "delta": 0.2}
        ]
    }));

    let run_with = |threads: usize| {
        let dir = tempfile::tempdir().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let manifest = pool.install(|| run_scenario(&config, dir.path())).unwrap();
        let mut outputs = manifest.outputs.clone();
        outputs.sort();
        let bodies: Vec<(String, String)> =
            outputs.iter().map(|name| (name.clone(), read(dir.path(), name))).collect();
        (manifest.replicate_seeds, bodies)
    };

    let (seeds_serial, serial) = run_with(1);
    let (seeds_pooled, pooled) = run_with(4);
    assert_eq!(seeds_serial, seeds_pooled);
    assert_eq!(serial.len(), pooled.len());
    for ((name_a, body_a), (name_b, body_b)) in serial.iter().zip(&pooled) {
        assert_eq!(name_a, name_b);
        assert_eq!(body_a, body_b, "artifact {name_a} differs between thread counts");
    }
}

#[test]
fn widespread_replicate_failures_abort_the_run() {
    // Two transitions can never produce the two regenerations the block
    // estimator needs, so every replicate fails and the run must abort
    // with a runtime error instead of writing a manifest.
    let config = config(serde_json::json!({
        "scenario": "markov_kde", "replicates": 5, "n": 2, "seed": 9,
        "chains": [{"label": "ssrw", "kind": "ssrw"}]
    }));
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&config, dir.path()).unwrap_err();
    assert!(matches!(err, AppError::Runtime(_)), "abort is a runtime failure: {err}");
    assert_eq!(err.exit_code(), 3);
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn sporadic_replicate_failures_are_logged_and_skipped() {
    // At this length one of the ten walks never returns to the origin;
    // the run still completes and the manifest names the lost replicate.
    let config = config(serde_json::json!({
        "scenario": "loglog_occupation", "replicates": 10, "n": 20_000, "seed": 111,
        "chain": {"kind": "ssrw"}
    }));
    let dir = tempfile::tempdir().unwrap();
    let manifest = run_scenario(&config, dir.path()).unwrap();
    assert_eq!(manifest.failed_replicates.len(), 1);
    assert!(manifest.failed_replicates[0].contains("replicate 5"));
    let index_rows = read(dir.path(), "occupation_index.csv").lines().count();
    assert_eq!(index_rows, 1 + 9, "header plus one row per surviving replicate");
}

#[test]
fn split_chain_artifacts_have_the_documented_shapes() {
    let config = config(serde_json::json!({
        "scenario": "split_chain", "replicates": 2, "n": 50_000, "seed": 5,
        "sigma": 1.0
    }));
    let dir = tempfile::tempdir().unwrap();
    let manifest = run_scenario(&config, dir.path()).unwrap();
    assert!(manifest.failed_replicates.is_empty());

    let scan_rows = read(dir.path(), "epsilon_scan.csv").lines().count();
    assert_eq!(scan_rows, 1 + 2 * 20, "both replicates scan the twenty default widths");

    let estimates = read(dir.path(), "estimates.csv");
    assert_eq!(estimates.lines().count(), 1 + 2);
    for line in estimates.lines().skip(1) {
        let epsilon: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((0.05..=1.0).contains(&epsilon), "selected width {epsilon} off the grid");
    }

    // The witness path's block table belongs to the first replicate only.
    let blocks = read(dir.path(), "blocks.csv");
    assert!(blocks.lines().count() > 1, "witness blocks present");
    assert!(manifest.outputs.contains(&"blocks.csv".to_string()));
}

#[test]
fn manifest_echo_reproduces_the_run() {
    let config_value = serde_json::json!({
        "scenario": "averaged_estimator", "replicates": 4, "n": 5_000, "seed": 77,
        "distribution": {"kind": "heavy_tail", "beta": 0.6, "svf": {"kind": "constant", "c": 1.0}},
        "m_values": [0, 1, 2]
    });

    let first_dir = tempfile::tempdir().unwrap();
    let manifest = run_scenario(&config(config_value), first_dir.path()).unwrap();

    // Re-running from the manifest's own echo must reproduce every byte.
    let echoed: ScenarioConfig = serde_json::from_value(manifest.config.clone()).unwrap();
    let second_dir = tempfile::tempdir().unwrap();
    let again = run_scenario(&echoed, second_dir.path()).unwrap();

    assert_eq!(manifest.replicate_seeds, again.replicate_seeds);
    for name in &manifest.outputs {
        assert_eq!(
            read(first_dir.path(), name),
            read(second_dir.path(), name),
            "artifact {name} changed across a manifest round trip"
        );
    }
}
