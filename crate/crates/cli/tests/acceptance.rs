//! Acceptance: byte-level determinism of every CLI command. Two runs with
//! identical config and seed must produce byte-identical output files (and
//! identical stdout where the command prints results).

use std::path::Path;
use std::process::Command;

fn check(name: &str, pass: bool, details: &str) {
    println!(
        "acceptance {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {details}");
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_stochmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_identical_files(name: &str, a: &Path, b: &Path, files: &[&str]) {
    for file in files {
        let left =
            std::fs::read(a.join(file)).unwrap_or_else(|_| panic!("missing {file} in {a:?}"));
        let right =
            std::fs::read(b.join(file)).unwrap_or_else(|_| panic!("missing {file} in {b:?}"));
        check(
            name,
            left == right,
            &format!("{file}: {} bytes identical across reruns", left.len()),
        );
    }
}

#[test]
fn a12_simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        r#"{
  "regime": { "tag": "power_law", "n": -20 },
  "plan": { "seed": 99, "burn_in": 2000, "samples": 500, "stride": 4 },
  "population": { "size": 64, "scheme": { "kind": "uniform_random", "lo": 0.0, "hi": 0.33 } },
  "analytics": { "histogram_bins": 48, "binning": "log" },
  "output": { "samples_file": "samples.txt" }
}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for (out, threads) in [(&out_a, "2"), (&out_b, "1")] {
        let status = run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(status.status.success(), "{status:?}");
    }
    assert_identical_files(
        "a12 simulate-determinism",
        &out_a,
        &out_b,
        &["hist.csv", "summary.json", "samples.txt"],
    );
}

#[test]
fn a12_sweep_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        r#"{
  "regime": { "tag": "opinion" },
  "plan": { "seed": 31, "burn_in": 4000, "samples": 1, "replicas": 24 },
  "analytics": { "sweep": { "grid_start": 0.64, "grid_stop": 0.72, "grid_step": 0.02,
                             "lyapunov_draws": 1000000 } }
}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let status = run(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(status.status.success(), "{status:?}");
    }
    assert_identical_files(
        "a12 sweep-determinism",
        &out_a,
        &out_b,
        &["sweep.csv", "sweep.json"],
    );
}

#[test]
fn a12_fit_is_byte_deterministic() {
    use stochmap::rng::SplitMix64;
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    let mut rng = SplitMix64::new(5);
    let mut text = String::new();
    for _ in 0..20_000 {
        text.push_str(&format!("{}\n", (1.0 - rng.next_f64()).powf(-1.0)));
    }
    std::fs::write(&samples, text).unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        r#"{
  "regime": { "tag": "power_law", "n": 0, "lambda": 0.5 },
  "plan": { "seed": 1 },
  "analytics": { "fit_method": "hill", "xmin_quantile": 0.9 }
}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let mut stdouts = Vec::new();
    for out in [&out_a, &out_b] {
        let output = run(&[
            "fit",
            samples.to_str().unwrap(),
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{output:?}");
        stdouts.push(output.stdout);
    }
    assert_identical_files("a12 fit-determinism", &out_a, &out_b, &["fit.json"]);
    check(
        "a12 fit-determinism",
        stdouts[0] == stdouts[1],
        "stdout identical across reruns",
    );
}

#[test]
fn a12_oracle_is_byte_deterministic() {
    let a = run(&["oracle", "critical_lambda"]);
    let b = run(&["oracle", "critical_lambda"]);
    check(
        "a12 oracle-determinism",
        a.status.success() && a.stdout == b.stdout,
        "stdout identical across reruns",
    );
}
