//! End-to-end checks of the binary: output formats, exit codes, artifact
//! files, and bit-reproducibility.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hasten"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

/// Scratch directory for artifact files; unique per test to keep parallel
/// runs independent.
fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hasten-cli-{}-{test}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

#[test]
fn solve_paper_instance() {
    let out = run(&["solve"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "energy=0\n0100\n");
}

#[test]
fn solve_exit_codes() {
    let dir = scratch("solve");
    // all four triples over 4 bits cannot all hold at once
    let unsat = dir.join("unsat.json");
    fs::write(
        &unsat,
        r#"{ "n": 4, "clauses": [[1,2,3],[1,2,4],[1,3,4],[2,3,4]] }"#,
    )
    .expect("write instance");
    let out = run(&["solve", "--instance", unsat.to_str().expect("utf8 path")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("energy=1\n"), "got {text:?}");

    let out = run(&["solve", "--instance", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));

    let out = run(&["solve", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_writes_trace_and_manifest() {
    let dir = scratch("evolve");
    let csv = dir.join("trace.csv");
    let out = run(&[
        "evolve",
        "--T",
        "2",
        "--steps",
        "200",
        "--signal",
        "pulse:s=2,delta=0.08,duty=0.5",
        "--record-every",
        "50",
        "--out",
        csv.to_str().expect("utf8 path"),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("final_fidelity="));

    let text = fs::read_to_string(&csv).expect("trace written");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_over_T,fidelity,coefficient"));
    let first = lines.next().expect("at least one row");
    assert!(first.starts_with("0.000000000000e0,1.000000000000e0,"));
    let last = text.lines().last().expect("rows");
    assert!(last.starts_with("1.000000000000e0,"));

    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.join("trace.csv.manifest.json")).expect("manifest written"),
    )
    .expect("manifest parses");
    assert_eq!(manifest["command"], "evolve");
    assert_eq!(manifest["parameters"]["steps"], 200);
    assert_eq!(manifest["parameters"]["signal"], "pulse:s=2,delta=0.08,duty=0.5");
    assert!(manifest["duration_seconds"].as_f64().expect("duration") >= 0.0);
    assert!(manifest["version"].is_string());
}

#[test]
fn evolve_rejects_bad_parameters() {
    let out = run(&["evolve", "--T", "2", "--signal", "warble:x=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["evolve", "--T", "2", "--backend", "verlet"]);
    assert_eq!(out.status.code(), Some(2));
    // step too coarse for the pulse resolution limit
    let out = run(&[
        "evolve",
        "--T",
        "2",
        "--steps",
        "10",
        "--signal",
        "pulse:s=1,delta=0.08",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rtf_runs_are_bit_reproducible() {
    let dir = scratch("rtf");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "rtf",
            "--T",
            "20",
            "--k",
            "200",
            "--rule",
            "uniform:lo=2,hi=3",
            "--seed",
            "7",
            "--out",
            path.to_str().expect("utf8 path"),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let bytes_a = fs::read(&a).expect("first run");
    let bytes_b = fs::read(&b).expect("second run");
    assert_eq!(bytes_a, bytes_b, "same seed must give identical CSV bytes");

    // every recorded coefficient of the uniform rule lies in [lo, hi]
    let text = String::from_utf8(bytes_a).expect("utf8 csv");
    for line in text.lines().skip(2) {
        let coeff: f64 = line
            .rsplit(',')
            .next()
            .expect("coefficient column")
            .parse()
            .expect("float");
        assert!((2.0..=3.0).contains(&coeff), "coefficient {coeff} outside [2, 3]");
    }
}

#[test]
fn sweep_fixed_runtime_table() {
    let out = run(&[
        "sweep",
        "--family",
        "pulse:delta=0.08,duty=0.5",
        "--strengths",
        "0,2",
        "--T",
        "4",
        "--jobs",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,final_fidelity");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.000000000000e0,"));
    assert!(lines[2].starts_with("2.000000000000e0,"));
}

#[test]
fn sweep_threshold_marks_unreachable() {
    let dir = scratch("sweep");
    let csv = dir.join("sweep.csv");
    let out = run(&[
        "sweep",
        "--family",
        "pulse:delta=0.08",
        "--strengths",
        "0,5",
        "--threshold",
        "0.9",
        "--t-range",
        "1,12",
        "--out",
        csv.to_str().expect("utf8 path"),
    ]);
    // one strength cannot reach the bar inside the range: domain-negative
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&csv).expect("table written");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,t_star,final_fidelity");
    assert!(lines[1].contains(",unreachable,"), "got {:?}", lines[1]);
    assert!(!lines[2].contains("unreachable"), "got {:?}", lines[2]);
    assert!(dir.join("sweep.csv.manifest.json").exists());
}

#[test]
fn sweep_requires_exactly_one_mode() {
    let out = run(&[
        "sweep",
        "--family",
        "pulse:delta=0.08",
        "--strengths",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "sweep",
        "--family",
        "pulse:delta=0.08",
        "--strengths",
        "0,1",
        "--T",
        "4",
        "--threshold",
        "0.9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scale_check_passes_and_prints() {
    let out = run(&["scale-check", "--J", "4", "--T0", "8", "--steps", "800"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("max_deviation="), "got {text:?}");
    assert!(text.contains("final_fidelity="), "got {text:?}");
    assert!(text.contains("final_fidelity_scaled="), "got {text:?}");
}

#[test]
fn ms_verify_grid_passes() {
    let out = run(&["ms-verify", "--n", "1-3", "--phi", "0.3,1.7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        assert!(line.starts_with("n="), "got {line:?}");
        assert!(line.contains(" global="), "got {line:?}");
        assert!(line.contains(" subspace="), "got {line:?}");
        assert!(line.ends_with(" pass"), "got {line:?}");
    }

    let out = run(&["ms-verify", "--n", "2", "--phi", "0.25", "--listing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("MS theta=1.5707963267948966 phi=0\n"), "got {text:?}");
    assert!(text.contains("\nANC axis=z angle=0.25\n"), "got {text:?}");
}

#[test]
fn compile_emits_listing_grammar() {
    let out = run(&[
        "compile",
        "--j",
        "250",
        "--k",
        "500",
        "--tau",
        "0.05",
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.is_empty());
    for line in text.lines() {
        let legal = line.starts_with("MS theta=")
            || line.starts_with("ANC axis=")
            || line.starts_with("ROT q=")
            || line.starts_with("PHASE angle=");
        assert!(legal, "unexpected listing line {line:?}");
    }
    // the mixer vanishes at the final slice: no x-rotations remain
    let out = run(&["compile", "--j", "500", "--k", "500", "--tau", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("axis=x"));
}

#[test]
fn dump_hamiltonian_sections() {
    let out = run(&["dump-hamiltonian"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("H_P:\n"));
    assert!(text.contains("\nH_B:\n"));
    assert!(text.contains("Z1Z2Z3 3/8\n"));
    assert!(text.contains("I 15/8\n"));
    assert!(text.contains("X2 -3/2\n"));
}
