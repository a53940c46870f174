//! End-to-end command tests, in-process through `run` plus one pass through
//! the compiled binary to pin byte-level reproducibility.

use std::io::Write as _;
use std::process::Command;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ksep").chain(args.iter().copied());
    let code = ksep_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("stdout is utf-8"),
        String::from_utf8(err).expect("stderr is utf-8"),
    )
}

fn json(doc: &str) -> serde_json::Value {
    serde_json::from_str(doc.trim()).expect("stdout is one JSON document")
}

#[test]
fn eval_family_reports_detection() {
    let args = [
        "eval", "--family", "dicke", "--n", "4", "--m", "2", "--a", "0.6",
        "--criterion", "t1", "--k", "2",
    ];
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "stderr: {err}");
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["criterion"], "t1");
    assert_eq!(doc["nk"], 2);
    assert_eq!(doc["verdict"], "k_nonseparable");
    assert!((doc["value"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!((doc["a"].as_f64().unwrap() - 0.6).abs() == 0.0);

    let (code2, out2, _) = run_cli(&args);
    assert_eq!((code2, out2), (code, out), "same input must give identical bytes");
}

#[test]
fn eval_reads_density_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    let entries: Vec<String> = (0..8)
        .map(|i| format!("[\"{i:03b}\", \"{i:03b}\", 0.125, 0.0]"))
        .collect();
    std::fs::write(
        &path,
        format!("{{\"kind\": \"density\", \"n\": 3, \"entries\": [{}]}}", entries.join(", ")),
    )
    .unwrap();

    let (code, out, err) = run_cli(&[
        "eval", "--state", path.to_str().unwrap(), "--criterion", "t1", "--k", "2",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let doc = json(&out);
    assert_eq!(doc["verdict"], "inconclusive");
    assert!((doc["value"].as_f64().unwrap() + 1.125).abs() < 1e-12);
    assert!(doc.get("a").is_none(), "fixed states carry no noise parameter");
}

#[test]
fn eval_rejects_incoherent_flags() {
    // Family input without a noise level.
    let (code, out, err) = run_cli(&[
        "eval", "--family", "dicke", "--n", "4", "--m", "2", "--criterion", "t1", "--k", "2",
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("--a"));

    // Weight criterion without its weight.
    let (code, _, err) = run_cli(&[
        "eval", "--family", "dicke", "--n", "4", "--a", "0.5", "--criterion", "t2", "--k", "2",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("--m"));

    // Graph criterion without its basis.
    let (code, _, err) = run_cli(&[
        "eval", "--family", "dicke", "--n", "4", "--m", "2", "--a", "0.5",
        "--criterion", "t3", "--k", "2",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("--basis"));

    // Unknown flag.
    let (code, out, err) = run_cli(&["eval", "--bogus"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn threshold_closed_prints_exact_fractions() {
    let (code, out, err) = run_cli(&[
        "threshold", "--family", "dicke", "--n", "4", "--m", "2", "--k", "3",
        "--criterion", "t2", "--method", "closed",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("\"a_star\": \"5/13\""), "got: {out}");
    let doc = json(&out);
    assert!((doc["a_star_float"].as_f64().unwrap() - 5.0 / 13.0).abs() < 1e-15);

    // The pair criterion rides the m = 2 closed form.
    let (code, out, _) = run_cli(&[
        "threshold", "--family", "dicke", "--n", "4", "--m", "2", "--k", "2",
        "--criterion", "t1", "--method", "closed",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"a_star\": \"9/17\""), "got: {out}");

    // ... but not on families with a different weight.
    let (code, _, err) = run_cli(&[
        "threshold", "--family", "dicke", "--n", "5", "--m", "3", "--k", "2",
        "--criterion", "t1", "--method", "closed",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("m = 2"));
}

#[test]
fn threshold_closed_reports_undetectable_families() {
    let (code, out, err) = run_cli(&[
        "threshold", "--family", "dicke", "--n", "8", "--m", "7", "--k", "2",
        "--criterion", "t2", "--method", "closed",
    ]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert!(doc["a_star"].is_null());
    assert_eq!(doc["note"], "criterion cannot detect in this regime");
    assert!(err.starts_with("note:"));
}

#[test]
fn threshold_bisects_explicit_basis_families() {
    let dir = tempfile::tempdir().unwrap();
    let basis_path = dir.path().join("basis.json");
    std::fs::write(
        &basis_path,
        "{\"n\": 4, \"states\": [\"0011\", \"0101\", \"0110\", \"1010\"]}",
    )
    .unwrap();
    let family_path = dir.path().join("family.json");
    let mut f = std::fs::File::create(&family_path).unwrap();
    write!(
        f,
        "{{\"kind\": \"pure_noise\", \"n\": 4, \"amplitudes\": [\
         [\"0011\", 0.5, 0.0], [\"0101\", 0.5, 0.0], [\"0110\", 0.5, 0.0], [\"1010\", 0.5, 0.0]]}}"
    )
    .unwrap();
    drop(f);

    for (k, want) in [("3", 7.0 / 19.0), ("4", 0.2)] {
        let (code, out, err) = run_cli(&[
            "threshold", "--state", family_path.to_str().unwrap(),
            "--criterion", "t3", "--basis", basis_path.to_str().unwrap(),
            "--k", k, "--method", "bisect",
        ]);
        assert_eq!(code, 0, "stderr: {err}");
        let doc = json(&out);
        assert_eq!(doc["method"], "bisection");
        assert!(
            (doc["a_star"].as_f64().unwrap() - want).abs() <= 1e-9,
            "k={k}: got {}",
            doc["a_star"]
        );
    }
}

#[test]
fn threshold_bisect_reports_no_crossing() {
    let (code, out, err) = run_cli(&[
        "threshold", "--family", "dicke", "--n", "5", "--m", "4", "--k", "2",
        "--criterion", "t2", "--method", "bisect",
    ]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert!(doc["a_star"].is_null());
    assert_eq!(doc["note"], "no crossing in [0, 1]");
    assert!(err.contains("never turns positive"));
}

#[test]
fn scan_emits_csv_rows() {
    let (code, out, err) = run_cli(&[
        "scan", "--family", "dicke", "--n", "4", "--m", "2", "--criterion", "t1",
        "--k", "2", "--points", "3",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "a,value,nk,verdict");
    let row = |line: &str| -> (f64, f64, String, String) {
        let cols: Vec<&str> = line.split(',').collect();
        (
            cols[0].parse().unwrap(),
            cols[1].parse().unwrap(),
            cols[2].to_string(),
            cols[3].to_string(),
        )
    };
    let (a0, v0, nk0, verdict0) = row(lines[1]);
    assert_eq!((a0, nk0.as_str(), verdict0.as_str()), (0.0, "2", "inconclusive"));
    assert!((v0 + 2.25).abs() < 1e-12);
    let (a2, v2, _, verdict2) = row(lines[3]);
    assert_eq!((a2, verdict2.as_str()), (1.0, "k_nonseparable"));
    assert!((v2 - 2.0).abs() < 1e-12);

    let (code, _, _) = run_cli(&[
        "scan", "--family", "dicke", "--n", "4", "--m", "2", "--criterion", "t1",
        "--k", "2", "--points", "1",
    ]);
    assert_eq!(code, 1, "a single-point scan has no grid");
}

#[test]
fn verify_passes_on_sound_criteria() {
    let args = [
        "verify", "--n", "4", "--k", "2", "--criterion", "t1",
        "--trials", "60", "--seed", "7",
    ];
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "stderr: {err}");
    let doc = json(&out);
    assert_eq!(doc["pure_trials"], 60);
    assert_eq!(doc["mixed_trials"], 6);
    assert!(doc["violation"].is_null());
    assert!(doc["max_value"].as_f64().unwrap() <= 1e-9);

    let (_, out2, _) = run_cli(&args);
    assert_eq!(out, out2, "seeded verification must reproduce exactly");
}

#[test]
fn partitions_lists_canonical_splits() {
    let (code, out, _) = run_cli(&["partitions", "--n", "4", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1|2|34\n1|23|4\n1|24|3\n12|3|4\n13|2|4\n14|2|3\n");

    let (code, out, _) = run_cli(&["partitions", "--n", "3", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "123\n");

    let (code, _, err) = run_cli(&["partitions", "--n", "3", "--k", "9"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn help_is_success() {
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn compiled_binary_matches_in_process_runs() {
    let exe = env!("CARGO_BIN_EXE_ksep");
    let args = [
        "eval", "--family", "dicke", "--n", "4", "--m", "2", "--a", "0.6",
        "--criterion", "t1", "--k", "2",
    ];
    let (_, in_process, _) = run_cli(&args);
    let first = Command::new(exe).args(args).output().unwrap();
    let second = Command::new(exe).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "binary output must be byte-stable");
    assert_eq!(String::from_utf8(first.stdout).unwrap(), in_process);

    let bad = Command::new(exe).args(["eval", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
