//! End-to-end runs of the command line through `cli::run`.

use std::io::Write as _;
use std::path::PathBuf;

use refinekit::cli::{run, EXIT_ERROR, EXIT_NOT_REFINES, EXIT_REFINES};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn refinekit(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("refinekit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_aut(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::Builder::new().suffix(".aut").tempfile().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

#[test]
fn trace_refinement_holds() {
    let (code, out, _) = refinekit(&["check", "--relation", "trace", &fixture("spec_s0.aut"), &fixture("impl_t0.aut")]);
    assert_eq!(code, EXIT_REFINES);
    assert_eq!(out, "refines: true\n");
}

#[test]
fn stable_failures_counterexample() {
    let (code, out, _) = refinekit(&[
        "check",
        "--relation",
        "stable-failures",
        "--strategy",
        "bf",
        "--counterexample",
        &fixture("spec_s0.aut"),
        &fixture("impl_t0.aut"),
    ]);
    assert_eq!(code, EXIT_NOT_REFINES);
    assert!(out.contains("refines: false\n"));
    assert!(out.contains("witness: refusal\n"));
    assert!(out.contains("counterexample: req 20\n"), "{out}");
}

#[test]
fn identical_files_refine_in_every_relation() {
    for relation in ["trace", "stable-failures", "failures-divergences"] {
        let (code, _, _) = refinekit(&["check", "--relation", relation, &fixture("impl_u0.aut"), &fixture("impl_u0.aut")]);
        assert_eq!(code, EXIT_REFINES, "{relation}");
    }
}

#[test]
fn legacy_fdr_needs_acknowledgement() {
    let args = [
        "check",
        "--relation",
        "failures-divergences",
        "--variant",
        "legacy",
        &fixture("incorrect_s0.aut"),
        &fixture("incorrect_s1.aut"),
    ];
    let (code, _, err) = refinekit(&args);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("--allow-unsound-legacy-fdr"), "{err}");

    let mut acknowledged = args.to_vec();
    acknowledged.insert(1, "--allow-unsound-legacy-fdr");
    let (code, out, _) = refinekit(&acknowledged);
    assert_eq!(code, EXIT_NOT_REFINES);
    assert!(out.starts_with("refines: false"));
}

#[test]
fn oracle_cross_check_agrees() {
    let (code, out, _) = refinekit(&[
        "check",
        "--relation",
        "failures-divergences",
        "--oracle",
        "--minimize",
        &fixture("spec_s0.aut"),
        &fixture("impl_u0.aut"),
    ]);
    assert_eq!(code, EXIT_NOT_REFINES);
    assert!(out.contains("witness: divergence\n"));
    assert!(out.ends_with("oracle: agrees\n"), "{out}");
}

#[test]
fn json_metrics() {
    let (code, out, _) = refinekit(&[
        "check",
        "--relation",
        "trace",
        "--metrics",
        "json",
        &fixture("spec_s0.aut"),
        &fixture("impl_t0.aut"),
    ]);
    assert_eq!(code, EXIT_REFINES);
    let json_line = out.lines().nth(1).unwrap();
    let report: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(report["verdict"]["refines"], true);
    assert_eq!(report["spec_size"]["states"], 5);
    assert!(report["verdict"]["metrics"]["pairs_done"].as_u64().unwrap() > 0);
}

#[test]
fn csv_metrics() {
    let (_, out, _) = refinekit(&[
        "check",
        "--relation",
        "trace",
        "--metrics",
        "csv",
        &fixture("spec_s0.aut"),
        &fixture("impl_t0.aut"),
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("working_max,"));
    assert_eq!(lines[2].split(',').count(), 7);
}

#[test]
fn custom_tau_name_and_malformed_input() {
    let spec = temp_aut("des (0,2,2)\n(0,\"internal\",1)\n(1,\"a\",0)\n");
    let impl_ = temp_aut("des (0,1,1)\n(0,\"a\",0)\n");
    let spec_path = spec.path().to_str().unwrap();
    let impl_path = impl_.path().to_str().unwrap();
    let (code, _, _) = refinekit(&["check", "--relation", "stable-failures", "--tau", "internal", spec_path, impl_path]);
    assert_eq!(code, EXIT_REFINES);
    // With the default τ name, `internal` is visible and the implementation lacks it.
    let (code, _, _) = refinekit(&["check", "--relation", "stable-failures", spec_path, impl_path]);
    assert_eq!(code, EXIT_NOT_REFINES);

    let broken = temp_aut("des (0,1,1)\n(0,\"a\",3)\n");
    let (code, _, err) = refinekit(&["check", "--relation", "trace", broken.path().to_str().unwrap(), impl_path]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, err) = refinekit(&["check", "--relation", "trace", "/nonexistent/spec.aut", impl_path]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.starts_with("error: /nonexistent/spec.aut"));
}

#[test]
fn bench_ladder_csv() {
    let (code, out, _) = refinekit(&["bench", "ladder", "--n-range", "2:4:2", "--k-range", "3"]);
    assert_eq!(code, EXIT_REFINES);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,k,verdict,wall_time,working_max,antichain_hits,antichain_misses,antichain_max");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,3,true,"));
    assert!(lines[2].starts_with("4,3,true,"));
}

#[test]
fn bench_reports_exhausted_budget() {
    let (code, out, _) = refinekit(&[
        "bench",
        "ladder",
        "--n-range",
        "8",
        "--k-range",
        "8",
        "--variant",
        "legacy",
        "--strategy",
        "bf",
        "--node-budget",
        "10000",
    ]);
    assert_eq!(code, EXIT_REFINES);
    assert!(out.lines().nth(1).unwrap().starts_with("8,8,budget-exceeded,"), "{out}");
}

#[test]
fn check_with_exhausted_budget_is_an_error() {
    let (code, _, err) = refinekit(&[
        "check",
        "--relation",
        "trace",
        "--node-budget",
        "1",
        &fixture("spec_s0.aut"),
        &fixture("impl_t0.aut"),
    ]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("node budget exceeded"), "{err}");
}

#[test]
fn usage_errors() {
    let (code, _, err) = refinekit(&["check", "--relation", "bogus", "a.aut", "b.aut"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(!err.is_empty());
    let (code, _, _) = refinekit(&["bench", "ladder", "--n-range", "3:1", "--k-range", "1"]);
    assert_eq!(code, EXIT_ERROR);
}
