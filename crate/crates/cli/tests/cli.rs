use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use latdiag_cli::{read_progress, run_suite, Check, Status, SuiteConfig, VerificationRecord};
use serde_json::Value;

fn latdiag(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latdiag"))
        .args(args)
        .current_dir(cwd)
        .env_remove("LATDIAG_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(checks: &[Check], max: usize) -> SuiteConfig {
    SuiteConfig { checks: checks.to_vec(), max_size: Some(max), trials: 20, orbit_trials: 4, ..SuiteConfig::default() }
}

#[test]
fn delta_of_two_cells() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["delta", "--cells", "(0,0);(1,0)"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-x1 + x2\n");
    let o = latdiag(&["--json", "delta", "--mu", "2,1"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nvars"], 3);
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);
}

#[test]
fn delta_with_holes_matches_cells() {
    let dir = tempfile::tempdir().unwrap();
    let a = latdiag(&["delta", "--mu", "2,2", "--holes", "(1,1)"], dir.path());
    let b = latdiag(&["delta", "--cells", "(0,0);(1,0);(0,1)"], dir.path());
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn shift_json_lists_signed_terms() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["--json", "shift", "--cells", "(0,0);(2,0)", "--op", "pk", "--k", "2"], dir.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // (2,0) cannot land on (0,0), so p_2 has no terms.
    assert_eq!(v, serde_json::json!([]));
    let o = latdiag(&["--json", "shift", "--cells", "(1,0);(2,0)", "--op", "ek", "--k", "1"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!([["1", [[0, 0], [2, 0]]]]));
}

#[test]
fn mkij_reports_dimension_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["--json", "mkij", "--mu", "2,1", "--k", "1"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["bound"], "6");
    let o = latdiag(&["--json", "mkij", "--mu", "2,1", "--k", "1", "--x-only"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 3);
}

#[test]
fn combinatorial_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["tableaux", "--mu", "2,1", "--k", "1"], dir.path());
    assert_eq!(stdout(&o), "3\n");
    let o = latdiag(&["--json", "selections", "--mu", "4,2,1", "--k", "2"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    let o = latdiag(&["--json", "basis", "--mu", "2,1", "--k", "1"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_exits_with_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["delta", "--cells", "(0,0);(0,0)"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
    let o = latdiag(&["mkij", "--mu", "1", "--k", "1"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["--out", "d.txt", "delta", "--mu", "1,1"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert_eq!(fs::read_to_string(dir.path().join("d.txt")).unwrap(), "-x1 + x2\n");
}

#[test]
fn bound_suite_on_tiny_cases() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bound.json");
    let (summary, records) = run_suite(&config(&[Check::Bound], 3), &report).unwrap();
    assert!(summary.ok());
    assert_eq!(summary.failed, 0);
    assert!(records.iter().all(|r| r.status == Status::Pass));
    let subjects: std::collections::BTreeSet<_> = records.iter().map(|r| r.case.subject.as_str()).collect();
    for mu in ["2", "1,1", "3", "2,1", "1,1,1"] {
        assert!(subjects.contains(mu), "{mu}");
    }
}

#[test]
fn counterexample_suite_has_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let (summary, records) = run_suite(&config(&[Check::TwoHoleCounterexample], 9), &dir.path().join("r.json")).unwrap();
    assert_eq!(summary.total, 1);
    assert_eq!(records[0].status, Status::Pass);
    assert_eq!(records[0].values["excluded"], true);
}

#[test]
fn nfact_suite_up_to_four() {
    let dir = tempfile::tempdir().unwrap();
    let (summary, records) = run_suite(&config(&[Check::Nfact], 4), &dir.path().join("n.json")).unwrap();
    assert_eq!(summary.total, 1 + 2 + 3 + 5);
    assert!(summary.ok());
    let r = records.iter().find(|r| r.case.subject == "2,2").unwrap();
    assert_eq!(r.values["dimension"], 24);
}

#[test]
fn reports_are_byte_identical_and_carry_no_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&[Check::IdealEq, Check::Orbit, Check::DepthLemma], 3);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run_suite(&cfg, &a).unwrap();
    run_suite(&SuiteConfig { jobs: 3, ..cfg }, &b).unwrap();
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(!String::from_utf8(ta).unwrap().contains("wall_ms"));
    assert!(fs::read_to_string(latdiag_cli::progress_path(&a)).unwrap().contains("wall_ms"));
}

#[test]
fn seed_changes_randomized_records_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&[Check::IdealEq, Check::Nfact], 3);
    let (_, a) = run_suite(&cfg, &dir.path().join("a.json")).unwrap();
    let (_, b) = run_suite(&SuiteConfig { seed: 99, ..cfg }, &dir.path().join("b.json")).unwrap();
    let nfact = |v: &[VerificationRecord]| v.iter().filter(|r| r.check == Check::Nfact).cloned().collect::<Vec<_>>();
    assert_eq!(nfact(&a), nfact(&b));
    let members = |v: &[VerificationRecord]| v.iter().map(|r| r.values.get("members").cloned()).collect::<Vec<_>>();
    assert_ne!(members(&a), members(&b));
}

#[test]
fn resume_skips_completed_records() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let cfg = config(&[Check::Bound, Check::Nfact], 3);
    let (first, _) = run_suite(&cfg, &report).unwrap();
    assert_eq!(first.computed, first.total);
    let before = fs::read(&report).unwrap();

    // Keep half the log plus a torn line, as if the run had been interrupted.
    let log = latdiag_cli::progress_path(&report);
    let text = fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let kept = lines.len() / 2;
    fs::write(&log, format!("{}\n{{\"id\":\"bou", lines[..kept].join("\n"))).unwrap();
    fs::remove_file(&report).unwrap();

    let (second, _) = run_suite(&cfg, &report).unwrap();
    assert_eq!(second.computed, first.total - kept);
    assert_eq!(fs::read(&report).unwrap(), before);
    assert_eq!(read_progress(&log).unwrap().len(), first.total);

    let (third, _) = run_suite(&cfg, &report).unwrap();
    assert_eq!(third.computed, 0);
}

#[test]
fn csv_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv");
    let (summary, _) = run_suite(&config(&[Check::Nfact], 3), &report).unwrap();
    let mut rd = csv::Reader::from_path(&report).unwrap();
    let headers = rd.headers().unwrap().clone();
    assert_eq!(&headers[0], "id");
    assert_eq!(rd.records().count(), summary.total);
}

#[test]
fn cost_ceiling_refuses_large_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_suite(&config(&[Check::Bound], 9), &dir.path().join("r.json")).unwrap_err();
    assert!(err.to_string().contains("ceiling"));
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn verify_subcommand_exit_codes_and_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["verify", "--checks", "bound,nfact", "--max-size", "3"], dir.path());
    assert!(o.status.success());
    assert!(dir.path().join("latdiag-report.json").exists());

    let out = dir.path().join("reports");
    fs::create_dir(&out).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_latdiag"))
        .args(["--json", "verify", "--checks", "depth-lemma", "--max-size", "4"])
        .current_dir(dir.path())
        .env("LATDIAG_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["failed"], 0);
    assert!(out.join("report.json").exists());

    let o = latdiag(&["verify", "--checks", "bound", "--max-size", "9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_records_give_a_nonzero_exit() {
    // A forged failure in the progress log is picked up on resume and flips the exit code.
    let dir = tempfile::tempdir().unwrap();
    let o = latdiag(&["verify", "--checks", "nfact", "--max-size", "2", "--out", "r.json"], dir.path());
    assert!(o.status.success());
    let log = dir.path().join("r.json.progress.jsonl");
    let text = fs::read_to_string(&log).unwrap();
    let first = text.lines().next().unwrap();
    let mut rec: VerificationRecord = serde_json::from_str(first).unwrap();
    rec.status = Status::Fail;
    fs::write(&log, format!("{}\n{}", serde_json::to_string(&rec).unwrap(), text.lines().skip(1).collect::<Vec<_>>().join("\n"))).unwrap();
    let o = latdiag(&["verify", "--checks", "nfact", "--max-size", "2", "--out", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
