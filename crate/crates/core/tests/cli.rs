use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use detrec::cli::{parse_run_args, resolve_stages, CliError, RunConfig, Stage};

fn detrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detrec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut all = vec!["run", "--out", out];
    all.extend_from_slice(args);
    detrec(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn ladder_check_reports_ledger_and_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(
        dir.path(),
        &["--family", "ladder", "--stages", "all", "--check"],
    );
    let text = stdout(&o);
    assert!(text.contains("PASS expansion ledger P: 22 rows"), "{text}");
    assert!(text.contains("PASS identity system Q"), "{text}");
    assert!(
        text.contains("PASS denominator minimal annihilator"),
        "{text}"
    );
    assert_eq!(o.status.code(), Some(5));
    let err = stderr(&o);
    assert!(
        err.contains("fixture mismatch: numerator validity index: got 11, expected 10"),
        "{err}"
    );
    for f in [
        "ledger.json",
        "Q.json",
        "R.json",
        "recurrence.json",
        "binet.json",
        "resistance.csv",
        "report.txt",
    ] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
}

#[test]
fn three_tree_expand_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(
        dir.path(),
        &["--family", "linear3tree", "--stages", "expand"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("201 expansions, 80 families"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn unknown_family_fails() {
    let o = detrec(&["run", "--family", "nosuch"]);
    assert!(!o.status.success());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unknown family"), "{}", stderr(&o));
}

#[test]
fn stage_gap_is_rejected() {
    let o = detrec(&["run", "--family", "path", "--stages", "expand,minimal"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("stage dependency missing"),
        "{}",
        stderr(&o)
    );
    assert!(matches!(
        resolve_stages(&[Stage::Expand, Stage::Binet]),
        Err(CliError::StageDependency {
            stage: Stage::Binet,
            needs: Stage::Reduce
        })
    ));
    assert_eq!(
        resolve_stages(&[Stage::Reduce, Stage::Expand]).unwrap(),
        vec![Stage::Expand, Stage::Reduce]
    );
}

#[test]
fn stretch_family_needs_flag() {
    let o = detrec(&["run", "--family", "corrugated2tree", "--stages", "expand"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--corrugated"));
}

#[test]
fn passing_families_exit_zero_in_check_mode() {
    for family in ["path", "linear2tree", "wheel"] {
        let dir = tempfile::tempdir().unwrap();
        let o = run_into(dir.path(), &["--family", family, "--check"]);
        assert!(o.status.success(), "{family}: {}", stderr(&o));
        assert!(!stdout(&o).contains("FAIL"), "{family}: {}", stdout(&o));
    }
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run_into(d.path(), &["--family", "linear2tree", "--format", "json"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in [
        "ledger.json",
        "Q.json",
        "R.json",
        "recurrence.json",
        "binet.json",
        "resistance.csv",
        "report.txt",
    ] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
}

#[test]
fn json_documents_are_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(dir.path(), &["--family", "fan", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["schema_version"], 1);
    for f in [
        "ledger.json",
        "Q.json",
        "R.json",
        "recurrence.json",
        "binet.json",
    ] {
        let v: serde_json::Value =
            serde_json::from_slice(&fs::read(dir.path().join(f)).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1, "{f}");
        assert_eq!(v["family"], "fan", "{f}");
    }
    let rec: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("recurrence.json")).unwrap()).unwrap();
    assert_eq!(
        rec["numerator"]["minimal"]["annihilator_X"],
        "X^2 - 3*X + 1"
    );
    assert_eq!(rec["denominator"]["minimal"]["validity_index"], 4);
}

#[test]
fn check_subcommand_lists_fixtures() {
    let o = detrec(&["check", "linear2tree"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("ok"), "{}", stdout(&o));
}

#[test]
fn precision_from_environment() {
    let a = parse_run_args(&["--family", "path"]).unwrap();
    assert!(RunConfig::from_args(&a).is_ok());
    let low = parse_run_args(&["--family", "path", "--family-cap", "0"]).unwrap();
    assert!(matches!(
        RunConfig::from_args(&low),
        Err(CliError::BadArgument(_))
    ));
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_detrec"))
        .args([
            "run",
            "--family",
            "path",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .env("DETREC_PRECISION", "40")
        .output()
        .unwrap();
    assert!(
        stdout(&o).contains("precision: 40 digits"),
        "{}",
        stdout(&o)
    );
}
