//! The `verify` binary: exit codes, report formats and the registry commands.

use std::collections::HashSet;
use std::process::{Command, Output};

use serde_json::Value;
use verify_harness::{Report, Status};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("the binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn report(args: &[&str]) -> (i32, Report) {
    let output = verify(args);
    let report = serde_json::from_str(&stdout(&output)).expect("a JSON report");
    (output.status.code().expect("exit code"), report)
}

#[test]
fn passing_run_exits_zero() {
    let (code, report) =
        report(&["run", "--p", "5", "--e", "2", "--f", "1", "--ball", "2", "--checks", "hecke_iwahori_relations", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(report.checks.len(), 1);
    assert_eq!(report.checks[0].status, Status::Pass);
}

#[test]
fn failing_check_exits_one() {
    let args = ["run", "--p", "2", "--e", "1", "--f", "2", "--ball", "4", "--checks", "lemma_independence_smaller_digits", "--json"];
    let (code, report) = report(&args);
    assert_eq!(code, 1);
    assert_eq!(report.checks[0].status, Status::Fail);
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["run", "--p", "4", "--e", "1", "--f", "1"][..],
        &["run", "--p", "2", "--e", "1", "--f", "1", "--ball", "9"],
        &["run", "--p", "2", "--e", "1", "--f", "1", "--checks", "no_such_check"],
        &["describe", "no_such_check"],
    ] {
        let output = verify(args);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
        assert!(!output.stderr.is_empty());
    }
}

#[test]
fn over_budget_exits_three() {
    let args = ["run", "--p", "3", "--e", "1", "--f", "2", "--ball", "4", "--memory-budget-mb", "1", "--json"];
    let (code, report) = report(&args);
    assert_eq!(code, 3);
    assert!(report.checks.iter().all(|c| c.status == Status::Inconclusive));
}

#[test]
fn empty_selection_exits_zero() {
    let (code, report) = report(&["run", "--p", "2", "--e", "1", "--f", "1", "--checks", "", "--json"]);
    assert_eq!(code, 0);
    assert!(report.checks.is_empty());
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let args = ["run", "--p", "2", "--e", "1", "--f", "2", "--ball", "2", "--seed", "7", "--json", "--checks",
        "identity_first_digit_carry,lemma_tnk_reduction,infra_route_agreement"];
    let (_, first) = report(&args);
    let (_, second) = report(&args);
    let first = first.without_timing();
    assert_eq!(first.to_json(), second.without_timing().to_json());
    let parsed: Report = serde_json::from_str(&first.to_json()).unwrap();
    assert_eq!(parsed.to_json(), first.to_json());
    assert_eq!(first.config.seed, 7);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("verify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.conf");
    std::fs::write(&path, "p = 3\ne = 2\nf = 1\nball = 3\nchecks = hecke_iwahori_relations\n").unwrap();
    let (code, report) = report(&["run", "--config", path.to_str().unwrap(), "--ball", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!((report.config.p, report.config.ball), (3, 2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_report_lists_each_check() {
    let output = verify(&["run", "--p", "2", "--e", "1", "--f", "1", "--ball", "2", "--checks", "infra_codec_roundtrip"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("infra_codec_roundtrip"));
}

#[test]
fn list_has_unique_ids_and_twelve_table_cells() {
    let output = verify(&["list"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    let ids: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    let unique: HashSet<&str> = ids.iter().copied().collect();
    assert_eq!(unique.len(), ids.len());
    assert_eq!(ids.iter().filter(|id| id.starts_with("table_action_")).count(), 12);
}

#[test]
fn describe_prints_the_registry_entry() {
    let output = verify(&["describe", "thm_basis_dimension"]);
    assert_eq!(output.status.code(), Some(0));
    let entry: Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(entry["id"], "thm_basis_dimension");
    assert!(entry["anchor"].as_str().unwrap().contains("A basis for the set of"));
}
