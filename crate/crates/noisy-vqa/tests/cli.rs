//! End-to-end tests of the command-line binary: exit codes, diagnostics,
//! and byte determinism of persisted artifacts.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisy-vqa"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn quick() -> &'static str {
    "benchmark = \"maxcut-cycle4\"\n\n[train]\niterations = 3\n\n[output]\nseeds = [1, 2]\ndir = \"results\"\n"
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn run_persists_deterministic_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", quick());
    let first = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(first.status.success(), "{}", stderr(&first));
    let out = stdout(&first);
    assert!(out.contains("success_rate"), "{out}");
    assert!(out.contains("seed    1"), "{out}");
    let csv = dir.path().join("results/run-c2reg-seed1.csv");
    let body = fs::read(&csv).unwrap();
    let text = String::from_utf8(body.clone()).unwrap();
    assert!(text.starts_with("# config_hash="), "{text}");
    assert!(text.contains("iter,c1,c2,grad_l2,grad_linf,subspace_weight,metric"));
    // comment + header + 3 iterations
    assert_eq!(text.lines().count(), 5);
    // Second run against the same config and directory: identical bytes.
    let second = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(second.status.success(), "{}", stderr(&second));
    assert_eq!(fs::read(&csv).unwrap(), body);
    // Summary JSON exists and embeds the hash line from the CSV comment.
    let summary = fs::read_to_string(dir.path().join("results/run-summary.json")).unwrap();
    let hash = text.lines().next().unwrap().trim_start_matches("# config_hash=");
    assert!(summary.contains(hash));
    assert!(summary.contains("\"code_version\""));
}

#[test]
fn seed_override_changes_artifacts_not_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", quick());
    let run = bin().arg("run").arg(&cfg).args(["--seed", "9"]).output().unwrap();
    assert!(run.status.success(), "{}", stderr(&run));
    assert!(dir.path().join("results/run-c2reg-seed9.csv").exists());
    assert!(!dir.path().join("results/run-c2reg-seed1.csv").exists());
    // The hash covers the config bytes, so a seed override reuses the
    // directory rather than tripping the resume guard.
    let again = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(again.status.success(), "{}", stderr(&again));
    assert!(dir.path().join("results/run-c2reg-seed1.csv").exists());
}

#[test]
fn dry_run_prints_plan_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", quick());
    let output = bin().arg("run").arg(&cfg).arg("--dry-run").output().unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("plan for config exp"), "{text}");
    assert!(text.contains("maxcut-cycle4"));
    assert!(text.contains("step cost   c2reg"));
    assert!(!dir.path().join("results").exists());
}

#[test]
fn dry_run_still_validates_referenced_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "[benchmark]\nkind = \"maxcut\"\ngraph = \"missing.json\"\n",
    );
    let output = bin().arg("run").arg(&cfg).arg("--dry-run").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("missing.json"), "{}", stderr(&output));
}

#[test]
fn invalid_noise_rates_exit_with_config_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "benchmark = \"maxcut-cycle4\"\n\n[noise]\nq_x = 0.5\nq_y = 0.4\nq_z = 0.2\n",
    );
    let output = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.contains("q_x=0.5"), "{err}");
    assert!(err.contains("sum"), "{err}");
}

#[test]
fn malformed_toml_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", "benchmark = \"maxcut-cycle4\"\nblocks := 3\n");
    let output = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.contains("exp.toml"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn unknown_field_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "benchmark = \"maxcut-cycle4\"\n\n[train]\niteraitons = 10\n",
    );
    let output = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("iteraitons"), "{}", stderr(&output));
}

#[test]
fn unknown_claim_lists_the_valid_ids() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", quick());
    let output =
        bin().arg("bounds-check").arg(&cfg).args(["--claim", "grad-bound"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.contains("grad-bound"), "{err}");
    assert!(err.contains("state-decay"), "{err}");
    assert!(err.contains("traceless-derivative"), "{err}");
}

#[test]
fn bounds_check_single_claim_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "benchmark = \"maxcut-cycle4\"\n\n[output]\ndir = \"results\"\n\n[bounds]\nsamples = 2\n",
    );
    let output =
        bin().arg("bounds-check").arg(&cfg).args(["--claim", "solution-space"]).output().unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("solution-space"), "{}", stdout(&output));
    let report = fs::read_to_string(dir.path().join("results/bounds-solution-space.json")).unwrap();
    assert!(report.contains("\"claim\": \"solution-space\""), "{report}");
    assert!(!dir.path().join("results/bounds-state-decay.json").exists());
}

#[test]
fn resume_against_a_different_config_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let first = write_config(dir.path(), "a.toml", quick());
    let second = write_config(dir.path(), "b.toml", &format!("{}\n# trailing\n", quick()));
    assert!(bin().arg("run").arg(&first).output().unwrap().status.success());
    let clash = bin().arg("run").arg(&second).output().unwrap();
    assert_eq!(clash.status.code(), Some(1));
    assert!(stderr(&clash).contains("resume"), "{}", stderr(&clash));
}

#[test]
fn survey_applies_the_samples_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", quick());
    let output = bin()
        .arg("survey")
        .arg(&cfg)
        .args(["--samples", "3", "--out"])
        .arg(dir.path().join("sv"))
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let csv = fs::read_to_string(dir.path().join("sv/survey.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 3, "{csv}");
    assert!(stdout(&output).contains("mean |grad"), "{}", stdout(&output));
}

#[test]
fn compare_reports_both_costs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "benchmark = \"maxcut-cycle4\"\n\n[train]\niterations = 3\n\n[output]\nseeds = [5]\n",
    );
    let output = bin().arg("compare").arg(&cfg).output().unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("primary   c2reg"), "{text}");
    assert!(text.contains("baseline c1"), "{text}");
    assert!(text.contains("seed    5"), "{text}");
}

#[test]
fn missing_config_file_exits_one() {
    let output = bin().arg("run").arg("/nonexistent/exp.toml").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("exp.toml"), "{}", stderr(&output));
}
