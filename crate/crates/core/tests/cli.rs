//! End-to-end tests of the `ice` binary: exit codes, machine-parseable
//! errors, output files, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ice_core::data_model::{generate_demo_data, split_arms, write_csv};

fn ice() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ice"));
    cmd.env_remove("ICE_THREADS");
    cmd
}

fn demo_csv(dir: &Path, seed: u64) -> PathBuf {
    let (std, new) = split_arms(generate_demo_data(seed)).unwrap();
    let path = dir.join("demo.csv");
    write_csv(&std, &new, &path).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn help_lists_all_six_subcommands() {
    let out = ice().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in [
        "scale",
        "bootstrap",
        "wedge",
        "prefmap",
        "frontier",
        "report",
    ] {
        assert!(text.contains(sub), "help misses `{sub}`:\n{text}");
    }
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = ice().arg("report").output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let out = ice().args(["nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_scatter_file_reports_io_error() {
    let out = ice()
        .args(["wedge", "--scatter", "definitely-missing.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error: IoError: "), "{err}");
    assert_eq!(err.lines().count(), 1, "one-line error contract: {err}");
}

#[test]
fn bad_arm_code_reports_row_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "trtm,effe,cost\n0,1,1\n0,2,2\n2,3,3\n1,4,4\n1,5,5\n").unwrap();
    let out = ice()
        .args(["scale", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error: UnknownArmCode: "), "{err}");
    assert!(err.contains("row 3"), "{err}");
}

#[test]
fn scale_prints_ratio_lambda_and_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 42);
    let out = ice()
        .args(["scale", "--input", input.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("ratio = "));
    assert!(text.contains("recommended lambda = "));
    assert!(text.contains("Std arm, n=99"));
    assert!(text.contains("New arm, n=101"));

    // The pooled rule is accepted too and reports itself.
    let out = ice()
        .args([
            "scale",
            "--input",
            input.to_str().unwrap(),
            "--scale-rule",
            "pooled",
        ])
        .output()
        .unwrap();
    assert!(stdout(&out).contains("scale rule: pooled"));
}

#[test]
fn bootstrap_writes_observed_plus_replicates() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 42);
    let scatter = dir.path().join("scatter.csv");
    let out = ice()
        .args([
            "bootstrap",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "150",
            "--seed",
            "7",
            "--lambda",
            "10",
            "--perspective",
            "alias",
            "--out",
            scatter.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let content = fs::read_to_string(&scatter).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines[0], "rep,x,y");
    assert_eq!(lines.len(), 1 + 1 + 150, "header + observed + replicates");
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn wedge_reads_scatter_and_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 42);
    let scatter = dir.path().join("scatter.csv");
    ice()
        .args([
            "bootstrap",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "400",
            "--seed",
            "7",
            "--lambda",
            "auto",
            "--out",
            scatter.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let out = ice()
        .args([
            "wedge",
            "--scatter",
            scatter.to_str().unwrap(),
            "--confidence",
            "0.9",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("center = "));
    assert!(text.contains("counts: below = "), "{text}");

    let equal = ice()
        .args([
            "wedge",
            "--scatter",
            scatter.to_str().unwrap(),
            "--confidence",
            "0.9",
            "--tails",
            "equal",
        ])
        .output()
        .unwrap();
    assert!(stdout(&equal).contains("tails rule = equal"));
}

#[test]
fn prefmap_reports_validity_and_axioms() {
    let out = ice()
        .args(["prefmap", "--beta", "1", "--gamma", "8", "--check-axioms"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("monotone-valid: no"), "{text}");
    assert!(text.contains("monotonicity: FAIL"), "{text}");
    assert!(text.contains("re-labeling: PASS"), "{text}");

    let out = ice()
        .args([
            "prefmap",
            "--beta",
            "1",
            "--gamma",
            "1",
            "--check-axioms",
            "--grid",
            "21",
        ])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.contains("monotone-valid: yes"));
    assert!(text.contains("monotonicity: PASS"));
    assert!(text.contains("returns-to-scale: constant"));
}

#[test]
fn frontier_classifies_the_reference_options() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("options.csv");
    fs::write(
        &path,
        "name,effe,cost\nWW,0,0\nSTD,2,10\nA,2.5,55\nB,3,25\nC,4,60\nD,5,80\nE,6,120\n",
    )
    .unwrap();
    let out = ice()
        .args(["frontier", "--options", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("frontier (5 of 7 options):"), "{text}");
    let idx = |name: &str| text.find(&format!("  {name} (")).expect(name);
    assert!(
        idx("WW") < idx("STD")
            && idx("STD") < idx("B")
            && idx("B") < idx("D")
            && idx("D") < idx("E")
    );
    assert!(text.contains("strictly dominated: A by B"));
    assert!(text.contains("extendedly dominated: C by mixtures of B and D"));
    assert!(text.contains("incremental slopes"));
}

#[test]
fn report_writes_the_seven_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 42);
    let outdir = dir.path().join("out");
    let out = ice()
        .args([
            "report",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "600",
            "--seed",
            "42",
            "--lambda",
            "auto",
            "--outdir",
            outdir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ice_core::cli::REPORT_FILES {
        assert!(outdir.join(name).exists(), "missing {name}");
    }
    let report = fs::read_to_string(outdir.join("report.txt")).unwrap();
    assert!(report.contains("confidence 95%"));
    assert!(report.contains("net benefit (beta=1, gamma=1)"));
    assert!(report.contains("nonlinear (beta=1, gamma=5.828427"));
    let text = stdout(&out);
    assert!(text.contains("auto lambda: statistical ratio = "), "{text}");
    assert!(text.contains("chosen power of 10 = "), "{text}");
}

fn run_report_into(dir: &Path, input: &Path, outdir: &Path, threads: Option<&str>) {
    let _ = dir;
    let mut cmd = ice();
    if let Some(t) = threads {
        cmd.env("ICE_THREADS", t);
    }
    let out = cmd
        .args([
            "report",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "600",
            "--seed",
            "11",
            "--lambda",
            "auto",
            "--outdir",
            outdir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn criterion_09_report_pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 42);

    let (a, b, c) = (
        dir.path().join("run_a"),
        dir.path().join("run_b"),
        dir.path().join("run_single_thread"),
    );
    run_report_into(dir.path(), &input, &a, None);
    run_report_into(dir.path(), &input, &b, None);
    run_report_into(dir.path(), &input, &c, Some("1"));

    for name in ice_core::cli::REPORT_FILES {
        let bytes_a = fs::read(a.join(name)).unwrap();
        let bytes_b = fs::read(b.join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
    }
    // Thread cap may only change speed, never the scatter.
    assert_eq!(
        fs::read(a.join("scatter.csv")).unwrap(),
        fs::read(c.join("scatter.csv")).unwrap(),
        "ICE_THREADS must not change output"
    );
    println!("criterion 9 PASS: byte-identical reruns; ICE_THREADS=1 matches default");
}

#[test]
fn report_accepts_custom_nonlinear_map() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 3);
    let outdir = dir.path().join("out");
    let out = ice()
        .args([
            "report",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "200",
            "--seed",
            "5",
            "--lambda",
            "10",
            "--beta",
            "0.5",
            "--gamma",
            "2.0",
            "--outdir",
            outdir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = fs::read_to_string(outdir.join("report.txt")).unwrap();
    assert!(report.contains("nonlinear (beta=0.5, gamma=2"), "{report}");
}

#[test]
fn small_rep_counts_are_rejected_at_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let input = demo_csv(dir.path(), 1);
    let out = ice()
        .args([
            "bootstrap",
            "--input",
            input.to_str().unwrap(),
            "--reps",
            "50",
            "--seed",
            "1",
            "--lambda",
            "1",
            "--out",
            dir.path().join("s.csv").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: BadReplicationCount: "));
}
