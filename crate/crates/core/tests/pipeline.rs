mod common;

use std::process::Command;

use chartab::pipeline::{parse_script, run_script, run_source, ParseError, PipelineError, RunOptions};
use common::{data_dir, scripts_dir};

fn run(src: &str) -> chartab::pipeline::Report {
    run_source(src, &data_dir(), &RunOptions::default())
}

fn chartab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chartab"))
}

#[test]
fn empty_script_passes() {
    let r = run("# nothing\n\n");
    assert!(r.passed());
    assert_eq!(r.checkpoints(), (0, 0));
}

#[test]
fn missing_data_names_the_table() {
    let r = run("load id=2.B\n");
    match &r.error {
        Some(PipelineError::MissingData { id, path }) => {
            assert_eq!(id, "2.B");
            assert!(path.ends_with("2.B.tbl"));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(r.to_string().contains("FAIL line 1 load"));
}

#[test]
fn bundled_tables_load_and_pin() {
    let sums = std::fs::read_to_string(data_dir().join("SHA256SUMS")).unwrap();
    let a5 = sums.lines().find(|l| l.ends_with("A5.tbl")).unwrap().split_once("  ").unwrap().0;
    let src = format!(
        "load id=A5 sha256={a5}\nload id=L3(2) file=L3_2.tbl as=L\nassert kind=validate table=L\nassert kind=count var=A5 equals=5\n"
    );
    let r = run(&src);
    assert!(r.passed(), "{r}{:?}", r.error);
    assert!(r.to_string().contains(&format!("sha256 {a5}")));
    let r = run("load id=A5 sha256=00\n");
    assert!(matches!(r.error, Some(PipelineError::Checkpoint { .. })), "{:?}", r.error);
}

#[test]
fn a5_demo_passes_and_replays_identically() {
    let path = scripts_dir().join("a5_demo.chs");
    let a = run_script(&path, &data_dir(), &RunOptions::default());
    assert!(a.passed(), "{a}{:?}", a.error);
    let b = run_script(&path, &data_dir(), &RunOptions::default());
    assert_eq!(a.to_string(), b.to_string());
    assert_eq!(a.audit, b.audit);
    assert!(a.audit.iter().any(|l| l.starts_with("#I after V4: found 1 classes")));
}

#[test]
fn choices_need_a_justification() {
    assert!(matches!(parse_script("choose state=pm p=2 class=3 value=4\n"), Err(ParseError::MissingJustification { line: 1 })));
    let r = run("choose state=pm p=2 class=3 value=4 justification=\"  \"\n");
    assert!(matches!(r.error, Some(PipelineError::Parse(ParseError::MissingJustification { .. }))));
    assert!(r.steps.is_empty());
}

#[test]
fn failed_checkpoints_stop_the_run() {
    let r = run("oracle id=S3 gens=\"(1,2,3);(1,2)\"\nassert kind=count var=S3 equals=4\nassert kind=validate table=S3\n");
    assert!(!r.passed());
    assert_eq!(r.checkpoints(), (1, 1));
    assert!(matches!(r.error, Some(PipelineError::Checkpoint { line: 2, .. })));
}

#[test]
fn monster_script_parses_and_waits_for_data() {
    let src = std::fs::read_to_string(scripts_dir().join("monster.chs")).unwrap();
    let steps = parse_script(&src).unwrap();
    assert!(steps.len() > 200);
    assert!(steps.iter().filter(|s| s.kind == "choose").all(|s| s.get("justification").is_some()));
    let empty = tempdir();
    let r = run_source(&src, &empty, &RunOptions::default());
    assert!(matches!(&r.error, Some(PipelineError::MissingData { id, .. }) if id == "2.B"), "{:?}", r.error);
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("chartab-empty-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn cli_exit_codes() {
    let demo = scripts_dir().join("a5_demo.chs");
    let ok = chartab().arg("run").arg(&demo).arg("--data").arg(data_dir()).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let monster = scripts_dir().join("monster.chs");
    let missing = chartab().arg("run").arg(&monster).arg("--data").arg(tempdir()).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stdout).contains("2.B"));

    let bad = chartab().args(["validate", "/nonexistent/x.tbl"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let v = chartab().arg("validate").arg(data_dir().join("A6.tbl")).output().unwrap();
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains("0 violation(s)"));
}

#[test]
fn cli_oracle_and_fusions() {
    let dir = tempdir();
    let out = dir.join("a4.tbl");
    let o = chartab().args(["oracle", "(1,2,3);(2,3,4)", "--id", "A4", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let f = chartab().arg("fusions").arg(&out).arg(data_dir().join("A5.tbl")).output().unwrap();
    assert_eq!(f.status.code(), Some(0));
    let lines = String::from_utf8_lossy(&f.stdout).lines().count();
    assert!(lines >= 1);
}

#[test]
fn cli_report_is_byte_identical() {
    let dir = tempdir();
    let demo = scripts_dir().join("a5_demo.chs");
    let mut reports = Vec::new();
    for k in 0..2 {
        let p = dir.join(format!("r{k}.txt"));
        let s = chartab().arg("run").arg(&demo).arg("--data").arg(data_dir()).arg("--report").arg(&p).status().unwrap();
        assert!(s.success());
        reports.push(std::fs::read(&p).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}
