use std::path::Path;
use std::process::{Command, Output};

use netcx::report::read_table_csv;
use netcx::topologies::TopologyId;

fn netcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcx")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = netcx(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_then_analyze_every_dialect() {
    let dir = tempfile::tempdir().unwrap();
    let expected = [(TopologyId::Azure1, "azure-1,7.33,55,195,8,8,37"), (TopologyId::Cli3, "cli-3,4.71,187,40,4,1,15")];
    for id in TopologyId::ALL {
        let out = dir.path().join(id.as_str());
        ok(&["generate", "--topology", id.as_str(), "--out", p(&out)]);
        assert!(out.join(format!("{id}.ir.json")).exists());
        let csv = ok(&[
            "analyze",
            "--dialect",
            id.dialect().as_str(),
            "--input",
            p(&out),
            "--name",
            id.as_str(),
            "--format",
            "csv",
        ]);
        let rows = read_table_csv(&csv).unwrap();
        assert_eq!(rows.len(), 1, "{csv}");
        if let Some((_, line)) = expected.iter().find(|(e, _)| *e == id) {
            assert!(csv.lines().any(|l| l == *line), "{csv}");
        }
    }
}

#[test]
fn compare_merges_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for id in [TopologyId::K8s3, TopologyId::Aci3] {
        let out = dir.path().join(id.as_str());
        ok(&["generate", "--topology", id.as_str(), "--out", p(&out)]);
        let csv = dir.path().join(format!("{id}.csv"));
        ok(&[
            "analyze",
            "--dialect",
            id.dialect().as_str(),
            "--input",
            p(&out),
            "--name",
            id.as_str(),
            "--out",
            p(&csv),
            "--format",
            "csv",
        ]);
        csvs.push(csv);
    }
    let md = ok(&["compare", "--input", p(&csvs[0]), p(&csvs[1])]);
    assert_eq!(md.lines().count(), 4, "{md}");
    assert!(md.contains("| k8s-3 | 3.08 |"), "{md}");
    assert!(md.contains("| aci-3 | 2.00 | 0 |"), "{md}");
}

#[test]
fn reproduce_is_deterministic_and_passes() {
    let a = ok(&["reproduce"]);
    assert_eq!(a, ok(&["reproduce"]));
    assert!(a.contains("36 of 36 cells within tolerance"), "{a}");
    let csv = ok(&["reproduce", "--format", "csv"]);
    assert_eq!(read_table_csv(&csv).unwrap().len(), 6);
}

#[test]
fn multiple_formats_write_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    ok(&["generate", "--topology", "azure-2", "--out", p(&gen)]);
    let base = dir.path().join("report");
    let stdout = ok(&[
        "analyze",
        "--dialect",
        "azure",
        "--input",
        p(&gen),
        "--out",
        p(&base),
        "--format",
        "csv",
        "--format",
        "dot",
        "--format",
        "graphml",
    ]);
    assert!(stdout.is_empty());
    for ext in ["csv", "dot", "graphml"] {
        let f = dir.path().join(format!("report.{ext}"));
        assert!(std::fs::metadata(&f).unwrap().len() > 0, "{ext}");
    }
    graphviz_rust::parse(&std::fs::read_to_string(dir.path().join("report.dot")).unwrap()).unwrap();
}

#[test]
fn empty_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = netcx(&["analyze", "--dialect", "k8s", "--input", p(dir.path())]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn incomplete_taxonomy_names_the_missing_type() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    ok(&["generate", "--topology", "k8s-3", "--out", p(&gen)]);
    let tax = dir.path().join("tax.txt");
    let text: String = netcx::taxonomy::Taxonomy::builtin_text()
        .lines()
        .filter(|l| !(l.starts_with("k8s ") && l.contains(" namespace ")))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&tax, text).unwrap();
    let out = netcx(&["analyze", "--dialect", "k8s", "--input", p(&gen), "--taxonomy", p(&tax)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`namespace`"), "{err}");
}

#[test]
fn tables_reject_graph_formats() {
    let out = netcx(&["reproduce", "--format", "dot"]);
    assert!(!out.status.success());
    let out = netcx(&["analyze", "--dialect", "mainframe", "--input", "x"]);
    assert_eq!(out.status.code(), Some(2));
}
