use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topogroup")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lattice_lists_canonical_indices() {
    let o = run(&["lattice", "--group", "sym:3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("sym:3: 6 subgroups"));
    assert!(text.contains("#4 (order 3)"));

    let o = run(&["--format", "json", "lattice", "--group", "sym:3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 6);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["lattice", "--group", "bogus:3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["closure", "--group", "sym:3", "--sys", "normal", "--subgroup", "#99"]).status.code(), Some(2));
    let o = run(&["theorems", "--group", "nonsense:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn toposys_verify() {
    let o = run(&["toposys", "--group", "sym:3", "--sys", "generated:#1,#2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn hausdorff_witness_on_normal_s3() {
    let o = run(&["--format", "json", "hausdorff", "--group", "sym:3", "--sys", "normal"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hausdorff"], false);
    assert!(v["witness"].is_object());
    let o = run(&["--format", "json", "hausdorff", "--group", "sym:3", "--sys", "discrete"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hausdorff"], true);
}

#[test]
fn closure_reports_limits() {
    let o = run(&["--format", "json", "closure", "--group", "sym:3", "--sys", "normal", "--subgroup", "#4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["closure"], 5);
}

#[test]
fn cover_failure_exits_1() {
    let o = run(&["cover", "--group", "sym:3", "--sys", "discrete", "--cover", "#1,#2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["cover", "--group", "sym:3", "--sys", "discrete", "--cover", "#1,#2,#3,#4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn filters_and_convergence() {
    let o = run(&["--format", "json", "filters", "--group", "cyclic:4"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ultrafilters"].as_array().unwrap().len(), 2);

    let o = run(&["--format", "json", "converge", "--group", "sym:3", "--sys", "normal", "--filter", "principal:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["cyclically_distinct_pair"].is_array());

    let o = run(&["converge", "--group", "sym:3", "--sys", "normal", "--filter", "principal:3", "--point", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn product_certificates() {
    let o = run(&["product", "--group", "product(cyclic:2,sym:3)", "--sys", "toposys=generated:#1,normal"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["product", "--group", "product(cyclic:2,sym:3)", "--sys", "discrete"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theorems_json_stream_is_deterministic() {
    let args = ["--format", "json", "theorems", "--suite", "hausdorff-equivalence", "--max-order", "12"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|r| r["check"] == "hausdorff-equivalence" && r["status"] == "pass"));
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn theorems_single_cell_from_config() {
    let dir = std::env::temp_dir().join(format!("topogroup-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("suite.conf");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# one cell\ngroups = sym:3\nsystems = normal\nsuites = hausdorff-equivalence").unwrap();
    let o = run(&["theorems", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let reports: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(reports.len(), 1, "{text}");
    assert!(reports[0].contains("sym:3") && reports[0].contains("normal"));

    std::fs::write(&path, "max_order = lots\n").unwrap();
    assert_eq!(run(&["theorems", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
