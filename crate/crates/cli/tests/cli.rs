use std::path::Path;
use std::process::{Command, Output};

use planecurve::curvecat::lookup;
use planecurve::report::AnalysisReport;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planecurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn table_values(o: &Output) -> Vec<i64> {
    stdout(o)
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_triangle_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("triangle.json");
    let o = run(&["analyze", "triangle", "--json", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["freeness"]["free"], true);
    assert_eq!(v["freeness"]["exponents"], serde_json::json!([1, 1]));
    assert_eq!(v["stability"]["stable"], false);
    assert_eq!(v["alpha"], "1");
}

#[test]
fn json_roundtrip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["zariski_sextic", "nodal_cubic", "fermat4", "nine_cusp_sextic"] {
        let out = dir.path().join(format!("{name}.json"));
        assert_eq!(code(&run(&["analyze", name, "--json", path_str(&out)])), 0);
        let text = std::fs::read_to_string(&out).unwrap();
        let report = AnalysisReport::from_json(&text).unwrap();
        assert_eq!(format!("{}\n", report.to_json()), text, "{name}");
    }
}

#[test]
fn zariski_relations_start_in_degree_three() {
    let o = run(&["analyze", "zariski_sextic", "--json", "-"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let json_start = text.find("{\n").unwrap();
    let report = AnalysisReport::from_json(&text[json_start..]).unwrap();
    let ar: Vec<usize> = (0..=3).map(|k| report.row(k).unwrap().ar).collect();
    assert_eq!(&ar[..3], &[0, 0, 0]);
    assert!(ar[3] >= 1);
    let o = run(&["table", "ar", "zariski_sextic", "0..3"]);
    let vals = table_values(&o);
    assert_eq!(&vals[..3], &[0, 0, 0]);
    assert!(vals[3] >= 1);
}

#[test]
fn unresolvable_input_is_a_usage_error() {
    assert_eq!(code(&run(&["analyze", "missing.curve"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["table", "betti", "triangle", "0..3"])), 1);
    assert_eq!(code(&run(&["table", "ar", "triangle", "3..1"])), 1);
    assert_eq!(code(&run(&["analyze", "nine_d4_nonic", "--max-degree", "4"])), 1);
}

#[test]
fn tables() {
    assert_eq!(table_values(&run(&["table", "milnor", "fermat3", "0..3"])), [1, 3, 3, 1]);
    assert_eq!(table_values(&run(&["table", "defect", "triangle", "0..2"])), [2, 0, 0]);
    let ar = table_values(&run(&["table", "ar", "triangle", "0..3"]));
    assert_eq!(&ar[..2], &[0, 2]);
    let h1 = table_values(&run(&["table", "h1", "triangle", "-3..3"]));
    assert!(h1.iter().all(|&v| v == 0));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    assert_eq!(code(&run(&["table", "h0", "nodal_cubic", "0..2", "--json", path_str(&out)])), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["invariant"], "h0");
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
}

#[test]
fn corpus_full_run_passes() {
    let o = run(&["corpus"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    let passing = text.lines().filter(|l| l.starts_with("pass ")).count();
    assert!(passing >= 15);
    assert!(!text.contains("FAIL"));
}

#[test]
fn corpus_filter_free() {
    let o = run(&["corpus", "--filter", "free"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("pass "))
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect();
    assert_eq!(names, ["triangle", "a1_arrangement", "dual_hesse"]);
    assert_eq!(code(&run(&["corpus", "--filter", "no_such_tag"])), 1);
}

#[test]
fn corpus_parallel_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.json");
    let parallel = dir.path().join("parallel.json");
    let again = dir.path().join("again.json");
    assert_eq!(code(&run(&["corpus", "--json", path_str(&serial)])), 0);
    assert_eq!(code(&run(&["corpus", "--parallel", "--json", path_str(&parallel)])), 0);
    assert_eq!(code(&run(&["corpus", "--parallel", "--json", path_str(&again)])), 0);
    let a = std::fs::read_to_string(&serial).unwrap();
    assert_eq!(a, std::fs::read_to_string(&parallel).unwrap());
    assert_eq!(a, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn corpus_max_degree() {
    let o = run(&["corpus", "--max-degree", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("one_node_quartic"));
    assert!(!text.contains("zariski_sextic"));
}

#[test]
fn curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("cubic.curve");
    std::fs::write(&good, lookup("nodal_cubic").unwrap().to_file_string()).unwrap();
    let o = run(&["analyze", path_str(&good)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("tau = 1"));

    // a node declared where the curve is smooth
    let bad = dir.path().join("bad.curve");
    std::fs::write(&bad, "name = bad\nf = y^2*z-x^2*(x+z)\nsing = (1:0:1) A1\n").unwrap();
    let o = run(&["analyze", path_str(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("FAILED"));

    let garbage = dir.path().join("garbage.curve");
    std::fs::write(&garbage, "f = x^^2\n").unwrap();
    assert_eq!(code(&run(&["analyze", path_str(&garbage)])), 1);
}

#[test]
fn verdict_subcommands() {
    let o = run(&["torelli", "one_node_quartic"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("torelli@1"));
    assert!(stdout(&o).contains("matches"));
    let o = run(&["torelli", "nodal_cubic"]);
    assert!(stdout(&o).contains("obstructed"));
    let o = run(&["torelli", "nine_d4_nonic"]);
    assert!(stdout(&o).contains("not applicable"));

    let o = run(&["stability", "zariski_sextic"]);
    assert!(stdout(&o).starts_with("stable: yes"));
    let o = run(&["stability", "cuspidal_cubic"]);
    assert!(stdout(&o).starts_with("stable: no"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("free.json");
    let o = run(&["freeness", "a1_arrangement", "--json", path_str(&out)]);
    assert!(stdout(&o).contains("free: yes with exponents (2,3)"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["freeness"]["exponents"], serde_json::json!([2, 3]));
    assert_eq!(v["freeness"]["method_agreement"], true);
}
