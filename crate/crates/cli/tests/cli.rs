use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn d4check(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d4check")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn worked_example_passes() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = d4check(&["--dfield", "145", "--cond", "1", "--coeffs", "4", "--report", rep.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&rep);
    assert_eq!(v["rho"]["residue"], 128);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["input"]["splitting"], "split");
    assert!(v.get("timings").is_none());
    // stdout carries the same report
    let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(printed, v);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(code(&d4check(&["--dfield", "44", "--cond", "3", "--coeffs", "3", "--report", p.to_str().unwrap()])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn single_coefficient() {
    assert_eq!(code(&d4check(&["--dfield", "5", "--cond", "21", "--coeffs", "1"])), 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&d4check(&[])), 2);
    assert_eq!(code(&d4check(&["--dfield", "145"])), 2);
    assert_eq!(code(&d4check(&["--dfield", "145", "--cond", "1", "--convention", "sideways"])), 2);
    assert_eq!(code(&d4check(&["--dfield", "145", "--cond", "1", "--backend", "magic"])), 2);
    assert_eq!(code(&d4check(&["--dfield", "18", "--cond", "1"])), 2);
    assert_eq!(code(&d4check(&["--dfield", "145", "--cond", "1", "--dk", "5", "--character-index", "0"])), 2);
    assert_eq!(code(&d4check(&["--corpus", "@reference", "--dfield", "5"])), 2);
    assert_eq!(code(&d4check(&["--corpus", "@reference", "--jobs", "0"])), 2);
}

#[test]
fn bad_moments_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.txt");
    std::fs::write(&f, "moments 145 1 not-an-ideal\n").unwrap();
    let arg = format!("moments:{}", f.display());
    assert_eq!(code(&d4check(&["--dfield", "145", "--cond", "1", "--backend", &arg])), 2);
    let missing = format!("moments:{}", dir.path().join("absent.txt").display());
    assert_ne!(code(&d4check(&["--dfield", "145", "--cond", "1", "--backend", &missing])), 0);
}

#[test]
fn empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    let rep = dir.path().join("r.json");
    std::fs::write(&f, "# nothing here\n").unwrap();
    assert_eq!(code(&d4check(&["--corpus", f.to_str().unwrap(), "--report", rep.to_str().unwrap()])), 0);
    assert_eq!(json(&rep)["summary"]["rows"], 0);
}

#[test]
fn corpus_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    std::fs::write(&f, "44 3 2732361984 ramified\n145 1 442050625 split\n5 16 2621440000 inert negative\n").unwrap();
    let mut outs = Vec::new();
    for jobs in ["1", "2"] {
        let rep = dir.path().join(format!("r{jobs}.json"));
        let o = d4check(&["--corpus", f.to_str().unwrap(), "--coeffs", "2", "--jobs", jobs, "--report", rep.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        outs.push((o.stdout, std::fs::read(&rep).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let v: Value = serde_json::from_slice(&outs[0].1).unwrap();
    assert_eq!(v["summary"]["as_expected"], 3);
}

#[test]
fn negative_control_succeeds_by_failing() {
    let o = d4check(&["--dfield", "5", "--cond", "16", "--coeffs", "2", "--negative-control"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], false);
    assert_eq!(v["input"]["dihedral"], false);
}

#[test]
fn insufficient_work_precision_exits_3() {
    assert_eq!(code(&d4check(&["--dfield", "145", "--cond", "1", "--work-prec", "12"])), 3);
}
