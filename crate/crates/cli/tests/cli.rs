use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn futs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_futs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> &str {
    std::str::from_utf8(&o.stderr).unwrap()
}

#[test]
fn equiv_verdicts_and_exit_codes() {
    let c1 = fixture("c1.ctmc");
    let o = futs(&["equiv", &c1, "s1", "s2"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "bisimilar\n"));
    let o = futs(&["equiv", &c1, "s0", "u"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "not-bisimilar\n"));
    let o = futs(&["equiv", &c1, "s0", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown state `nope`"));
}

#[test]
fn check_reports_witness() {
    let o = futs(&["check", &fixture("c1.ctmc"), "--relation", &fixture("all-one-block.rel")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "not-a-bisimulation\nwitness: s0 u\ncomponent: 1\nlabel: delta\nclass: {s0 s1 s2 u}\nvalues: 2 0\n"
    );
    let o = futs(&["check", &fixture("c1.ctmc"), "--relation", &fixture("c1-coarsest.rel")]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "bisimulation\n"));
}

#[test]
fn json_mirrors_text() {
    let o = futs(&["--json", "check", &fixture("c1.ctmc"), "--relation", &fixture("all-one-block.rel")]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "check");
    assert_eq!(v["bisimulation"], false);
    assert_eq!(v["witness"]["left"], "s0");
    assert_eq!(v["witness"]["right"], "u");
    assert_eq!(v["witness"]["left_value"], "2");

    let o = futs(&["minimize", "--json", &fixture("c1.ctmc")]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["partition"], serde_json::json!([["s0"], ["s1", "s2"], ["u"]]));
    let text = futs(&["minimize", &fixture("c1.ctmc")]);
    assert!(stdout(&text).ends_with(v["quotient"].as_str().unwrap()));

    let o = futs(&["--json", "crosscheck", &fixture("p1.pa")]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["relations_checked"], 52);
}

#[test]
fn oracle_respects_cap() {
    let o = futs(&["oracle", &fixture("m1.ma")]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "{s t}\n{u v}\n{w}\n"));
    let o = futs(&["--max-brute", "4", "oracle", &fixture("m1.ma")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceed the brute-force cap of 4"));
}

#[test]
fn quiet_prints_nothing() {
    let o = futs(&["--quiet", "equiv", &fixture("c1.ctmc"), "s0", "u"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn input_errors_exit_two_with_position() {
    let o = futs(&["minimize", &fixture("substochastic.dtmc")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("substochastic.dtmc:4:1: outgoing probability of `s` is 1/2, not 1"));
    assert!(o.stdout.is_empty());
    let o = futs(&["minimize", "/nonexistent/model.lts"]);
    assert_eq!(o.status.code(), Some(2));
    let o = futs(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = futs(&["check", &fixture("c1.ctmc")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_output_is_a_valid_model() {
    for kind in ["lts", "ctmc", "dtmc", "imc", "pa", "ma", "futs"] {
        let o = futs(&["gen", kind, "--seed", "5", "--states", "3", "--density", "0.5"]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        let text = stdout(&o);
        assert!(text.starts_with(&format!("kind {kind}\n")));
        futs::model_io::parse_model(text).unwrap();
    }
    let o = futs(&["gen", "lts", "--states", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
