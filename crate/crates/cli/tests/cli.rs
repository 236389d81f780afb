use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn corpus(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    root.join(name).to_string_lossy().into_owned()
}

fn realiz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realiz")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn classify_trivial_equation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.sexp");
    std::fs::write(&file, "(= 0 0)").unwrap();
    let out = realiz(&["classify", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let classes = r["classes"].as_object().unwrap();
    assert!(!classes.is_empty() && classes.values().all(|v| v == true), "{r}");
    assert_eq!(r["seed"], 0);
}

#[test]
fn constant_zero_alpha_exhausts_fuel() {
    let out = realiz(&["eval-app", "--alpha", "zeros", "--beta", "[1,2,3]", "--fuel", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["result"]["outcome"], "fuel-exhausted");
    assert_eq!(r["status"], "open");
}

#[test]
fn cramer_unipotent() {
    let out = realiz(&["demo", "cramer", "[[1,1],[0,1]]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["inverse"], serde_json::json!([["1", "-1"], ["0", "1"]]));
    assert_eq!(r["determinant"], "1");
}

#[test]
fn reports_are_deterministic_and_carry_the_seed() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["omega", "--seed", "17", "--mode", "lrf"],
        vec!["check", "--seed", "17", "--realizer", "[2]"],
        vec!["demo", "--seed", "17", "fta"],
    ];
    let (bounded, three, env, poly) =
        (corpus("bounded.sexp"), corpus("find_three.sexp"), corpus("env.json"), corpus("x2_minus_2.json"));
    for mut args in runs {
        match args[0] {
            "omega" => args.extend([bounded.as_str(), "--env", env.as_str()]),
            "check" => args.extend([three.as_str(), "--env", env.as_str()]),
            _ => args.push(poly.as_str()),
        }
        let (a, b) = (realiz(&args), realiz(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(report(&a)["seed"], 17);
    }
}

#[test]
fn exit_codes_over_the_demo_corpus() {
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["demo".into(), "dichotomy".into(), corpus("pairs.json"), "--depth".into(), "30".into()], 0),
        (vec!["demo".into(), "trichotomy".into(), corpus("pairs.json")], 2),
        (vec!["demo".into(), "trichotomy".into(), r#"[["1/3","1/2"]]"#.into()], 0),
        (vec!["demo".into(), "trichotomy".into(), r#"{"lpo": [0,0,5]}"#.into()], 0),
        (vec!["demo".into(), "trichotomy".into(), r#"{"lpo": "zeros"}"#.into(), "--fuel".into(), "50".into()], 2),
        (vec!["demo".into(), "dedekind".into(), r#"[{"sqrt":"3"}, "-5/2"]"#.into(), "--depth".into(), "32".into()], 0),
        (vec!["demo".into(), "sqrt".into(), corpus("gaussians.json")], 0),
        (vec!["demo".into(), "fta".into(), corpus("x2_minus_2.json")], 0),
        (vec!["demo".into(), "cramer".into(), corpus("unipotent.json")], 0),
        (vec!["demo".into(), "cramer".into(), "[[1,2],[2,4]]".into()], 1),
        (vec!["demo".into(), "fta".into(), "[]".into()], 1),
        (vec!["demo".into(), "dichotomy".into(), "not json".into()], 1),
        (vec!["demo".into(), "nonsense".into(), "[]".into()], 1),
        (vec!["compact".into(), "path".into(), "--code".into(), "cut-off:3".into(), "--depth".into(), "5".into()], 0),
        (vec!["omega".into(), corpus("find_three.sexp")], 1),
        (vec!["omega".into(), corpus("choice.sexp")], 0),
        (vec!["omega".into(), corpus("lpo_instance.sexp"), "--env".into(), corpus("env.json")], 1),
        (vec!["parse".into(), corpus("lpo_instance.sexp")], 0),
    ];
    for (args, want) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = realiz(&args);
        assert_eq!(out.status.code(), Some(want), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if want != 1 {
            assert_eq!(report(&out)["status"], if want == 0 { "definite" } else { "open" }, "{args:?}");
        }
    }
}

#[test]
fn empty_code_reports_empty_at_depth() {
    let out = realiz(&["compact", "path", "--code", "cut-off:3", "--depth", "5"]);
    let r = report(&out);
    assert_eq!(r["nonemptiness"]["status"], "empty-at-depth");
    assert_eq!(r["path"], Value::Null);
}

#[test]
fn extraction_through_the_command_line() {
    let hyp = corpus("hyp_small.sexp");
    let out = realiz(&["extract", "--hyp", &hyp, "--realizer", "choice:double", "--xi", "[1,2,3]", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["zeta"], serde_json::json!([2, 4, 6, 0, 0]));
    let out = realiz(&[
        "extract", "--hyp", &hyp, "--realizer", "lchoice:succ", "--xi", "[1,2,3]", "--depth", "4", "--mode", "lrf",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["witness_prefixes"], serde_json::json!([[2, 3, 4, 1]]));
}

#[test]
fn translation_reports_its_class() {
    let out = realiz(&["translate", &corpus("choice.sexp"), "--mode", "lrf", "--realizer", "rho"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["classes"]["nl"], true);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(realiz(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(realiz(&["eval-app", "--alpha", "zeros"]).status.code(), Some(1));
    assert_eq!(realiz(&["--help"]).status.code(), Some(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trichotomy_is_open_exactly_on_ties(a in -20i64..20, b in -20i64..20, da in 1i64..6, db in 1i64..6) {
        let input = format!(r#"[["{a}/{da}","{b}/{db}"]]"#);
        let out = realiz(&["demo", "trichotomy", &input, "--fuel", "30"]);
        let tie = a * db == b * da;
        prop_assert_eq!(out.status.code(), Some(if tie { 2 } else { 0 }));
    }
}
