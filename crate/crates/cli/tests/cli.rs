use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn meshdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshdist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = meshdist(&a);
    assert!(o.status.code().is_some_and(|c| c <= 1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn validate(v: &Value) {
    let cmd = v["command"].as_str().unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{cmd}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{cmd}: {errors:?}");
}

#[test]
fn count_example() {
    let o = meshdist(&["count", "--pattern", "231:", "--perm", "32154"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn classify_reports_105_classes() {
    let v = json_of(&["classify", "--depth", "7"]);
    assert_eq!(v["distribution_classes"], 105);
    assert_eq!(v["proven_blocks"], 108);
}

#[test]
fn bijection_check_and_injected_fault() {
    let ok = meshdist(&["verify-bijections", "--name", "bij75", "--depth", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = meshdist(&["verify-bijections", "--name", "bij75", "--depth", "6", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("fails: "));
    let v = json_of(&["verify-bijections", "--name", "bij75", "--depth", "6", "--inject-fault"]);
    let input = v["results"][0]["involution"]["input"].as_str().unwrap();
    assert!(input.parse::<meshdist::Permutation>().is_ok());
}

#[test]
fn exit_codes() {
    assert_eq!(meshdist(&["count", "--bogus"]).status.code(), Some(2));
    assert_eq!(meshdist(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(meshdist(&["count", "--pattern", "12:33", "--perm", "12"]).status.code(), Some(2));
    assert_eq!(meshdist(&["bijection", "--name", "nope", "--perm", "12"]).status.code(), Some(2));
    assert_eq!(meshdist(&["distribution", "--pattern", "12:", "--depth", "10"]).status.code(), Some(3));
    assert_eq!(meshdist(&["classify", "--depth", "10"]).status.code(), Some(3));
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["classify", "--depth", "6", "--json"][..],
        &["regen-appendix", "--depth", "6"],
        &["verify-bijections", "--depth", "5", "--json"],
        &["wilf", "--depth", "6"],
    ] {
        let a = meshdist(args);
        let b = meshdist(&[&["--threads", "1"][..], args].concat());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_outputs_match_schemas() {
    let runs: &[&[&str]] = &[
        &["count", "--pattern", "12:00", "--perm", "2413", "--list"],
        &["count", "--pattern", "12:00", "--perm", "2413"],
        &["distribution", "--pattern", "12:00,11", "--depth", "5"],
        &["avoidance", "--pattern", "12:00,11", "--depth", "5"],
        &["joint", "--first", "12:01,12,22", "--second", "12:00,12,22", "--depth", "5"],
        &["classify", "--depth", "6"],
        &["wilf", "--depth", "6"],
        &["orbit", "--pattern", "132:12"],
        &["verify-formulas", "--depth", "6"],
        &["verify-gf", "--depth", "6"],
        &["verify-bijections", "--depth", "5"],
        &["verify-bijections", "--depth", "5", "--name", "bij46", "--inject-fault"],
        &["verify-conjectures", "--depth", "6"],
        &["series", "--gf", "point", "--order", "5"],
        &["series", "--gf", "47", "--order", "5"],
        &["bijection", "--name", "bij73", "--perm", "8,2,9,7,10,6,4,3,1,5"],
        &["regen-appendix", "--depth", "4"],
    ];
    let mut seen = std::collections::BTreeSet::new();
    for args in runs {
        let v = json_of(args);
        seen.insert(v["command"].as_str().unwrap().to_string());
        validate(&v);
    }
    assert_eq!(seen.len(), 14);
}

#[test]
fn appendix_rows_partition_each_symmetric_group() {
    let o = meshdist(&["regen-appendix", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["class_id", "n", "k", "count"]);
    let mut sums = std::collections::BTreeMap::<(u32, u64), u64>::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        *sums.entry((rec[0].parse().unwrap(), rec[1].parse().unwrap())).or_default() += rec[3].parse::<u64>().unwrap();
    }
    assert_eq!(sums.len(), 105 * 5);
    for ((_, n), s) in sums {
        assert_eq!(s, (1..=n).product::<u64>());
    }
}

#[test]
fn bijection_prints_counts() {
    let o = meshdist(&["bijection", "--name", "bij46", "--perm", "23471856"]);
    let s = stdout(&o);
    assert!(s.starts_with("input\t23471856\noutput\t23457816\n"), "{s}");
}

#[test]
fn formulas_verify_and_printed_forms_are_refuted() {
    let o = meshdist(&["verify-formulas", "--depth", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(!s.lines().any(|l| l.starts_with("FAIL")));
    assert!(s.contains("REFUTED (as printed)\tclass 2\tclass2-printed"));
    assert_eq!(meshdist(&["verify-gf"]).status.code(), Some(0));
    assert_eq!(meshdist(&["verify-conjectures", "--depth", "7"]).status.code(), Some(0));
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_meshdist"))
            .args(["distribution", "--pattern", "12:01,12", "--depth", "6"])
            .env("MESHDIST_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let file = dir.path().join("distributions.jsonl");
    let lines = std::fs::read_to_string(&file).unwrap().lines().count();
    assert_eq!(lines, 7);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), lines);
}
