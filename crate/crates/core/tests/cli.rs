use serde_json::Value;
use splitdyn::cli::main_with_args;

fn run(args: &[&str]) -> (i32, String) {
    main_with_args(std::iter::once("splitdyn").chain(args.iter().copied()))
}

fn report(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).unwrap()
}

fn height(map: &str, point: &str) -> f64 {
    report(&["height", "--map", map, "--point", point])["result"]["value"].as_f64().unwrap()
}

#[test]
fn heights_of_known_points() {
    assert!((height("z2m2", "3/1") - 0.9624236501).abs() < 1e-8);
    assert!((height("z2", "7/5") - 7f64.ln()).abs() < 1e-8);
    assert_eq!(height("z2", "1/1"), 0.0);
}

#[test]
fn classify_and_dky() {
    let r = report(&["classify", "--map", "z3"]);
    assert_eq!(r["result"]["class"]["tag"], "PowerConjugate");
    let r = report(&["dky", "--t1", "0", "--t2=-2"]);
    assert_eq!(r["result"]["cells"][0]["count"], 4);
}

#[test]
fn energy_separates_distinct_maps() {
    let r = report(&["--width", "3000", "energy", "--map1", "z2", "--map2", "z2m2"]);
    assert_eq!(r["result"]["decision"], "NotEqual");
}

#[test]
fn report_echoes_config() {
    let r = report(&["--seed", "7", "--tol", "1e-9", "--budget-m", "2", "--budget-n", "3", "prep", "--map", "z2"]);
    let c = &r["config"];
    assert_eq!(c["seed"], 7);
    assert_eq!(c["tol"], 1e-9);
    assert_eq!(c["budget_m"], 2);
    assert_eq!(c["budget_n"], 3);
    assert_eq!(c["command"]["name"], "prep");
    assert_eq!(r["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn csv_has_comment_header() {
    let (code, out) = run(&["--emit", "csv", "prep", "--map", "z2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# command="));
    assert!(lines.next().unwrap().starts_with("# config="));
    assert!(lines.next().unwrap().starts_with("# input_sha256="));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deg.json");
    std::fs::write(&path, r#"{"num":[0,0,1],"den":[0,0,1]}"#).unwrap();
    assert_eq!(run(&["classify", "--map", path.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["--budget-n", "40", "prep", "--map", "z2"]).0, 3);
    assert_eq!(run(&["height", "--map", "z2"]).0, 1);
    assert_eq!(run(&["height", "--map", "nope.json", "--point", "1/1"]).0, 1);
}
