use std::process::{Command, Output};

use serde_json::Value;

const TWO_CHART: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/two_chart.toml");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberstar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn products_on_the_flat_default() {
    assert_eq!(
        stdout(&["star", "--kappa", "1/2", "q1", "p1"]),
        "q1*p1 + (1/2)*i*l\n"
    );
    assert_eq!(stdout(&["comm", "--kappa", "0", "q1", "p1"]), "i*l\n");
    assert_eq!(stdout(&["star", "q1", "p1"]), "q1*p1\n");
    assert_eq!(
        stdout(&["star", "--kappa", "1", "q1", "p1"]),
        "q1*p1 + i*l\n"
    );
}

#[test]
fn json_carries_the_text_payload() {
    let text = stdout(&["star", "--kappa", "1/2", "q1^2", "p1^2"]);
    let json: Value = serde_json::from_str(&stdout(&[
        "star", "--kappa", "1/2", "--format", "json", "q1^2", "p1^2",
    ]))
    .unwrap();
    assert_eq!(json["result"].as_str().unwrap(), text.trim());
    assert_eq!(json["kappa"], "1/2");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["star", "q1", "p1/q1"],
        vec!["star", "--kappa", "3/2", "q1", "p1"],
        vec!["verify", "nope"],
        vec!["rep", "p1", "p1"],
        vec!["wkb", "p1^2", "--a0", "q1"],
        vec!["star", "--geometry", "/nonexistent.toml", "q1", "p1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn representation_follows_the_transitions() {
    let out = stdout(&[
        "rep",
        "--geometry",
        TWO_CHART,
        "--kappa",
        "1/2",
        "--order",
        "3",
        "p1",
        "q1^2",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "{out}");
    assert!(lines[0].starts_with("a: "), "{out}");
    assert!(
        lines[1].starts_with("b: ") && lines[1].contains("exp((i/l)*("),
        "{out}"
    );
}

#[test]
fn suites_on_a_geometry_file_are_reproducible() {
    let args = [
        "verify",
        "weyl",
        "gluing",
        "--geometry",
        TWO_CHART,
        "--order",
        "3",
        "--samples",
        "4",
        "--seed",
        "3",
    ];
    let first = run(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(first.stdout, run(&args).stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(
        text.contains("chart b") && text.ends_with("PASS\n"),
        "{text}"
    );
    let json: Value =
        serde_json::from_str(&stdout(&[&args[..], &["--format", "json"]].concat())).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn wkb_transport_hierarchy() {
    let out = stdout(&[
        "wkb",
        "(1/2)*p1^2 + (1/2)*p2^2",
        "--a0",
        "q1",
        "0",
        "--order",
        "2",
        "--energy",
        "0",
    ]);
    assert!(out.starts_with("symbol: "), "{out}");
    assert!(out.contains("order 1: "), "{out}");
    assert!(out.contains("H(q, A0) - E: (1/2)*q1^2"), "{out}");
}
