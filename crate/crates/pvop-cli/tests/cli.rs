//! End-to-end tests of the `pvop` binary.

use std::process::{Command, Output};

fn pvop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn examples_all_pass() {
    let out = pvop(&["examples"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("10 fixtures: 10 PASS, 0 FAIL"), "{text}");
    for name in [
        "descent_cone_cubic",
        "axis_cubics",
        "nested_quadratics",
        "separable_squares",
        "exp_bounded_sector",
        "mixed_cubic_drop",
        "unbounded_ridge",
        "hyperbola_shift",
        "vanishing_infimum",
        "box_ray",
    ] {
        assert!(text.contains(&format!("{name}: PASS")), "{name} in {text}");
    }
}

#[test]
fn fixture_outputs_are_byte_stable() {
    let first = pvop(&["examples", "--seed", "7"]);
    let second = pvop(&["examples", "--seed", "7"]);
    assert_eq!(first.stdout, second.stdout);

    let a = pvop(&["check", "fixture:descent_cone_cubic"]);
    let b = pvop(&["check", "fixture:descent_cone_cubic"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_reports_and_exit_codes() {
    let out = pvop(&["check", "fixture:descent_cone_cubic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("strong-regular: yes (recession weak front empty"), "{text}");
    assert!(text.contains("precheck: weak front of the instance is empty"), "{text}");
    assert!(text.contains("verdicts: decided"), "{text}");

    // Strong-No instances still decide; inconclusive weak verdicts exit 2.
    let out = pvop(&["check", "fixture:axis_cubics"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("weak-regular: inconclusive"), "{text}");
}

#[test]
fn solve_rejects_non_positive_lambda() {
    let out = pvop(&["solve", "fixture:hyperbola_shift", "--lambda", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("lambda must be strictly positive"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn solve_finds_certified_corner() {
    let out = pvop(&[
        "solve",
        "fixture:hyperbola_shift",
        "--lambda",
        "1,2",
        "--oracle-check",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("status: found"), "{text}");
    assert!(text.contains("oracle-check: certified"), "{text}");
}

#[test]
fn oracle_emits_csv() {
    let out = pvop(&["oracle", "fixture:hyperbola_shift", "--resolution", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,f1,f2,pareto,weak_pareto"));
    // 11x11 feasible nodes plus the header.
    assert_eq!(text.lines().count(), 122);
    // Exactly one Pareto row, at the corner.
    let pareto_rows: Vec<&str> = text
        .lines()
        .filter(|l| l.ends_with(",1,1"))
        .collect();
    assert_eq!(pareto_rows, vec!["1,1,2,1,1,1"]);
}

#[test]
fn stability_summary_and_csv() {
    let out = pvop(&[
        "stability",
        "fixture:exp_bounded_sector",
        "--mode",
        "lower-degree",
        "--trials",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("trial,epsilon,flipped,empty_certified,radius,note"), "{text}");
    assert_eq!(text.lines().count(), 6);
    let summary = stderr(&out);
    assert!(summary.contains("verdict-flips: 0"), "{summary}");
}

#[test]
fn missing_instance_fails_cleanly() {
    let out = pvop(&["check", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error"));

    let out = pvop(&["check", "fixture:no_such_fixture"]);
    assert_eq!(out.status.code(), Some(1));
}
