//! Subcommand implementations, shared by `main` and the test suites.

use anyhow::{anyhow, bail, Result};

use pvop_core::oracle::{feasible_grid, grid_front, GridWindow};
use pvop_core::regularity::{
    analyze_regularity, wvcp_r0_check, AnalyzerOptions, StrongReason, StrongVerdict, VerdictKind,
};
use pvop_core::sets::{sample_base, validate_declared_cone, SetKind};
use pvop_core::solver::{
    bounded_front_radius, certify_pareto, precheck_emptiness, solve, SolveOptions, SolveStatus,
};
use pvop_core::stability::{
    closed_graph_probe, local_boundedness_probe, lower_degree_invariance, small_norm_persistence,
    PerturbationMode, PerturbationSpec, StabilityReport, DEFAULT_EPSILON_GRID,
};
use pvop_core::vecmath::{dist, lex_cmp};

use crate::fixtures::FIXTURES;
use crate::instance::Instance;
use crate::render::{format_vec, r0_text, regularity_text, solve_text};

/// Exit code signalling an inconclusive (but well-formed) outcome.
pub const EXIT_INCONCLUSIVE: i32 = 2;

pub fn run_check(inst: &Instance, opts: &AnalyzerOptions, validate_cone: bool) -> (String, i32) {
    let mut out = String::new();
    if let Some(note) = &inst.note {
        out.push_str(&format!("note: {note}\n"));
    }
    let report = analyze_regularity(&inst.f, &inst.set, opts);
    out.push_str(&regularity_text(&report));
    let cone = inst.set.asymptotic_cone();
    let sample = sample_base(&cone, opts.samples, opts.seed);
    let r0 = wvcp_r0_check(&inst.f, &cone, &sample, opts.tol_pos);
    out.push_str(&r0_text(&r0));
    if !inst.set.is_polyhedral() {
        out.push_str(
            "note: the complementarity implication needs a convex set; this set is not polyhedral\n",
        );
    }
    if let Some(pre) = precheck_emptiness(&report) {
        out.push_str("precheck: weak front of the instance is empty\n");
        for line in &pre.certificate {
            out.push_str(&format!("  - {line}\n"));
        }
    }
    if validate_cone {
        if let SetKind::Custom { .. } = inst.set.kind() {
            let validation = validate_declared_cone(&inst.set, &cone, 12, opts.seed);
            out.push_str(&format!(
                "declared-cone validation: {} ({} directions, {} failures; heuristic)\n",
                if validation.passed { "pass" } else { "FAIL" },
                validation.checks.len(),
                validation.failures().count()
            ));
        } else {
            out.push_str("declared-cone validation: skipped (recession cone is exact)\n");
        }
    }
    let code = if report.is_decided() { 0 } else { EXIT_INCONCLUSIVE };
    out.push_str(&format!(
        "verdicts: {}\n",
        if report.is_decided() { "decided" } else { "inconclusive" }
    ));
    (out, code)
}

pub struct SolveArgs {
    pub lambda: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
    pub starts: usize,
    pub r_max: f64,
    pub seed: u64,
    pub oracle_check: bool,
}

impl Default for SolveArgs {
    fn default() -> Self {
        SolveArgs {
            lambda: None,
            x0: None,
            starts: 3,
            r_max: pvop_core::solver::DEFAULT_R_MAX,
            seed: 0,
            oracle_check: false,
        }
    }
}

pub fn run_solve(inst: &Instance, opts: &AnalyzerOptions, args: &SolveArgs) -> Result<(String, i32)> {
    let mut out = String::new();
    let report = analyze_regularity(&inst.f, &inst.set, opts);
    if let Some(pre) = precheck_emptiness(&report) {
        out.push_str(&solve_text(&pre));
        return Ok((out, 0));
    }
    let solve_opts = SolveOptions {
        lambda: args.lambda.clone(),
        x0: Some(args.x0.clone().unwrap_or_else(|| inst.x0.clone())),
        starts: args.starts,
        r_max: args.r_max,
        seed: args.seed,
        ..Default::default()
    };
    let result = solve(&inst.f, &inst.set, &solve_opts).map_err(|e| anyhow!("{e}"))?;
    out.push_str(&solve_text(&result));
    if args.oracle_check {
        match (&result.point, &inst.window) {
            (Some(point), Some(window)) => {
                let cert = certify_pareto(&inst.f, &inst.set, point, window)
                    .map_err(|e| anyhow!("{e}"))?;
                if cert.certified {
                    out.push_str(&format!(
                        "oracle-check: certified against {} feasible nodes{}\n",
                        cert.feasible_checked,
                        if cert.is_vacuous() { " (vacuous)" } else { "" }
                    ));
                } else {
                    let dom = cert.dominator.unwrap();
                    out.push_str(&format!(
                        "oracle-check: REFUTED by {} with values {}\n",
                        format_vec(&dom.x),
                        format_vec(&dom.values)
                    ));
                }
            }
            (None, _) => out.push_str("oracle-check: no point to certify\n"),
            (_, None) => out.push_str("oracle-check: instance has no window\n"),
        }
    }
    let code = match result.status {
        SolveStatus::Unknown => EXIT_INCONCLUSIVE,
        _ => 0,
    };
    Ok((out, code))
}

pub fn run_oracle(inst: &Instance, resolution: Option<usize>) -> Result<(String, i32)> {
    let window = inst
        .window
        .clone()
        .ok_or_else(|| anyhow!("instance has no window; the oracle needs one"))?;
    let window = match resolution {
        Some(r) => GridWindow::new(window.lower.clone(), window.upper.clone(), r)
            .map_err(|e| anyhow!("{e}"))?,
        None => window,
    };
    let front = grid_front(&inst.f, &inst.set, &window).map_err(|e| anyhow!("{e}"))?;
    let pareto_xs: Vec<Vec<f64>> = front.pareto.iter().map(|p| p.x.clone()).collect();
    let weak_xs: Vec<Vec<f64>> = front.weak.iter().map(|p| p.x.clone()).collect();
    let n = inst.f.n();
    let s = inst.f.s();
    let mut out = String::new();
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.extend((1..=s).map(|i| format!("f{i}")));
    header.push("pareto".into());
    header.push("weak_pareto".into());
    out.push_str(&header.join(","));
    out.push('\n');
    feasible_grid(&inst.set, &window, |x| {
        let values = inst.f.eval(x);
        let in_pareto = pareto_xs.binary_search_by(|p| lex_cmp(p, x)).is_ok();
        let in_weak = weak_xs.binary_search_by(|p| lex_cmp(p, x)).is_ok();
        let mut row: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
        row.extend(values.iter().map(|v| format!("{v}")));
        row.push(if in_pareto { "1".into() } else { "0".into() });
        row.push(if in_weak { "1".into() } else { "0".into() });
        out.push_str(&row.join(","));
        out.push('\n');
    })
    .map_err(|e| anyhow!("{e}"))?;
    Ok((out, 0))
}

pub enum StabilityMode {
    LowerDegree,
    SmallNorm { epsilon: f64 },
    LocalBound { delta: f64 },
    ClosedGraph,
}

pub fn run_stability(
    inst: &Instance,
    opts: &AnalyzerOptions,
    mode: StabilityMode,
    trials: usize,
    seed: u64,
) -> Result<(String, String, i32)> {
    let report: StabilityReport = match mode {
        StabilityMode::LowerDegree => {
            let spec = PerturbationSpec {
                mode: PerturbationMode::LowerDegree,
                seed,
                trials,
            };
            lower_degree_invariance(&inst.f, &inst.set, &spec, opts).map_err(|e| anyhow!("{e}"))?
        }
        StabilityMode::SmallNorm { epsilon } => {
            let spec = PerturbationSpec {
                mode: PerturbationMode::SmallNorm { epsilon },
                seed,
                trials,
            };
            let mut grid: Vec<f64> = DEFAULT_EPSILON_GRID.to_vec();
            if !grid.contains(&epsilon) {
                grid.push(epsilon);
            }
            small_norm_persistence(&inst.f, &inst.set, &spec, &grid, opts)
                .map_err(|e| anyhow!("{e}"))?
        }
        StabilityMode::LocalBound { delta } => {
            let spec = PerturbationSpec {
                mode: PerturbationMode::SmallNorm { epsilon: delta },
                seed,
                trials,
            };
            let window = inst
                .window
                .clone()
                .ok_or_else(|| anyhow!("instance has no window; the probe needs one"))?;
            local_boundedness_probe(&inst.f, &inst.set, &spec, delta, &window, opts)
                .map_err(|e| anyhow!("{e}"))?
        }
        StabilityMode::ClosedGraph => {
            let spec = PerturbationSpec {
                mode: PerturbationMode::SmallNorm { epsilon: 0.5 },
                seed,
                trials,
            };
            let window = inst
                .window
                .clone()
                .ok_or_else(|| anyhow!("instance has no window; the probe needs one"))?;
            closed_graph_probe(&inst.f, &inst.set, &spec, None, &window, opts)
                .map_err(|e| anyhow!("{e}"))?
        }
    };
    let mut csv = String::from("trial,epsilon,flipped,empty_certified,radius,note\n");
    for t in &report.per_trial {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t.trial,
            t.epsilon.map(|e| format!("{e}")).unwrap_or_default(),
            t.flipped as u8,
            t.empty_certified as u8,
            t.radius.map(|r| format!("{r}")).unwrap_or_default(),
            t.note.replace(',', ";")
        ));
    }
    let summary = format!(
        "trials: {}\nverdict-flips: {}\nunion-radius: {}\ngraph-violations: {}\nsafe-epsilon: {}\n",
        report.trials,
        report.verdict_flips,
        report
            .union_radius
            .map(|r| format!("{r}"))
            .unwrap_or_else(|| "-".into()),
        report.graph_violations,
        report
            .safe_epsilon
            .map(|e| format!("{e}"))
            .unwrap_or_else(|| "-".into()),
    );
    let code = if report.verdict_flips == 0 && report.graph_violations == 0 {
        0
    } else {
        1
    };
    Ok((csv, summary, code))
}

pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Evaluates every expectation recorded in a fixture. Only fields present
/// in the expected block are checked.
pub fn check_fixture(inst: &Instance, opts: &AnalyzerOptions) -> Result<Vec<CheckOutcome>> {
    let expected = inst
        .expected
        .as_ref()
        .ok_or_else(|| anyhow!("fixture has no expected block"))?;
    let mut outcomes = Vec::new();
    let report = analyze_regularity(&inst.f, &inst.set, opts);

    if let Some(strong) = &expected.strong {
        let got = match &report.strong {
            StrongVerdict::Yes(StrongReason::WeakSolSetIsZero) => "yes_zero",
            StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { .. }) => "yes_empty",
            StrongVerdict::No { .. } => "no",
            StrongVerdict::Inconclusive => "inconclusive",
        };
        outcomes.push(outcome(
            "strong verdict",
            got == strong,
            format!("expected {strong}, got {got}"),
        ));
    }

    if let Some(kinds) = &expected.component_verdicts {
        let got: Vec<&str> = report
            .per_component
            .iter()
            .map(|v| match v.kind {
                VerdictKind::OnlyZero => "only_zero",
                VerdictKind::Empty => "empty",
                VerdictKind::HasNonzero => "has_nonzero",
                VerdictKind::Inconclusive => "inconclusive",
            })
            .collect();
        let want: Vec<&str> = kinds.iter().map(|s| s.as_str()).collect();
        outcomes.push(outcome(
            "component verdicts",
            got == want,
            format!("expected {want:?}, got {got:?}"),
        ));
    }

    if expected.witnesses_on_axes == Some(true) {
        let ok = report.per_component.iter().all(|v| {
            v.witness
                .as_ref()
                .is_some_and(|w| w.iter().any(|c| *c == 0.0))
        });
        outcomes.push(outcome(
            "witnesses on axes",
            ok,
            format!(
                "witnesses {:?}",
                report
                    .per_component
                    .iter()
                    .map(|v| v.witness.clone())
                    .collect::<Vec<_>>()
            ),
        ));
    }

    if expected.strong_witness_all_negative == Some(true) {
        let ok = match &report.strong {
            StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { witness }) => {
                let lead = inst.f.leading_form();
                lead.eval(witness).iter().all(|v| *v < 0.0)
            }
            _ => false,
        };
        outcomes.push(outcome(
            "all-negative descent witness",
            ok,
            String::new(),
        ));
    }

    if let Some(want) = expected.precheck_empty {
        let got = precheck_emptiness(&report).is_some();
        outcomes.push(outcome(
            "emptiness precheck",
            got == want,
            format!("expected {want}, got {got}"),
        ));
    }

    if let Some(lv) = &expected.leading_values_at {
        let values = inst.f.leading_form().eval(&lv.point);
        // Exact reproduction: these are integer-valued evaluations.
        let ok = values == lv.values;
        outcomes.push(outcome(
            "leading values",
            ok,
            format!("expected {:?}, got {values:?}", lv.values),
        ));
    }

    if expected.r0.is_some() || expected.r0_witness.is_some() {
        let cone = inst.set.asymptotic_cone();
        let sample = sample_base(&cone, opts.samples, opts.seed);
        let r0 = wvcp_r0_check(&inst.f, &cone, &sample, opts.tol_pos);
        if let Some(want) = &expected.r0 {
            let got = if r0.is_r0() { "yes" } else { "no" };
            outcomes.push(outcome(
                "complementarity regularity",
                got == want,
                format!("expected {want}, got {got}"),
            ));
        }
        if let Some(want) = &expected.r0_witness {
            let neg: Vec<f64> = want.iter().map(|v| -v).collect();
            let ok = r0
                .witness
                .as_ref()
                .is_some_and(|w| close(w, want, 1e-9) || close(w, &neg, 1e-9));
            outcomes.push(outcome(
                "complementarity witness",
                ok,
                format!("expected +-{want:?}, got {:?}", r0.witness),
            ));
        }
        if let Some(want) = &expected.r0_condition {
            let ok = r0.witness_condition.as_deref() == Some(want.as_slice());
            outcomes.push(outcome(
                "complementarity products",
                ok,
                format!("expected {want:?}, got {:?}", r0.witness_condition),
            ));
        }
    }

    let needs_front = expected.pareto_points_exact.is_some()
        || expected.weak_equals_pareto.is_some()
        || expected.pareto_contains_all_x1_zero.is_some();
    if needs_front {
        let window = inst
            .window
            .clone()
            .ok_or_else(|| anyhow!("expected block needs a window"))?;
        let front = grid_front(&inst.f, &inst.set, &window).map_err(|e| anyhow!("{e}"))?;
        if let Some(points) = &expected.pareto_points_exact {
            let ok = front.pareto.len() == points.len()
                && points
                    .iter()
                    .all(|p| front.pareto.iter().any(|q| close(&q.x, p, 1e-9)));
            outcomes.push(outcome(
                "exact Pareto front",
                ok,
                format!(
                    "expected {points:?}, got {:?}",
                    front.pareto.iter().map(|p| p.x.clone()).collect::<Vec<_>>()
                ),
            ));
        }
        if expected.weak_equals_pareto == Some(true) {
            let ok = front.weak.len() == front.pareto.len()
                && front
                    .weak
                    .iter()
                    .zip(&front.pareto)
                    .all(|(a, b)| a.x == b.x);
            outcomes.push(outcome(
                "weak front equals Pareto front",
                ok,
                format!("weak {} vs pareto {}", front.weak.len(), front.pareto.len()),
            ));
        }
        if expected.pareto_contains_all_x1_zero == Some(true) {
            let mut missing = 0usize;
            let mut axis_nodes = 0usize;
            feasible_grid(&inst.set, &window, |x| {
                if x[0] == 0.0 {
                    axis_nodes += 1;
                    if !front.pareto.iter().any(|p| p.x == x) {
                        missing += 1;
                    }
                }
            })
            .map_err(|e| anyhow!("{e}"))?;
            outcomes.push(outcome(
                "axis belongs to Pareto front",
                missing == 0 && axis_nodes > 0,
                format!("{missing} of {axis_nodes} axis nodes missing"),
            ));
        }
    }

    if let Some(want) = expected.front_radius_finite {
        let window = inst
            .window
            .clone()
            .ok_or_else(|| anyhow!("expected block needs a window"))?;
        let radius =
            bounded_front_radius(&inst.f, &inst.set, &report, &window).map_err(|e| anyhow!("{e}"))?;
        let got = radius.is_some();
        outcomes.push(outcome(
            "finite front radius",
            got == want,
            format!("expected {want}, got {radius:?}"),
        ));
    }

    if let Some(solver) = &expected.solver {
        let lambdas: Vec<Option<Vec<f64>>> = match &solver.lambdas {
            Some(list) => list.iter().cloned().map(Some).collect(),
            None => vec![None],
        };
        let expect = solver.expect.as_deref().unwrap_or("found");
        for lambda in lambdas {
            let solve_opts = SolveOptions {
                lambda: lambda.clone(),
                x0: Some(solver.x0.clone().unwrap_or_else(|| inst.x0.clone())),
                ..Default::default()
            };
            let result = solve(&inst.f, &inst.set, &solve_opts).map_err(|e| anyhow!("{e}"))?;
            let label = format!(
                "solver (lambda {})",
                lambda.as_deref().map(format_vec).unwrap_or_else(|| "uniform".into())
            );
            match expect {
                "found" => {
                    let mut ok = result.status == SolveStatus::Found;
                    let mut detail = format!("status {:?}", result.status);
                    if ok {
                        let point = result.point.as_ref().expect("found has a point");
                        if let Some(target) = &solver.point {
                            let tol = solver.tol.unwrap_or(1e-6);
                            ok &= dist(point, target) <= tol;
                            detail = format!("point {point:?} vs target {target:?}");
                        }
                        if ok && solver.certify == Some(true) {
                            let window = inst
                                .window
                                .clone()
                                .ok_or_else(|| anyhow!("certify needs a window"))?;
                            let cert = certify_pareto(&inst.f, &inst.set, point, &window)
                                .map_err(|e| anyhow!("{e}"))?;
                            ok &= cert.certified && !cert.is_vacuous();
                            detail = format!(
                                "{detail}; certified {} over {} nodes",
                                cert.certified, cert.feasible_checked
                            );
                        }
                    }
                    outcomes.push(outcome(&label, ok, detail));
                }
                "no_attained_minimum" => {
                    let ok = match result.status {
                        SolveStatus::UnboundedDescent | SolveStatus::Unknown => true,
                        SolveStatus::Found => {
                            // A claimed point must fail independent certification.
                            let window = inst
                                .window
                                .clone()
                                .ok_or_else(|| anyhow!("certify needs a window"))?;
                            let point = result.point.as_ref().expect("found has a point");
                            let cert = certify_pareto(&inst.f, &inst.set, point, &window)
                                .map_err(|e| anyhow!("{e}"))?;
                            !cert.certified
                        }
                        SolveStatus::EmptyCertified => false,
                    };
                    outcomes.push(outcome(
                        &label,
                        ok,
                        format!("status {:?}", result.status),
                    ));
                }
                other => bail!("unknown solver expectation `{other}`"),
            }
        }
    }

    Ok(outcomes)
}

/// Runs every bundled fixture, printing one PASS/FAIL line per fixture.
pub fn run_examples(opts: &AnalyzerOptions) -> (String, i32) {
    let mut out = String::new();
    let mut failures = 0usize;
    for (name, text) in FIXTURES {
        match Instance::from_json(text).and_then(|inst| check_fixture(&inst, opts)) {
            Ok(outcomes) => {
                let failed: Vec<&CheckOutcome> =
                    outcomes.iter().filter(|o| !o.passed).collect();
                if failed.is_empty() {
                    out.push_str(&format!("{name}: PASS ({} checks)\n", outcomes.len()));
                } else {
                    failures += 1;
                    out.push_str(&format!(
                        "{name}: FAIL ({} of {} checks)\n",
                        failed.len(),
                        outcomes.len()
                    ));
                    for f in failed {
                        out.push_str(&format!("    {}: {}\n", f.name, f.detail));
                    }
                }
            }
            Err(e) => {
                failures += 1;
                out.push_str(&format!("{name}: ERROR {e}\n"));
            }
        }
    }
    out.push_str(&format!(
        "{} fixtures: {} PASS, {failures} FAIL\n",
        FIXTURES.len(),
        FIXTURES.len() - failures
    ));
    (out, if failures == 0 { 0 } else { 1 })
}
