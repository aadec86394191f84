//! Pareto search by weighted-sum scalarization over sublevel sets.
//!
//! For strictly positive weights, a global minimizer of the scalarized
//! objective over `G = {x in K : f(x) <= f(x0)}` is Pareto efficient for
//! the vector problem. Global minimization of a non-convex polynomial is
//! out of reach, so `solve` is a best-effort pipeline: multi-start
//! feasible gradient descent, a grid polish over the box of visited
//! iterates, and a final compass polish, with an explicit `Unknown` status
//! when budgets run out before convergence. Iterates escaping a large
//! radius while still descending signal an unattained infimum and produce
//! `UnboundedDescent` instead of a bogus point. Every `Found` point should
//! be re-checked against the independent grid oracle via [`certify_pareto`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{
    dominates, feasible_grid, grid_front, DominanceMode, FrontPoint, GridWindow, OracleError,
    DOMINANCE_TOL,
};
use crate::poly::{Polynomial, VectorPolynomial};
use crate::regularity::{RegularityReport, StrongReason, StrongVerdict, ZeroWeakStatus};
use crate::search::compass_minimize;
use crate::sets::ConstraintSet;
use crate::vecmath::{add_scaled, lex_cmp, norm, unit_sphere_sample};

/// Iterate-norm radius beyond which descent is reported as unbounded.
pub const DEFAULT_R_MAX: f64 = 1e6;
/// Default objective-evaluation budget per start.
pub const DEFAULT_EVAL_BUDGET: usize = 100_000;
/// Step length below which descent is considered converged.
pub const STEP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// Weights must lie in the interior of the positive orthant.
    LambdaMustBePositive,
    LambdaArity { expected: usize, found: usize },
    StartArity { expected: usize, found: usize },
    /// The start point fails membership in K.
    InfeasibleStart,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::LambdaMustBePositive => write!(f, "lambda must be strictly positive"),
            SolveError::LambdaArity { expected, found } => {
                write!(f, "lambda has {found} entries, expected {expected}")
            }
            SolveError::StartArity { expected, found } => {
                write!(f, "start point has {found} entries, expected {expected}")
            }
            SolveError::InfeasibleStart => write!(f, "start point is not feasible"),
        }
    }
}

impl core::error::Error for SolveError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Found,
    /// Certified before any descent: the weak front of the instance is empty.
    EmptyCertified,
    /// Iterates left the `r_max` ball with the objective still decreasing.
    UnboundedDescent,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct ParetoResult {
    pub status: SolveStatus,
    pub point: Option<Vec<f64>>,
    pub objective_values: Option<Vec<f64>>,
    /// Human-readable trail of the checks that produced the status.
    pub certificate: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Scalarization weights; uniform `1/s` when absent.
    pub lambda: Option<Vec<f64>>,
    /// Start point; the set's witness when absent.
    pub x0: Option<Vec<f64>>,
    /// Extra random starts found by hit-and-run from `x0`.
    pub starts: usize,
    pub r_max: f64,
    pub eval_budget: usize,
    pub seed: u64,
    /// Slack for the sublevel constraints `f_i(x) <= f_i(x0)`.
    pub sublevel_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            lambda: None,
            x0: None,
            starts: 3,
            r_max: DEFAULT_R_MAX,
            eval_budget: DEFAULT_EVAL_BUDGET,
            seed: 0,
            sublevel_tol: DOMINANCE_TOL,
        }
    }
}

/// Certification of emptiness ahead of any descent: an empty recession
/// weak front forces an empty weak front for the instance itself. The
/// check is one-directional; instances with nonempty recession fronts can
/// still have empty fronts.
pub fn precheck_emptiness(report: &RegularityReport) -> Option<ParetoResult> {
    match &report.zero_weak {
        ZeroWeakStatus::ZeroNotWeakPareto {
            witness,
            leading_values,
        } => Some(ParetoResult {
            status: SolveStatus::EmptyCertified,
            point: None,
            objective_values: None,
            certificate: alloc::vec![
                format!(
                    "recession direction {witness:?} decreases every leading form ({leading_values:?})"
                ),
                String::from(
                    "empty recession weak front certifies an empty weak front for the instance",
                ),
            ],
        }),
        ZeroWeakStatus::ZeroIsWeakPareto => None,
    }
}

enum StartOutcome {
    Converged,
    Unbounded,
    Exhausted,
}

struct StartResult {
    outcome: StartOutcome,
    point: Vec<f64>,
    value: f64,
    evaluations: usize,
}

struct BoundingBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundingBox {
    fn at(x: &[f64]) -> Self {
        BoundingBox {
            lower: x.to_vec(),
            upper: x.to_vec(),
        }
    }

    fn update(&mut self, x: &[f64]) {
        for i in 0..x.len() {
            self.lower[i] = self.lower[i].min(x[i]);
            self.upper[i] = self.upper[i].max(x[i]);
        }
    }

    fn inflated(&self, margin: f64) -> (Vec<f64>, Vec<f64>) {
        let lower: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l - margin * (u - l).max(0.5))
            .collect();
        let upper: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u + margin * (u - l).max(0.5))
            .collect();
        (lower, upper)
    }
}

fn descend<F>(
    g: &Polynomial,
    feasible: &F,
    start: &[f64],
    opts: &SolveOptions,
    bbox: &mut BoundingBox,
) -> StartResult
where
    F: Fn(&[f64]) -> bool,
{
    let mut x = start.to_vec();
    let mut value = g.eval(&x);
    let mut evaluations = 1usize;
    let mut step = 0.25;
    bbox.update(&x);
    loop {
        if evaluations >= opts.eval_budget {
            return StartResult {
                outcome: StartOutcome::Exhausted,
                point: x,
                value,
                evaluations,
            };
        }
        let grad = g.gradient(&x);
        evaluations += 1;
        let gn = norm(&grad);
        if gn < 1e-14 {
            return StartResult {
                outcome: StartOutcome::Converged,
                point: x,
                value,
                evaluations,
            };
        }
        loop {
            if step < STEP_TOL {
                return StartResult {
                    outcome: StartOutcome::Converged,
                    point: x,
                    value,
                    evaluations,
                };
            }
            if evaluations >= opts.eval_budget {
                return StartResult {
                    outcome: StartOutcome::Exhausted,
                    point: x,
                    value,
                    evaluations,
                };
            }
            let cand = add_scaled(&x, -step / gn, &grad);
            let v = g.eval(&cand);
            evaluations += 1;
            if v < value && feasible(&cand) {
                x = cand;
                value = v;
                bbox.update(&x);
                step *= 1.6;
                if norm(&x) > opts.r_max {
                    return StartResult {
                        outcome: StartOutcome::Unbounded,
                        point: x,
                        value,
                        evaluations,
                    };
                }
                break;
            }
            step *= 0.5;
        }
    }
}

fn hit_and_run_starts<F>(feasible: &F, x0: &[f64], count: usize, seed: u64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let mut starts = Vec::new();
    let mut current = x0.to_vec();
    for _ in 0..count {
        for _hop in 0..3 {
            let dir = unit_sphere_sample(&mut rng, x0.len());
            let mut feasible_steps: Vec<f64> = Vec::new();
            for i in 1..=16 {
                let t = 8.0 * i as f64 / 16.0;
                for sign in [1.0, -1.0] {
                    let cand = add_scaled(&current, sign * t, &dir);
                    if feasible(&cand) {
                        feasible_steps.push(sign * t);
                    }
                }
            }
            if feasible_steps.is_empty() {
                continue;
            }
            feasible_steps.sort_by(f64::total_cmp);
            let pick = feasible_steps[rng.random_range(0..feasible_steps.len())];
            current = add_scaled(&current, pick, &dir);
        }
        starts.push(current.clone());
    }
    starts
}

fn grid_polish<F>(
    g: &Polynomial,
    feasible: &F,
    bbox: &BoundingBox,
    n: usize,
) -> Option<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> bool,
{
    let res = match n {
        1 => 65,
        2 => 33,
        3 => 13,
        _ => return None,
    };
    let (lower, upper) = bbox.inflated(0.1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut index = alloc::vec![0usize; n];
    let mut x = alloc::vec![0.0f64; n];
    loop {
        for i in 0..n {
            x[i] = lower[i] + (upper[i] - lower[i]) * index[i] as f64 / (res - 1) as f64;
        }
        if feasible(&x) {
            let v = g.eval(&x);
            let better = match &best {
                None => true,
                Some((bx, bv)) => {
                    v < *bv || (v == *bv && lex_cmp(&x, bx) == core::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((x.clone(), v));
            }
        }
        let mut axis = 0;
        loop {
            if axis == n {
                return best;
            }
            index[axis] += 1;
            if index[axis] < res {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

/// Minimizes the scalarized objective over the sublevel set of `x0`.
pub fn solve(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    opts: &SolveOptions,
) -> Result<ParetoResult, SolveError> {
    let s = f.s();
    let lambda = match &opts.lambda {
        Some(l) => {
            if l.len() != s {
                return Err(SolveError::LambdaArity {
                    expected: s,
                    found: l.len(),
                });
            }
            if l.iter().any(|v| *v <= 0.0) {
                return Err(SolveError::LambdaMustBePositive);
            }
            l.clone()
        }
        None => alloc::vec![1.0 / s as f64; s],
    };
    let x0 = match &opts.x0 {
        Some(x) => {
            if x.len() != f.n() {
                return Err(SolveError::StartArity {
                    expected: f.n(),
                    found: x.len(),
                });
            }
            x.clone()
        }
        None => set.witness().to_vec(),
    };
    if !set.contains(&x0) {
        return Err(SolveError::InfeasibleStart);
    }

    let mut g = Polynomial::zero(f.n());
    for (component, weight) in f.components().iter().zip(&lambda) {
        g = g.add(&component.scale(*weight)).expect("same dimension");
    }
    let reference = f.eval(&x0);
    let sublevel_tol = opts.sublevel_tol;
    let feasible = |x: &[f64]| {
        set.contains(x)
            && f.components()
                .iter()
                .zip(&reference)
                .all(|(c, r)| c.eval(x) <= r + sublevel_tol)
    };

    let mut certificate = alloc::vec![format!(
        "scalarization weights {lambda:?}, sublevel set anchored at {x0:?}"
    )];

    let mut starts = alloc::vec![x0.clone()];
    starts.extend(hit_and_run_starts(&feasible, &x0, opts.starts, opts.seed));

    let mut bbox = BoundingBox::at(&x0);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_converged = false;
    for (i, start) in starts.iter().enumerate() {
        let result = descend(&g, &feasible, start, opts, &mut bbox);
        match result.outcome {
            StartOutcome::Unbounded => {
                certificate.push(format!(
                    "start {i}: iterate norm {:.3e} exceeded r_max {:.1e} with the objective still decreasing (value {:.6e})",
                    norm(&result.point),
                    opts.r_max,
                    result.value
                ));
                return Ok(ParetoResult {
                    status: SolveStatus::UnboundedDescent,
                    point: None,
                    objective_values: None,
                    certificate,
                });
            }
            StartOutcome::Converged => {
                any_converged = true;
                certificate.push(format!(
                    "start {i}: descent converged after {} evaluations",
                    result.evaluations
                ));
            }
            StartOutcome::Exhausted => {
                certificate.push(format!(
                    "start {i}: evaluation budget {} exhausted",
                    opts.eval_budget
                ));
            }
        }
        let better = match &best {
            None => true,
            Some((bx, bv)) => {
                result.value < *bv
                    || (result.value == *bv && lex_cmp(&result.point, bx) == core::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((result.point, result.value));
        }
    }
    let (mut best_point, mut best_value) = best.expect("at least one start");

    if let Some((gx, gv)) = grid_polish(&g, &feasible, &bbox, f.n()) {
        if gv < best_value {
            certificate.push(format!(
                "grid polish improved the objective from {best_value:.6e} to {gv:.6e}"
            ));
            best_point = gx;
            best_value = gv;
        }
    }

    let polish = compass_minimize(
        |x| g.eval(x),
        &feasible,
        &best_point,
        0.1,
        1e-10,
        20_000,
    );
    if polish.value < best_value {
        best_point = polish.point;
        best_value = polish.value;
    }
    certificate.push(format!(
        "feasible-descent polish {} at objective {best_value:.9e}",
        if polish.converged { "converged" } else { "ran out of budget" }
    ));

    let status = if any_converged || polish.converged {
        SolveStatus::Found
    } else {
        SolveStatus::Unknown
    };
    if status == SolveStatus::Found {
        certificate.push(String::from(
            "local evidence only; certify against the grid oracle",
        ));
    }
    let values = f.eval(&best_point);
    Ok(ParetoResult {
        status,
        point: Some(best_point),
        objective_values: Some(values),
        certificate,
    })
}

/// Sampled Pareto certificate for a point against a grid window: true iff
/// no feasible grid node strictly dominates the point's objective vector.
#[derive(Debug, Clone)]
pub struct Certification {
    pub certified: bool,
    pub feasible_checked: usize,
    pub dominator: Option<FrontPoint>,
}

impl Certification {
    /// A certificate over an empty grid is vacuous.
    pub fn is_vacuous(&self) -> bool {
        self.feasible_checked == 0
    }
}

pub fn certify_pareto(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    point: &[f64],
    window: &GridWindow,
) -> Result<Certification, OracleError> {
    let reference = f.eval(point);
    let mut dominator: Option<FrontPoint> = None;
    let checked = feasible_grid(set, window, |x| {
        if dominator.is_some() {
            return;
        }
        let values = f.eval(x);
        if dominates(&values, &reference, DominanceMode::Strict, DOMINANCE_TOL) {
            dominator = Some(FrontPoint {
                x: x.to_vec(),
                values,
            });
        }
    })?;
    Ok(Certification {
        certified: dominator.is_none(),
        feasible_checked: checked,
        dominator,
    })
}

/// Empirical radius bound for the weak front, meaningful only when the
/// analyzer certified the recession weak front to be `{0}` (which makes the
/// weak front compact). Computes the weak front on the window and on the
/// window doubled about its center; returns the radius when it stabilizes.
pub fn bounded_front_radius(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    report: &RegularityReport,
    window: &GridWindow,
) -> Result<Option<f64>, OracleError> {
    if !matches!(
        report.strong,
        StrongVerdict::Yes(StrongReason::WeakSolSetIsZero)
    ) {
        return Ok(None);
    }
    let small = grid_front(f, set, window)?;
    let big_window = window.scaled_about_center(2.0);
    let big = grid_front(f, set, &big_window)?;
    let radius = |front: &[FrontPoint]| {
        front
            .iter()
            .map(|p| norm(&p.x))
            .fold(0.0f64, f64::max)
    };
    let r_small = radius(&small.weak);
    let r_big = radius(&big.weak);
    let slack = 2.0 * norm(&big.cell);
    if r_big <= r_small + slack {
        Ok(Some(r_big))
    } else {
        Ok(None)
    }
}
