//! Perturbation experiments on the regularity verdicts and solution sets.
//!
//! Three families of checks:
//!
//! * lower-degree perturbations leave leading forms bit-identical, so the
//!   analyzer verdict must never flip (an exact algebraic fact; any flip is
//!   a tolerance bug);
//! * small coefficient-norm perturbations of a strongly regular instance
//!   keep it strongly regular for some positive radius; the harness reports
//!   the smallest tested radius with zero flips rather than asserting any
//!   particular one;
//! * on convex polyhedral sets, solution sets of nearby objectives stay in
//!   a common bounded region and limits of weak-Pareto points remain
//!   weak-Pareto (probed on grid oracles).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{feasible_grid, grid_front, GridWindow, OracleError, DOMINANCE_TOL};
use crate::poly::{CoefficientVector, PolyError, VectorPolynomial};
use crate::regularity::{
    analyze_regularity, AnalyzerOptions, RegularityReport, StrongReason, StrongVerdict,
    WeakVerdict, ZeroWeakStatus,
};
use crate::sets::ConstraintSet;
use crate::solver::{solve, SolveOptions, SolveStatus};
use crate::vecmath::norm;

/// Default radius grid for [`small_norm_persistence`].
pub const DEFAULT_EPSILON_GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];

#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationMode {
    /// Random perturbations with `deg g_i <= deg f_i - 1`.
    LowerDegree,
    /// Random perturbations of the full coefficient vectors with
    /// coefficient norm below `epsilon`.
    SmallNorm { epsilon: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    pub mode: PerturbationMode,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub epsilon: Option<f64>,
    pub flipped: bool,
    pub empty_certified: bool,
    pub radius: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub trials: usize,
    pub verdict_flips: usize,
    /// Largest solution-point norm observed across perturbations, for the
    /// local-boundedness probe.
    pub union_radius: Option<f64>,
    /// Closed-graph violations, or window-growth instabilities for the
    /// local-boundedness probe.
    pub graph_violations: usize,
    /// Smallest tested radius with zero flips (and, for instances whose
    /// baseline predicts solutions, zero spurious emptiness certificates).
    pub safe_epsilon: Option<f64>,
    pub per_trial: Vec<TrialRecord>,
}

#[derive(Debug)]
pub enum StabilityError {
    /// The probe's hypotheses require a strongly regular baseline.
    NotStronglyRegular,
    /// Convexity hypothesis: only polyhedral sets qualify.
    NonPolyhedralSet(String),
    /// Could not generate a degree-preserving perturbation.
    DegreeDropPersistent,
    /// Probe directions must converge: coefficient norm at most one.
    ProbeTooLarge { norm: f64 },
    /// Lower-degree perturbations need every component degree at least two.
    DegreeTooSmallForLowerDegree { index: usize },
    Poly(PolyError),
    Oracle(OracleError),
}

impl fmt::Display for StabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityError::NotStronglyRegular => {
                write!(f, "probe requires a strongly regular baseline instance")
            }
            StabilityError::NonPolyhedralSet(msg) => write!(f, "{msg}"),
            StabilityError::DegreeDropPersistent => {
                write!(f, "failed to generate a degree-preserving perturbation")
            }
            StabilityError::ProbeTooLarge { norm } => write!(
                f,
                "probe direction norm {norm} exceeds 1; the probe sequence must converge"
            ),
            StabilityError::DegreeTooSmallForLowerDegree { index } => write!(
                f,
                "component {index} has degree 1; lower-degree perturbations need degree >= 2"
            ),
            StabilityError::Poly(e) => write!(f, "{e}"),
            StabilityError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StabilityError {}

impl From<PolyError> for StabilityError {
    fn from(e: PolyError) -> Self {
        StabilityError::Poly(e)
    }
}

impl From<OracleError> for StabilityError {
    fn from(e: OracleError) -> Self {
        StabilityError::Oracle(e)
    }
}

/// Random vector polynomial with `deg g_i <= deg f_i - 1` (Gaussian
/// coefficients over the full lower-degree basis).
fn random_lower_degree<R: Rng>(
    f: &VectorPolynomial,
    rng: &mut R,
) -> Result<VectorPolynomial, StabilityError> {
    let n = f.n();
    for _ in 0..100 {
        let mut components = Vec::with_capacity(f.s());
        for (index, c) in f.components().iter().enumerate() {
            let cap = c.degree() as u32 - 1;
            if cap == 0 {
                return Err(StabilityError::DegreeTooSmallForLowerDegree { index });
            }
            let dim = CoefficientVector::dimension(n, cap);
            let values: Vec<f64> = (0..dim).map(|_| crate::vecmath::standard_normal(rng)).collect();
            let cv = CoefficientVector::new(n, cap, values)?;
            components.push(cv.to_polynomial());
        }
        if let Ok(g) = VectorPolynomial::new(components) {
            return Ok(g);
        }
    }
    Err(StabilityError::DegreeDropPersistent)
}

/// Random vector polynomial uniform on the coefficient-norm ball of radius
/// `epsilon` in the product space of degrees `f.degrees()`: a Gaussian
/// draw over the stacked bases, rescaled to radius `epsilon * u^(1/dim)`.
fn random_in_ball<R: Rng>(
    f: &VectorPolynomial,
    epsilon: f64,
    rng: &mut R,
) -> Result<VectorPolynomial, StabilityError> {
    let n = f.n();
    let dims: Vec<usize> = f
        .degrees()
        .iter()
        .map(|d| CoefficientVector::dimension(n, *d))
        .collect();
    let total: usize = dims.iter().sum();
    for _ in 0..100 {
        let gauss: Vec<f64> = (0..total).map(|_| crate::vecmath::standard_normal(rng)).collect();
        let gnorm = norm(&gauss);
        if gnorm < 1e-14 {
            continue;
        }
        let u: f64 = rng.random();
        let radius = epsilon * crate::math::powf(u, 1.0 / total as f64);
        let scale = radius / gnorm;
        let mut components = Vec::with_capacity(f.s());
        let mut offset = 0;
        for (d, dim) in f.degrees().iter().zip(&dims) {
            let values: Vec<f64> = gauss[offset..offset + dim].iter().map(|v| v * scale).collect();
            offset += dim;
            let cv = CoefficientVector::new(n, *d, values)?;
            components.push(cv.to_polynomial());
        }
        if let Ok(g) = VectorPolynomial::new(components) {
            return Ok(g);
        }
    }
    Err(StabilityError::DegreeDropPersistent)
}

/// Degree-preserving sum `f + g`: regenerates `g` via `fresh` when the sum
/// drops a component degree (the top coefficients cancelled exactly).
fn perturbed_same_degrees<R: Rng, G>(
    f: &VectorPolynomial,
    rng: &mut R,
    mut fresh: G,
) -> Result<(VectorPolynomial, VectorPolynomial), StabilityError>
where
    G: FnMut(&mut R) -> Result<VectorPolynomial, StabilityError>,
{
    for _ in 0..100 {
        let g = fresh(rng)?;
        if let Ok(sum) = f.add(&g) {
            if sum.degrees() == f.degrees() {
                return Ok((sum, g));
            }
        }
    }
    Err(StabilityError::DegreeDropPersistent)
}

fn verdict_kinds_equal(a: &RegularityReport, b: &RegularityReport) -> bool {
    let strong = matches!(
        (&a.strong, &b.strong),
        (
            StrongVerdict::Yes(StrongReason::WeakSolSetIsZero),
            StrongVerdict::Yes(StrongReason::WeakSolSetIsZero)
        ) | (
            StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { .. }),
            StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { .. })
        ) | (StrongVerdict::No { .. }, StrongVerdict::No { .. })
            | (StrongVerdict::Inconclusive, StrongVerdict::Inconclusive)
    );
    let weak = matches!(
        (&a.weak, &b.weak),
        (WeakVerdict::Yes, WeakVerdict::Yes)
            | (WeakVerdict::No { .. }, WeakVerdict::No { .. })
            | (WeakVerdict::Inconclusive, WeakVerdict::Inconclusive)
    );
    let components = a.per_component.len() == b.per_component.len()
        && a.per_component
            .iter()
            .zip(&b.per_component)
            .all(|(x, y)| x.kind == y.kind);
    strong && weak && components
}

fn strong_kind(report: &RegularityReport) -> u8 {
    match &report.strong {
        StrongVerdict::Yes(StrongReason::WeakSolSetIsZero) => 0,
        StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { .. }) => 1,
        StrongVerdict::No { .. } => 2,
        StrongVerdict::Inconclusive => 3,
    }
}

/// Verdict invariance under lower-degree perturbations. The leading forms
/// of `f + g` equal those of `f` exactly, so the expected flip count is
/// zero with no tolerance involved.
pub fn lower_degree_invariance(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    spec: &PerturbationSpec,
    opts: &AnalyzerOptions,
) -> Result<StabilityReport, StabilityError> {
    let baseline = analyze_regularity(f, set, opts);
    let baseline_lead = f.leading_form();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut per_trial = Vec::with_capacity(spec.trials);
    let mut flips = 0usize;
    for trial in 0..spec.trials {
        let g = random_lower_degree(f, &mut rng)?;
        let perturbed = f.perturb(&g, true)?;
        debug_assert!(perturbed.lower_degree);
        let lead_equal = perturbed.sum.leading_form() == baseline_lead;
        let report = analyze_regularity(&perturbed.sum, set, opts);
        let flipped = !lead_equal || !verdict_kinds_equal(&baseline, &report);
        if flipped {
            flips += 1;
        }
        per_trial.push(TrialRecord {
            trial,
            epsilon: None,
            flipped,
            empty_certified: matches!(
                report.zero_weak,
                ZeroWeakStatus::ZeroNotWeakPareto { .. }
            ),
            radius: None,
            note: if lead_equal {
                String::from("leading forms identical")
            } else {
                String::from("leading forms diverged")
            },
        });
    }
    Ok(StabilityReport {
        trials: spec.trials,
        verdict_flips: flips,
        union_radius: None,
        graph_violations: 0,
        safe_epsilon: None,
        per_trial,
    })
}

/// Strong-regularity persistence under small coefficient perturbations,
/// swept over a radius grid. Requires a strongly regular baseline.
pub fn small_norm_persistence(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    spec: &PerturbationSpec,
    epsilons: &[f64],
    opts: &AnalyzerOptions,
) -> Result<StabilityReport, StabilityError> {
    let baseline = analyze_regularity(f, set, opts);
    if !baseline.strongly_regular() {
        return Err(StabilityError::NotStronglyRegular);
    }
    let expects_solutions = matches!(
        baseline.strong,
        StrongVerdict::Yes(StrongReason::WeakSolSetIsZero)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut per_trial = Vec::new();
    let mut total_flips = 0usize;
    let mut safe_epsilon: Option<f64> = None;
    let mut trial_index = 0usize;
    for &epsilon in epsilons {
        let mut flips_here = 0usize;
        let mut empties_here = 0usize;
        for _ in 0..spec.trials {
            let (perturbed, _g) =
                perturbed_same_degrees(f, &mut rng, |r| random_in_ball(f, epsilon, r))?;
            let report = analyze_regularity(&perturbed, set, opts);
            let flipped = strong_kind(&report) != strong_kind(&baseline);
            let empty_certified = matches!(
                report.zero_weak,
                ZeroWeakStatus::ZeroNotWeakPareto { .. }
            );
            if flipped {
                flips_here += 1;
                total_flips += 1;
            }
            if expects_solutions && empty_certified {
                empties_here += 1;
            }
            per_trial.push(TrialRecord {
                trial: trial_index,
                epsilon: Some(epsilon),
                flipped,
                empty_certified,
                radius: None,
                note: String::new(),
            });
            trial_index += 1;
        }
        if flips_here == 0 && empties_here == 0 {
            safe_epsilon = Some(safe_epsilon.map_or(epsilon, |e: f64| e.min(epsilon)));
        }
    }
    Ok(StabilityReport {
        trials: trial_index,
        verdict_flips: total_flips,
        union_radius: None,
        graph_violations: 0,
        safe_epsilon,
        per_trial,
    })
}

/// Probes local boundedness of the weak front under perturbations within
/// radius `delta`: gathers solver points and oracle weak-front points for
/// each perturbed objective on the window and on the window doubled, and
/// flags trials whose observed radius keeps growing with the window.
pub fn local_boundedness_probe(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    spec: &PerturbationSpec,
    delta: f64,
    window: &GridWindow,
    opts: &AnalyzerOptions,
) -> Result<StabilityReport, StabilityError> {
    if !set.is_polyhedral() {
        return Err(StabilityError::NonPolyhedralSet(String::from(
            "local boundedness probe requires a convex polyhedral set",
        )));
    }
    let baseline = analyze_regularity(f, set, opts);
    if !baseline.strongly_regular() {
        return Err(StabilityError::NotStronglyRegular);
    }
    let big_window = window.scaled_about_center(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut per_trial = Vec::with_capacity(spec.trials);
    let mut union_radius = 0.0f64;
    let mut violations = 0usize;
    for trial in 0..spec.trials {
        let (perturbed, _g) =
            perturbed_same_degrees(f, &mut rng, |r| random_in_ball(f, delta, r))?;
        let mut radius_small = 0.0f64;
        let mut radius_big = 0.0f64;
        let front_small = grid_front(&perturbed, set, window)?;
        for p in &front_small.weak {
            radius_small = radius_small.max(norm(&p.x));
        }
        let front_big = grid_front(&perturbed, set, &big_window)?;
        for p in &front_big.weak {
            radius_big = radius_big.max(norm(&p.x));
        }
        let solve_opts = SolveOptions {
            starts: 1,
            eval_budget: 4000,
            seed: spec.seed ^ trial as u64,
            ..Default::default()
        };
        let mut solver_radius = 0.0f64;
        if let Ok(result) = solve(&perturbed, set, &solve_opts) {
            if result.status == SolveStatus::Found {
                if let Some(p) = &result.point {
                    solver_radius = norm(p);
                }
            }
        }
        let slack = 2.0 * norm(&front_big.cell);
        let stable = radius_big <= radius_small + slack;
        if !stable {
            violations += 1;
        }
        let radius = radius_big.max(solver_radius);
        union_radius = union_radius.max(radius);
        per_trial.push(TrialRecord {
            trial,
            epsilon: Some(delta),
            flipped: false,
            empty_certified: false,
            radius: Some(radius),
            note: if stable {
                String::from("radius stable across windows")
            } else {
                format!("radius grew from {radius_small:.3} to {radius_big:.3}")
            },
        });
    }
    Ok(StabilityReport {
        trials: spec.trials,
        verdict_flips: 0,
        union_radius: Some(union_radius),
        graph_violations: violations,
        safe_epsilon: None,
        per_trial,
    })
}

/// Closed-graph probe: along the convergent sequence `f + g/m`, the
/// limit of grid weak-Pareto points must stay weak-Pareto for `f` up to
/// the value-perturbation margin of the sequence tail.
pub fn closed_graph_probe(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    spec: &PerturbationSpec,
    direction: Option<&VectorPolynomial>,
    window: &GridWindow,
    opts: &AnalyzerOptions,
) -> Result<StabilityReport, StabilityError> {
    let _ = opts;
    const STEPS: usize = 20;
    if let Some(g) = direction {
        let gnorm = g.coefficient_norm();
        if gnorm > 1.0 + 1e-12 {
            return Err(StabilityError::ProbeTooLarge { norm: gnorm });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let trials = if direction.is_some() { 1 } else { spec.trials.max(1) };
    let mut per_trial = Vec::with_capacity(trials);
    let mut violations = 0usize;
    for trial in 0..trials {
        let g = match direction {
            Some(g) => g.clone(),
            None => random_in_ball(f, 0.5, &mut rng)?,
        };
        // Margin: the largest value shift |g_i(x)|/m over the window at the
        // sequence tail.
        let mut max_shift = 0.0f64;
        feasible_grid(set, window, |x| {
            for c in g.components() {
                max_shift = max_shift.max(crate::math::abs(c.eval(x)));
            }
        })?;
        let margin = 2.0 * max_shift / STEPS as f64 + DOMINANCE_TOL;

        let mut limit_point: Option<Vec<f64>> = None;
        for m in 1..=STEPS {
            let scaled = VectorPolynomial::new(
                g.components()
                    .iter()
                    .map(|c| c.scale(1.0 / m as f64))
                    .collect(),
            )?;
            let perturbed = f.add(&scaled)?;
            if perturbed.degrees() != f.degrees() {
                return Err(StabilityError::DegreeDropPersistent);
            }
            let front = grid_front(&perturbed, set, window)?;
            limit_point = front.weak.first().map(|p| p.x.clone());
        }
        let y = limit_point.expect("window has feasible nodes");
        let y_values = f.eval(&y);
        let mut violated = false;
        feasible_grid(set, window, |x| {
            if violated {
                return;
            }
            let values = f.eval(x);
            if values
                .iter()
                .zip(&y_values)
                .all(|(v, r)| *v < r - margin)
            {
                violated = true;
            }
        })?;
        if violated {
            violations += 1;
        }
        per_trial.push(TrialRecord {
            trial,
            epsilon: None,
            flipped: false,
            empty_certified: false,
            radius: None,
            note: format!("limit point {y:?}, margin {margin:.3e}"),
        });
    }
    Ok(StabilityReport {
        trials,
        verdict_flips: 0,
        union_radius: None,
        graph_violations: violations,
        safe_epsilon: None,
        per_trial,
    })
}
