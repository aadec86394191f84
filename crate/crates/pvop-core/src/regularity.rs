//! Regularity analysis of PVOP(K, f) through its recession problem.
//!
//! Everything here works on the leading forms `f_inf` of the objective over
//! the asymptotic cone of K, sampled on the cone's spherical base. By
//! positive homogeneity the sign structure of a leading form on the base
//! determines its behavior on the whole cone, so base sampling plus local
//! refinement decides, for each component, whether the scalar recession
//! problem has only the zero solution, no solution, or nonzero solutions.
//!
//! The per-component verdicts combine into the strong/weak regularity
//! verdicts for the vector problem:
//!
//! * all components `OnlyZero` - the recession weak front is `{0}`, the
//!   problem is strongly regular, and f is bounded from below on K;
//! * a base direction making every leading form negative - the recession
//!   weak front is empty, the problem is strongly regular, and every
//!   component is unbounded from below on K;
//! * otherwise strong regularity fails with a sampled witness, and weak
//!   regularity can only be refuted (never proven) by sampling.
//!
//! Verdicts within the sign-test dead zone stay `Inconclusive` rather than
//! guessed; sampling cannot decide them.

use alloc::vec::Vec;
use core::fmt;

use crate::poly::{PolyError, Polynomial, VectorPolynomial};
use crate::sets::{sample_base, BaseSample, Cone, ConstraintSet, CONE_FEASIBILITY_TOL};
use crate::vecmath::{add_scaled, dot, lex_cmp, normalized};
use crate::math;

/// Dead zone for sign tests of leading-form values on the unit base.
pub const TOL_POS: f64 = 1e-7;
/// Evaluation budget for local refinement around the best base sample.
pub const REFINE_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityError {
    Poly(PolyError),
}

impl fmt::Display for RegularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RegularityError {}

impl From<PolyError> for RegularityError {
    fn from(e: PolyError) -> Self {
        RegularityError::Poly(e)
    }
}

/// Trichotomy for the scalar recession problem of one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    /// The leading form is positive on the whole base: solution set `{0}`.
    OnlyZero,
    /// Some base direction is negative: unbounded descent, empty solution set.
    Empty,
    /// A nonzero base direction annihilates the leading form.
    HasNonzero,
    /// Refinement landed inconsistently across the dead zone.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRecessionVerdict {
    pub kind: VerdictKind,
    /// Base point carrying the evidence (minimizer for `Empty`, approximate
    /// zero for `HasNonzero`).
    pub witness: Option<Vec<f64>>,
    /// Refined minimum of the leading form on the base; `+inf` for the
    /// trivial cone.
    pub min_on_base: f64,
}

/// Whether the origin is weak Pareto efficient for the recession problem.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroWeakStatus {
    ZeroIsWeakPareto,
    /// A base direction strictly decreases every leading form, so the
    /// recession weak front is empty.
    ZeroNotWeakPareto {
        witness: Vec<f64>,
        leading_values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrongReason {
    /// Every scalar recession verdict is `OnlyZero`.
    WeakSolSetIsZero,
    /// The recession weak front is empty, witnessed by an all-negative
    /// base direction.
    WeakSolSetEmpty { witness: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrongVerdict {
    Yes(StrongReason),
    /// A sampled nonzero weak-Pareto direction of the recession problem,
    /// validated against every base sample.
    No {
        witness: Vec<f64>,
        validated_against: usize,
    },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeakVerdict {
    Yes,
    /// A sampled nonzero Pareto-efficient candidate of the recession
    /// problem. Pareto efficiency on a cone is universally quantified, so
    /// this is a candidate with a validation count, never a proof.
    No {
        candidate: Vec<f64>,
        validated_against: usize,
    },
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub strong: StrongVerdict,
    pub weak: WeakVerdict,
    pub per_component: Vec<ScalarRecessionVerdict>,
    pub zero_weak: ZeroWeakStatus,
    /// Whether the verdicts imply f is bounded from below on K.
    pub f_bounded_below_implied: TriState,
    pub samples_used: usize,
}

impl RegularityReport {
    /// True when no field is `Inconclusive`.
    pub fn is_decided(&self) -> bool {
        !matches!(self.strong, StrongVerdict::Inconclusive)
            && !matches!(self.weak, WeakVerdict::Inconclusive)
            && self
                .per_component
                .iter()
                .all(|v| v.kind != VerdictKind::Inconclusive)
    }

    pub fn strongly_regular(&self) -> bool {
        matches!(self.strong, StrongVerdict::Yes(_))
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzerOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol_pos: f64,
    pub refine_budget: usize,
}

impl Default for AnalyzerOptions {
    fn default() -> Self {
        AnalyzerOptions {
            samples: 360,
            seed: 0,
            tol_pos: TOL_POS,
            refine_budget: REFINE_BUDGET,
        }
    }
}

/// Local minimization of `objective` over the cone's spherical base:
/// compass moves along tangent directions, renormalized back to the sphere
/// and rejected when they leave the cone.
fn refine_on_base<F: Fn(&[f64]) -> f64>(
    objective: F,
    cone: &Cone,
    start: &[f64],
    budget: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut point = start.to_vec();
    let mut value = objective(&point);
    let mut evaluations = 1usize;
    let mut step = 0.2;
    while evaluations < budget && step > 1e-10 {
        let mut improved = false;
        'axes: for axis in 0..n {
            for sign in [1.0, -1.0] {
                if evaluations >= budget {
                    break 'axes;
                }
                // Tangent component of the axis direction at `point`.
                let mut dir = alloc::vec![0.0; n];
                dir[axis] = sign;
                let radial = dot(&dir, &point);
                let tangent = add_scaled(&dir, -radial, &point);
                let Some(moved) = normalized(&add_scaled(&point, step, &tangent)) else {
                    continue;
                };
                if !cone.contains(&moved, CONE_FEASIBILITY_TOL) {
                    continue;
                }
                let v = objective(&moved);
                evaluations += 1;
                if v < value {
                    point = moved;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (point, value)
}

/// Decides the scalar recession problem of a single component on the cone:
/// minimizes its leading form over sampled base directions with local
/// refinement, then reads the verdict off the sign of the minimum.
pub fn scalar_recession_verdict(
    fi: &Polynomial,
    cone: &Cone,
    sample: &BaseSample,
    tol_pos: f64,
) -> Result<ScalarRecessionVerdict, RegularityError> {
    if fi.degree() < 1 {
        return Err(if fi.is_zero() {
            PolyError::ZeroPolynomial.into()
        } else {
            PolyError::InvalidComponentDegree {
                index: 0,
                degree: fi.degree(),
            }
            .into()
        });
    }
    let lead = fi.leading_form()?;
    Ok(verdict_from_lead(&lead, cone, sample, tol_pos, REFINE_BUDGET))
}

fn verdict_from_lead(
    lead: &Polynomial,
    cone: &Cone,
    sample: &BaseSample,
    tol_pos: f64,
    refine_budget: usize,
) -> ScalarRecessionVerdict {
    if sample.points.is_empty() {
        // The cone is {0}: K is bounded and the recession problem is trivial.
        return ScalarRecessionVerdict {
            kind: VerdictKind::OnlyZero,
            witness: None,
            min_on_base: f64::INFINITY,
        };
    }
    let values: Vec<f64> = sample.points.iter().map(|p| lead.eval(p)).collect();
    let coarse = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
        .expect("nonempty");
    let (refined_point, refined_value) = refine_on_base(
        |x| lead.eval(x),
        cone,
        &sample.points[coarse],
        refine_budget,
    );
    if refined_value < -tol_pos {
        return ScalarRecessionVerdict {
            kind: VerdictKind::Empty,
            witness: Some(refined_point),
            min_on_base: refined_value,
        };
    }
    if refined_value > tol_pos {
        return ScalarRecessionVerdict {
            kind: VerdictKind::OnlyZero,
            witness: None,
            min_on_base: refined_value,
        };
    }
    // In the dead zone: the witness is the best sampled annihilator
    // (smallest magnitude, ties broken lexicographically), so exact zeros
    // on snapped rays win over near-misses.
    let witness = sample
        .points
        .iter()
        .zip(&values)
        .filter(|(_, v)| math::abs(**v) <= tol_pos)
        .min_by(|(pa, va), (pb, vb)| {
            math::abs(**va)
                .total_cmp(&math::abs(**vb))
                .then_with(|| lex_cmp(pa, pb))
        })
        .map(|(p, _)| p.clone())
        .unwrap_or(refined_point);
    let check = lead.eval(&witness);
    if math::abs(check) > 10.0 * tol_pos {
        // Re-evaluation disagrees with the tracked minimum; refuse to guess.
        return ScalarRecessionVerdict {
            kind: VerdictKind::Inconclusive,
            witness: Some(witness),
            min_on_base: refined_value,
        };
    }
    ScalarRecessionVerdict {
        kind: VerdictKind::HasNonzero,
        witness: Some(witness),
        min_on_base: refined_value,
    }
}

/// Searches the base for a direction strictly decreasing every leading form
/// at once. Finding one proves the recession weak front empty; finding none
/// leaves the origin weak Pareto efficient (on the samples).
pub fn zero_weak_status(
    f: &VectorPolynomial,
    cone: &Cone,
    sample: &BaseSample,
    tol: f64,
) -> ZeroWeakStatus {
    if sample.points.is_empty() {
        return ZeroWeakStatus::ZeroIsWeakPareto;
    }
    let lead = f.leading_form();
    let worst = |x: &[f64]| {
        lead.components()
            .iter()
            .map(|c| c.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let coarse = sample
        .points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| worst(a).total_cmp(&worst(b)))
        .map(|(i, _)| i)
        .expect("nonempty");
    let (point, value) = refine_on_base(worst, cone, &sample.points[coarse], REFINE_BUDGET);
    if value < -tol {
        let leading_values = lead.eval(&point);
        ZeroWeakStatus::ZeroNotWeakPareto {
            witness: point,
            leading_values,
        }
    } else {
        ZeroWeakStatus::ZeroIsWeakPareto
    }
}

/// Scales for the cone-ray comparisons of the weak-regularity search.
const SCALING_GRID: [f64; 9] = [1e-3, 1e-2, 1e-1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e3];

/// Full regularity pipeline for an instance.
pub fn analyze_regularity(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    opts: &AnalyzerOptions,
) -> RegularityReport {
    let cone = set.asymptotic_cone();
    let sample = sample_base(&cone, opts.samples, opts.seed);
    analyze_on_cone(f, &cone, &sample, opts)
}

/// Same pipeline with caller-supplied cone and base sample.
pub fn analyze_on_cone(
    f: &VectorPolynomial,
    cone: &Cone,
    sample: &BaseSample,
    opts: &AnalyzerOptions,
) -> RegularityReport {
    let lead = f.leading_form();
    let degrees = f.degrees();
    let per_component: Vec<ScalarRecessionVerdict> = lead
        .components()
        .iter()
        .map(|c| verdict_from_lead(c, cone, sample, opts.tol_pos, opts.refine_budget))
        .collect();

    let all_only_zero = per_component
        .iter()
        .all(|v| v.kind == VerdictKind::OnlyZero);
    if all_only_zero {
        let report = RegularityReport {
            strong: StrongVerdict::Yes(StrongReason::WeakSolSetIsZero),
            weak: WeakVerdict::Yes,
            per_component,
            zero_weak: ZeroWeakStatus::ZeroIsWeakPareto,
            f_bounded_below_implied: TriState::Yes,
            samples_used: sample.points.len(),
        };
        debug_assert!(strong_reason_matches_components(&report));
        return report;
    }

    let zero_weak = zero_weak_status(f, cone, sample, opts.tol_pos);
    if let ZeroWeakStatus::ZeroNotWeakPareto { witness, .. } = &zero_weak {
        let report = RegularityReport {
            strong: StrongVerdict::Yes(StrongReason::WeakSolSetEmpty {
                witness: witness.clone(),
            }),
            weak: WeakVerdict::Yes,
            per_component,
            zero_weak: zero_weak.clone(),
            // Empty recession weak front makes every component unbounded
            // from below on K.
            f_bounded_below_implied: TriState::No,
            samples_used: sample.points.len(),
        };
        debug_assert!(strong_reason_matches_components(&report));
        return report;
    }

    // Strong regularity fails; hunt for a validated nonzero weak-Pareto
    // direction among the samples and the per-component witnesses.
    let values: Vec<Vec<f64>> = sample.points.iter().map(|p| lead.eval(p)).collect();
    let mut candidates: Vec<Vec<f64>> = sample.points.clone();
    for v in per_component.iter().filter_map(|v| v.witness.as_ref()) {
        candidates.push(v.clone());
    }
    candidates.sort_by(|a, b| lex_cmp(a, b));
    candidates.dedup();

    let strong = candidates
        .iter()
        .find(|cand| {
            let cand_values = lead.eval(cand);
            !values.iter().any(|w_values| {
                w_values
                    .iter()
                    .zip(&cand_values)
                    .all(|(w, c)| *w < c - opts.tol_pos)
            })
        })
        .map(|witness| StrongVerdict::No {
            witness: witness.clone(),
            validated_against: sample.points.len(),
        })
        .unwrap_or(StrongVerdict::Inconclusive);

    // Weak regularity: look for a sampled nonzero Pareto-efficient
    // candidate, comparing against the origin and log-spaced scalings of
    // every sampled ray.
    let weak = candidates
        .iter()
        .find(|cand| {
            let cand_values = lead.eval(cand);
            let zero_dominates = cand_values.iter().all(|c| *c >= -opts.tol_pos)
                && cand_values.iter().any(|c| *c > opts.tol_pos);
            if zero_dominates {
                return false;
            }
            !values.iter().any(|w_values| {
                SCALING_GRID.iter().any(|t| {
                    let scaled: Vec<f64> = w_values
                        .iter()
                        .zip(&degrees)
                        .map(|(v, d)| math::powu(*t, *d) * v)
                        .collect();
                    crate::oracle::dominates(
                        &scaled,
                        &cand_values,
                        crate::oracle::DominanceMode::Strict,
                        opts.tol_pos,
                    )
                })
            })
        })
        .map(|candidate| WeakVerdict::No {
            candidate: candidate.clone(),
            validated_against: sample.points.len() * SCALING_GRID.len() + 1,
        })
        .unwrap_or(WeakVerdict::Inconclusive);

    let report = RegularityReport {
        strong,
        weak,
        per_component,
        zero_weak,
        f_bounded_below_implied: TriState::Unknown,
        samples_used: sample.points.len(),
    };
    debug_assert!(strong_reason_matches_components(&report));
    report
}

fn strong_reason_matches_components(report: &RegularityReport) -> bool {
    let all_only_zero = report
        .per_component
        .iter()
        .all(|v| v.kind == VerdictKind::OnlyZero);
    matches!(
        report.strong,
        StrongVerdict::Yes(StrongReason::WeakSolSetIsZero)
    ) == all_only_zero
}

/// Verdict of the weak complementarity check on `(cone, grad f_inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum R0Verdict {
    /// No sampled base point solved the complementarity system: evidence
    /// that only the origin solves it.
    YesSampled,
    No,
}

#[derive(Debug, Clone, PartialEq)]
pub struct R0Report {
    pub verdict: R0Verdict,
    /// A nonzero base point solving both sampled conditions, when found.
    pub witness: Option<Vec<f64>>,
    /// The complementarity products `(d_i * f_inf_i(x))_i` at the witness.
    pub witness_condition: Option<Vec<f64>>,
    pub samples_checked: usize,
}

impl R0Report {
    pub fn is_r0(&self) -> bool {
        self.verdict == R0Verdict::YesSampled
    }
}

/// Rows are the gradients of the leading forms at `x`; the finite matrix
/// representation of the recession gradient operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMatrix {
    pub rows: Vec<Vec<f64>>,
}

pub fn gradient_matrix(leading: &VectorPolynomial, x: &[f64]) -> GradientMatrix {
    GradientMatrix {
        rows: leading
            .components()
            .iter()
            .map(|c| c.gradient(x))
            .collect(),
    }
}

/// Checks whether only the origin solves the weak vector complementarity
/// problem on the cone with the recession gradients.
///
/// For each sampled base point `x`, condition (a) asks that the vector of
/// Euler products `(d_i * f_inf_i(x))_i` not be strictly positive, and
/// condition (b) asks that for every sampled `w` the vector of directional
/// derivatives `(grad f_inf_i(x) . w)_i` not be strictly negative. A point
/// satisfying both is a nonzero complementarity solution and refutes the
/// property; otherwise the check reports a sampled "yes".
pub fn wvcp_r0_check(
    f: &VectorPolynomial,
    cone: &Cone,
    sample: &BaseSample,
    tol: f64,
) -> R0Report {
    let _ = cone;
    let lead = f.leading_form();
    let degrees = f.degrees();
    let points = &sample.points;
    let mut witnesses: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for x in points {
        let euler: Vec<f64> = lead
            .components()
            .iter()
            .zip(&degrees)
            .map(|(c, d)| *d as f64 * c.eval(x))
            .collect();
        let interior_positive = euler.iter().all(|v| *v > tol);
        if interior_positive {
            continue; // condition (a) fails at x
        }
        let grads = gradient_matrix(&lead, x);
        let weak_dual = points.iter().all(|w| {
            grads
                .rows
                .iter()
                .any(|row| dot(row, w) >= -tol)
        });
        if weak_dual {
            witnesses.push((x.clone(), euler));
        }
    }
    witnesses.sort_by(|(a, _), (b, _)| lex_cmp(a, b));
    match witnesses.into_iter().next() {
        Some((witness, euler)) => R0Report {
            verdict: R0Verdict::No,
            witness: Some(witness),
            witness_condition: Some(euler),
            samples_checked: points.len(),
        },
        None => R0Report {
            verdict: R0Verdict::YesSampled,
            witness: None,
            witness_condition: None,
            samples_checked: points.len(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, VectorPolynomial};
    use crate::sets::{sample_base, Cone, ConstraintSet};
    use alloc::vec;

    fn sector_x2_ge_x1() -> Cone {
        Cone::new(2, vec![vec![1.0, 0.0], vec![-1.0, 1.0]]).unwrap()
    }

    fn sector_x1_ge_x2() -> Cone {
        Cone::new(2, vec![vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    fn quadrant() -> Cone {
        Cone::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn sample(cone: &Cone) -> BaseSample {
        sample_base(cone, 360, 0)
    }

    #[test]
    fn verdict_only_zero_on_sector() {
        // Leading form x2^3 on the sector x2 >= x1 >= 0 stays positive.
        let fi = poly(
            2,
            &[(1.0, &[0, 3]), (-1.0, &[2, 0]), (-1.0, &[1, 1]), (1.0, &[0, 0])],
        );
        let cone = sector_x2_ge_x1();
        let v = scalar_recession_verdict(&fi, &cone, &sample(&cone), TOL_POS).unwrap();
        assert_eq!(v.kind, VerdictKind::OnlyZero);
        assert!(v.min_on_base > 0.3);
    }

    #[test]
    fn verdict_pair_on_lower_sector() {
        let cone = sector_x1_ge_x2();
        let s = sample(&cone);
        let cubic = poly(2, &[(1.0, &[3, 0])]);
        let v = scalar_recession_verdict(&cubic, &cone, &s, TOL_POS).unwrap();
        assert_eq!(v.kind, VerdictKind::OnlyZero);

        let neg_square = poly(2, &[(-1.0, &[2, 0]), (1.0, &[0, 1])]);
        let v = scalar_recession_verdict(&neg_square, &cone, &s, TOL_POS).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        let w = v.witness.unwrap();
        assert!((w[0] - 1.0).abs() < 1e-6 && w[1].abs() < 1e-6);
    }

    #[test]
    fn verdict_has_nonzero_on_quadrant() {
        let bilinear = poly(2, &[(1.0, &[1, 1]), (1.0, &[0, 0])]);
        let cone = quadrant();
        let v = scalar_recession_verdict(&bilinear, &cone, &sample(&cone), TOL_POS).unwrap();
        assert_eq!(v.kind, VerdictKind::HasNonzero);
        let w = v.witness.unwrap();
        assert!(w == vec![0.0, 1.0] || w == vec![1.0, 0.0]);
    }

    #[test]
    fn verdict_trivial_cone() {
        let line = Cone::new(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap();
        let fi = poly(2, &[(1.0, &[1, 0])]);
        let s = sample_base(&line, 30, 0);
        let v = scalar_recession_verdict(&fi, &line, &s, TOL_POS).unwrap();
        assert_eq!(v.kind, VerdictKind::OnlyZero);
        assert_eq!(v.min_on_base, f64::INFINITY);
    }

    #[test]
    fn verdict_rejects_constants() {
        let cone = quadrant();
        let s = sample(&cone);
        assert!(scalar_recession_verdict(&Polynomial::zero(2), &cone, &s, TOL_POS).is_err());
        assert!(
            scalar_recession_verdict(&Polynomial::constant(2, 3.0), &cone, &s, TOL_POS).is_err()
        );
    }

    #[test]
    fn scaling_invariance_of_verdicts() {
        let cone = sector_x2_ge_x1();
        let s = sample(&cone);
        for fi in [
            poly(2, &[(1.0, &[0, 3]), (1.0, &[1, 0])]),
            poly(2, &[(-1.0, &[0, 2]), (-1.0, &[1, 1])]),
            poly(2, &[(1.0, &[1, 1])]),
        ] {
            let base = scalar_recession_verdict(&fi, &cone, &s, TOL_POS).unwrap();
            for c in [0.5, 3.0, 250.0] {
                let scaled = scalar_recession_verdict(&fi.scale(c), &cone, &s, TOL_POS).unwrap();
                assert_eq!(scaled.kind, base.kind, "scale {c}");
            }
        }
    }

    fn descent_cone_instance() -> (VectorPolynomial, ConstraintSet) {
        let f = VectorPolynomial::new(vec![
            poly(
                2,
                &[
                    (1.0, &[3, 0]),
                    (-1.0, &[2, 1]),
                    (-3.0, &[1, 0]),
                    (2.0, &[0, 1]),
                    (1.0, &[0, 0]),
                ],
            ),
            poly(
                2,
                &[(-1.0, &[0, 2]), (-1.0, &[1, 1]), (1.0, &[1, 0]), (-1.0, &[0, 0])],
            ),
        ])
        .unwrap();
        let k = ConstraintSet::polyhedron(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
            vec![0.0, 0.0],
            vec![1.0, 2.0],
        )
        .unwrap();
        (f, k)
    }

    #[test]
    fn zero_weak_status_finds_descent_direction() {
        let (f, k) = descent_cone_instance();
        let cone = k.asymptotic_cone();
        let s = sample(&cone);
        match zero_weak_status(&f, &cone, &s, TOL_POS) {
            ZeroWeakStatus::ZeroNotWeakPareto {
                witness,
                leading_values,
            } => {
                assert!(leading_values.iter().all(|v| *v < 0.0));
                // Consistency along the ray: at t = 1e3 the witness beats
                // every sampled direction in every component.
                let lead = f.leading_form();
                let scaled: Vec<f64> = witness.iter().map(|v| 1e3 * v).collect();
                let wv = lead.eval(&scaled);
                for u in s.points.iter().take(10) {
                    let uv = lead.eval(u);
                    assert!(wv.iter().zip(&uv).all(|(a, b)| a < b));
                }
            }
            other => panic!("expected descent direction, got {other:?}"),
        }
    }

    #[test]
    fn zero_weak_status_on_squares() {
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0])]),
            poly(2, &[(1.0, &[0, 2])]),
        ])
        .unwrap();
        let cone = quadrant();
        assert_eq!(
            zero_weak_status(&f, &cone, &sample(&cone), TOL_POS),
            ZeroWeakStatus::ZeroIsWeakPareto
        );

        // Trivial cone: nothing to search.
        let line = Cone::new(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap();
        assert_eq!(
            zero_weak_status(&f, &line, &sample_base(&line, 10, 0), TOL_POS),
            ZeroWeakStatus::ZeroIsWeakPareto
        );
    }

    #[test]
    fn analyze_strongly_regular_via_empty() {
        let (f, k) = descent_cone_instance();
        let report = analyze_regularity(&f, &k, &AnalyzerOptions::default());
        assert!(matches!(
            report.strong,
            StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { .. })
        ));
        assert_eq!(report.weak, WeakVerdict::Yes);
        assert_eq!(report.f_bounded_below_implied, TriState::No);
        assert!(report
            .per_component
            .iter()
            .all(|v| v.kind == VerdictKind::Empty));
    }

    #[test]
    fn analyze_strong_no_with_witness() {
        // f = (x1^3 - x2 + 1, x2^3 - x1 - 1) on the first quadrant: both
        // scalar verdicts have nonzero annihilators on the axes and the
        // strong verdict fails with a validated witness.
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[3, 0]), (-1.0, &[0, 1]), (1.0, &[0, 0])]),
            poly(2, &[(1.0, &[0, 3]), (-1.0, &[1, 0]), (-1.0, &[0, 0])]),
        ])
        .unwrap();
        let k = ConstraintSet::polyhedron(
            2,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        )
        .unwrap();
        let report = analyze_regularity(&f, &k, &AnalyzerOptions::default());
        for v in &report.per_component {
            assert_eq!(v.kind, VerdictKind::HasNonzero);
            let w = v.witness.as_ref().unwrap();
            assert!(w.iter().any(|c| *c == 0.0), "witness on an axis: {w:?}");
        }
        match &report.strong {
            StrongVerdict::No {
                witness,
                validated_against,
            } => {
                assert!(*validated_against > 0);
                assert!(crate::vecmath::norm(witness) > 0.9);
            }
            other => panic!("expected strong No, got {other:?}"),
        }
        // Every nonzero candidate is dominated by the origin here, so the
        // weak verdict stays a designed Inconclusive.
        assert_eq!(report.weak, WeakVerdict::Inconclusive);
    }

    #[test]
    fn analyze_reports_bounded_below_for_only_zero() {
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])]),
            poly(2, &[(1.0, &[0, 2]), (1.0, &[1, 0])]),
        ])
        .unwrap();
        let k = ConstraintSet::polyhedron(
            2,
            vec![vec![-1.0, 1.0], vec![1.0, 0.0]],
            vec![0.0, 0.0],
            vec![1.0, 2.0],
        )
        .unwrap();
        let report = analyze_regularity(&f, &k, &AnalyzerOptions::default());
        assert!(matches!(
            report.strong,
            StrongVerdict::Yes(StrongReason::WeakSolSetIsZero)
        ));
        assert_eq!(report.f_bounded_below_implied, TriState::Yes);
        // No sampled direction makes any component negative.
        let lead = f.leading_form();
        let cone = k.asymptotic_cone();
        for p in &sample(&cone).points {
            for c in lead.components() {
                assert!(c.eval(p) > -TOL_POS);
            }
        }
    }

    #[test]
    fn analyzer_is_deterministic() {
        let (f, k) = descent_cone_instance();
        let opts = AnalyzerOptions {
            seed: 42,
            ..Default::default()
        };
        let a = analyze_regularity(&f, &k, &opts);
        let b = analyze_regularity(&f, &k, &opts);
        assert_eq!(a, b);
    }

    #[test]
    fn r0_yes_on_nested_quadratics() {
        // f = (x1^2 + x2^2, x2^2) on the sector x2 >= x1 >= 0: the Euler
        // products are strictly positive at every nonzero base point.
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])]),
            poly(2, &[(1.0, &[0, 2])]),
        ])
        .unwrap();
        let cone = sector_x2_ge_x1();
        let report = wvcp_r0_check(&f, &cone, &sample(&cone), TOL_POS);
        assert!(report.is_r0());
        assert!(report.witness.is_none());
        assert!(report.samples_checked > 300);
    }

    #[test]
    fn r0_no_on_separable_squares() {
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0])]),
            poly(2, &[(1.0, &[0, 2])]),
        ])
        .unwrap();
        let cone = quadrant();
        let report = wvcp_r0_check(&f, &cone, &sample(&cone), TOL_POS);
        assert_eq!(report.verdict, R0Verdict::No);
        assert_eq!(report.witness.as_deref(), Some([0.0, 1.0].as_slice()));
        assert_eq!(report.witness_condition.as_deref(), Some([0.0, 2.0].as_slice()));
    }

    #[test]
    fn r0_trivial_cone_is_yes() {
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0])]),
            poly(2, &[(1.0, &[0, 2])]),
        ])
        .unwrap();
        let line = Cone::new(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap();
        let report = wvcp_r0_check(&f, &line, &sample_base(&line, 10, 0), TOL_POS);
        assert!(report.is_r0());
        assert_eq!(report.samples_checked, 0);
    }

    #[test]
    fn gradient_matrix_rows_match_component_gradients() {
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])]),
            poly(2, &[(1.0, &[0, 2])]),
        ])
        .unwrap();
        let lead = f.leading_form();
        let x = [0.3, 0.8];
        let m = gradient_matrix(&lead, &x);
        assert_eq!(m.rows.len(), 2);
        assert_eq!(m.rows[0], lead.component(0).gradient(&x));
        assert_eq!(m.rows[1], lead.component(1).gradient(&x));
        assert_eq!(m.rows[0], vec![0.6, 1.6]);
    }

    #[test]
    fn r0_yes_implies_not_strong_no_on_random_convex_instances() {
        // Sampled form of the implication "complementarity regularity on a
        // convex cone forces strong regularity": whenever the check says
        // yes, the analyzer must not produce a validated strong-No witness.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let opts = AnalyzerOptions::default();
        for trial in 0..40 {
            let rows = vec![
                vec![1.0, rng.random_range(-0.5..0.5)],
                vec![rng.random_range(-0.5..0.5), 1.0],
            ];
            let witness = vec![5.0, 5.0];
            let Ok(k) = ConstraintSet::polyhedron(2, rows, vec![0.0, 0.0], witness) else {
                continue;
            };
            let mut comps = Vec::new();
            for _ in 0..2 {
                let a = rng.random_range(0.2..2.0);
                let b = rng.random_range(-1.0..1.0);
                let c = rng.random_range(0.2..2.0);
                comps.push(poly(
                    2,
                    &[(a, &[2, 0]), (b, &[1, 1]), (c, &[0, 2]), (1.0, &[1, 0])],
                ));
            }
            let f = VectorPolynomial::new(comps).unwrap();
            let cone = k.asymptotic_cone();
            let s = sample_base(&cone, opts.samples, opts.seed);
            let r0 = wvcp_r0_check(&f, &cone, &s, opts.tol_pos);
            if r0.is_r0() {
                let report = analyze_regularity(&f, &k, &opts);
                assert!(
                    !matches!(report.strong, StrongVerdict::No { .. }),
                    "trial {trial}: complementarity yes but strong no"
                );
            }
        }
    }
}
