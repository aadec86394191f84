//! Closed constraint sets, their asymptotic cones, and sampling of the
//! cone's spherical base.
//!
//! Two set kinds are supported. A polyhedron `Ax >= b` knows its asymptotic
//! cone exactly: for convex sets the asymptotic cone is the recession cone,
//! which here is `{v : Av >= 0}`. A custom set is a list of expression
//! constraints `g_i(x) >= 0` and must *declare* its asymptotic cone, since
//! no general algorithm recovers the cone of an arbitrary closed set; the
//! declaration can be cross-checked heuristically with
//! [`validate_declared_cone`].

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::ConstraintExpr;
use crate::math;
use crate::search::compass_minimize;
use crate::vecmath::{self, dist, dot, lex_cmp, normalized, scaled, unit_sphere_sample};

/// Feasibility tolerance for cone inequalities on unit vectors.
pub const CONE_FEASIBILITY_TOL: f64 = 1e-10;
/// Feasibility tolerance for general set membership.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum SetError {
    RowArity { expected: usize, found: usize },
    RhsArity { rows: usize, found: usize },
    WitnessArity { expected: usize, found: usize },
    /// The supplied nonemptiness witness fails membership.
    InfeasibleWitness,
    /// A constraint references a variable outside `x1..xn`.
    VariableOutOfRange { index: usize, n: usize },
    ConeDimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::RowArity { expected, found } => {
                write!(f, "matrix row has {found} entries, expected {expected}")
            }
            SetError::RhsArity { rows, found } => {
                write!(f, "right-hand side has {found} entries for {rows} rows")
            }
            SetError::WitnessArity { expected, found } => {
                write!(f, "witness has {found} entries, expected {expected}")
            }
            SetError::InfeasibleWitness => write!(f, "witness point fails set membership"),
            SetError::VariableOutOfRange { index, n } => {
                write!(f, "constraint uses x{} but the set has {n} variables", index + 1)
            }
            SetError::ConeDimensionMismatch { expected, found } => {
                write!(f, "declared cone is in dimension {found}, expected {expected}")
            }
        }
    }
}

impl core::error::Error for SetError {}

/// Polyhedral cone `{v : Av >= 0}`. Contains the origin and is closed under
/// positive scaling by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl Cone {
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self, SetError> {
        for row in &rows {
            if row.len() != n {
                return Err(SetError::RowArity {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Ok(Cone { n, rows })
    }

    /// The whole space: no inequalities.
    pub fn full(n: usize) -> Self {
        Cone { n, rows: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        debug_assert_eq!(v.len(), self.n);
        self.rows.iter().all(|row| dot(row, v) >= -tol)
    }

    /// Total violation of the cone inequalities at `v`.
    pub fn violation(&self, v: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|row| (-dot(row, v)).max(0.0))
            .sum()
    }
}

/// The two supported constraint-set representations.
#[derive(Debug, Clone)]
pub enum SetKind {
    /// `{x : Ax >= b}`.
    Polyhedron { a: Vec<Vec<f64>>, b: Vec<f64> },
    /// `{x : g_i(x) >= 0}` with a declared asymptotic cone.
    Custom {
        constraints: Vec<ConstraintExpr>,
        declared_cone: Cone,
    },
}

/// A nonempty closed subset of `R^n` with a membership oracle, a feasible
/// witness point, and an asymptotic cone.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    n: usize,
    kind: SetKind,
    witness: Vec<f64>,
}

impl ConstraintSet {
    pub fn polyhedron(
        n: usize,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        witness: Vec<f64>,
    ) -> Result<Self, SetError> {
        for row in &a {
            if row.len() != n {
                return Err(SetError::RowArity {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if b.len() != a.len() {
            return Err(SetError::RhsArity {
                rows: a.len(),
                found: b.len(),
            });
        }
        let set = ConstraintSet {
            n,
            kind: SetKind::Polyhedron { a, b },
            witness,
        };
        set.check_witness()?;
        Ok(set)
    }

    pub fn custom(
        n: usize,
        constraints: Vec<ConstraintExpr>,
        declared_cone: Cone,
        witness: Vec<f64>,
    ) -> Result<Self, SetError> {
        for c in &constraints {
            if let Some(max) = c.max_var() {
                if max >= n {
                    return Err(SetError::VariableOutOfRange { index: max, n });
                }
            }
        }
        if declared_cone.n() != n {
            return Err(SetError::ConeDimensionMismatch {
                expected: n,
                found: declared_cone.n(),
            });
        }
        let set = ConstraintSet {
            n,
            kind: SetKind::Custom {
                constraints,
                declared_cone,
            },
            witness,
        };
        set.check_witness()?;
        Ok(set)
    }

    fn check_witness(&self) -> Result<(), SetError> {
        if self.witness.len() != self.n {
            return Err(SetError::WitnessArity {
                expected: self.n,
                found: self.witness.len(),
            });
        }
        if !self.membership(&self.witness, MEMBERSHIP_TOL) {
            return Err(SetError::InfeasibleWitness);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn witness(&self) -> &[f64] {
        &self.witness
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self.kind, SetKind::Polyhedron { .. })
    }

    /// True iff every constraint holds within `tol`.
    pub fn membership(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        match &self.kind {
            SetKind::Polyhedron { a, b } => a
                .iter()
                .zip(b)
                .all(|(row, rhs)| dot(row, x) >= rhs - tol),
            SetKind::Custom { constraints, .. } => {
                constraints.iter().all(|c| c.eval(x) >= -tol)
            }
        }
    }

    /// Membership at the default tolerance.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.membership(x, MEMBERSHIP_TOL)
    }

    /// Total constraint violation at `x` (zero inside the set).
    pub fn violation(&self, x: &[f64]) -> f64 {
        match &self.kind {
            SetKind::Polyhedron { a, b } => a
                .iter()
                .zip(b)
                .map(|(row, rhs)| (rhs - dot(row, x)).max(0.0))
                .sum(),
            SetKind::Custom { constraints, .. } => constraints
                .iter()
                .map(|c| (-c.eval(x)).max(0.0))
                .sum(),
        }
    }

    /// The asymptotic cone. For a polyhedron this is the recession cone
    /// `{v : Av >= 0}` (for convex sets the asymptotic and recession cones
    /// coincide); for a custom set it is the declared cone.
    pub fn asymptotic_cone(&self) -> Cone {
        match &self.kind {
            SetKind::Polyhedron { a, .. } => Cone {
                n: self.n,
                rows: a.clone(),
            },
            SetKind::Custom { declared_cone, .. } => declared_cone.clone(),
        }
    }
}

/// Unit vectors spanning the cone's spherical base, deterministic for a
/// fixed seed.
#[derive(Debug, Clone)]
pub struct BaseSample {
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
    pub count: usize,
}

/// Samples the spherical base of a polyhedral cone.
///
/// In the plane the feasible arcs are located by a dense sweep, their
/// endpoints are refined by bisection, and `count` points are spread
/// uniformly across them, so planar instances are reproduced without
/// sampling variance. In higher dimensions rejection sampling from the
/// sphere is combined with the cone's extreme-ray candidates (row
/// orthogonals for n=2, pairwise row cross products for n=3). A `{0}` cone
/// yields an empty sample, which flags a bounded set.
pub fn sample_base(cone: &Cone, count: usize, seed: u64) -> BaseSample {
    let mut points: Vec<Vec<f64>> = Vec::new();
    match cone.n() {
        0 => {}
        1 => {
            for dir in [1.0, -1.0] {
                if cone.contains(&[dir], CONE_FEASIBILITY_TOL) {
                    points.push(alloc::vec![dir]);
                }
            }
        }
        2 => {
            points = planar_sweep(cone, count.max(1));
            points.extend(planar_ray_candidates(cone));
        }
        n => {
            points = rejection_sample(cone, count.max(1), seed, n);
            if n == 3 {
                points.extend(cross_ray_candidates(cone));
            }
        }
    }
    let mut cleaned: Vec<Vec<f64>> = points
        .into_iter()
        .filter_map(|p| snap_unit(&p))
        .filter(|p| cone.contains(p, CONE_FEASIBILITY_TOL))
        .collect();
    cleaned.sort_by(|a, b| lex_cmp(a, b));
    cleaned.dedup();
    BaseSample {
        points: cleaned,
        seed,
        count,
    }
}

fn unit_at(theta: f64) -> Vec<f64> {
    alloc::vec![math::cos(theta), math::sin(theta)]
}

/// Snaps near-zero coordinates to exact zero and renormalizes, so that rays
/// along the axes come out bit-exact.
fn snap_unit(p: &[f64]) -> Option<Vec<f64>> {
    let snapped: Vec<f64> = p
        .iter()
        .map(|&c| if math::abs(c) <= 1e-12 { 0.0 } else { c })
        .collect();
    normalized(&snapped)
}

fn planar_sweep(cone: &Cone, count: usize) -> Vec<Vec<f64>> {
    const PRESCREEN: usize = 2880;
    // Exact feasibility here: arc endpoints then converge to the true
    // boundary, where near-zero coordinates snap cleanly. Points rays the
    // exact sweep misses are recovered by the row-orthogonal candidates.
    let feasible: Vec<bool> = (0..PRESCREEN)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / PRESCREEN as f64;
            cone.contains(&unit_at(theta), 0.0)
        })
        .collect();

    if feasible.iter().all(|&f| f) {
        return (0..count)
            .map(|k| unit_at(2.0 * PI * k as f64 / count as f64))
            .collect();
    }
    if feasible.iter().all(|&f| !f) {
        return Vec::new();
    }

    // Maximal feasible runs, merged across the wraparound.
    let start = feasible.iter().position(|&f| !f).expect("some infeasible");
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut run_start: Option<usize> = None;
    for offset in 1..=PRESCREEN {
        let idx = (start + offset) % PRESCREEN;
        if feasible[idx] {
            if run_start.is_none() {
                run_start = Some(start + offset);
            }
        } else if let Some(s) = run_start.take() {
            runs.push((s, start + offset - 1));
        }
    }

    let step = 2.0 * PI / PRESCREEN as f64;
    let mut arcs: Vec<(f64, f64)> = Vec::new();
    for (s, e) in runs {
        let lo = refine_boundary(cone, s as f64 * step, (s as f64 - 1.0) * step);
        let hi = refine_boundary(cone, e as f64 * step, (e as f64 + 1.0) * step);
        arcs.push((lo, hi));
    }

    let total: f64 = arcs.iter().map(|(lo, hi)| hi - lo).sum();
    let mut points = Vec::new();
    for (lo, hi) in arcs {
        let len = hi - lo;
        let share = if total > 0.0 {
            (math::round(count as f64 * len / total) as usize).max(1)
        } else {
            1
        };
        if share == 1 || len == 0.0 {
            points.push(unit_at(0.5 * (lo + hi)));
            continue;
        }
        for k in 0..share {
            let theta = lo + len * k as f64 / (share - 1) as f64;
            points.push(unit_at(theta));
        }
    }
    points
}

/// Bisects between a feasible and an infeasible angle, returning a feasible
/// angle on the boundary.
fn refine_boundary(cone: &Cone, mut feasible: f64, mut infeasible: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (feasible + infeasible);
        if cone.contains(&unit_at(mid), 0.0) {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    feasible
}

fn planar_ray_candidates(cone: &Cone) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for row in cone.rows() {
        let ray = [-row[1], row[0]];
        for sign in [1.0, -1.0] {
            if let Some(u) = normalized(&scaled(&ray, sign)) {
                out.push(u);
            }
        }
    }
    out
}

fn cross_ray_candidates(cone: &Cone) -> Vec<Vec<f64>> {
    let rows = cone.rows();
    let mut out = Vec::new();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            let cross = alloc::vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            for sign in [1.0, -1.0] {
                if let Some(u) = normalized(&scaled(&cross, sign)) {
                    out.push(u);
                }
            }
        }
    }
    out
}

fn rejection_sample(cone: &Cone, count: usize, seed: u64, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let budget = 400 * count;
    for _ in 0..budget {
        if out.len() >= count {
            break;
        }
        let v = unit_sphere_sample(&mut rng, n);
        if cone.contains(&v, CONE_FEASIBILITY_TOL) {
            out.push(v);
        }
    }
    out
}

/// One direction's outcome in a declared-cone validation.
#[derive(Debug, Clone)]
pub struct DirectionCheck {
    pub direction: Vec<f64>,
    /// Scaled distances `|x_t / t - v|` of the best feasible point found
    /// near `t * v`, for `t` in [`VALIDATION_SCALES`].
    pub distances: Vec<f64>,
    pub passed: bool,
}

/// Heuristic consistency report for a declared asymptotic cone. A pass is
/// evidence, not proof.
#[derive(Debug, Clone)]
pub struct ConeValidationReport {
    pub checks: Vec<DirectionCheck>,
    pub passed: bool,
}

impl ConeValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &DirectionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Growth scales probed by [`validate_declared_cone`].
pub const VALIDATION_SCALES: [f64; 3] = [10.0, 100.0, 1000.0];

/// Cross-checks a declared asymptotic cone against the set: along each
/// sampled cone direction `v` and scale `t` it searches for feasible points
/// `x` with `x/t` close to `v`; directions whose scaled distance fails to
/// shrink like `2.5 / sqrt(t)` are flagged.
pub fn validate_declared_cone(
    set: &ConstraintSet,
    cone: &Cone,
    trials: usize,
    seed: u64,
) -> ConeValidationReport {
    let sample = sample_base(cone, trials.max(1), seed);
    let mut checks = Vec::new();
    for direction in &sample.points {
        let mut distances = Vec::new();
        let mut passed = true;
        for &t in &VALIDATION_SCALES {
            let d = nearest_feasible_distance(set, direction, t);
            passed &= d <= 2.5 / math::sqrt(t);
            distances.push(d);
        }
        checks.push(DirectionCheck {
            direction: direction.clone(),
            distances,
            passed,
        });
    }
    let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
    ConeValidationReport { checks, passed }
}

/// Smallest `|x/t - v|` over feasible `x` found by penalized compass search
/// started from `t*v` and from the witness.
fn nearest_feasible_distance(set: &ConstraintSet, v: &[f64], t: f64) -> f64 {
    let target = scaled(v, t);
    let objective = |x: &[f64]| dist(&scaled(x, 1.0 / t), v) + 1e6 * set.violation(x);
    let starts = [target.clone(), set.witness().to_vec(), {
        vecmath::add(set.witness(), &target)
    }];
    let mut best = f64::INFINITY;
    for start in &starts {
        let out = compass_minimize(objective, |_| true, start, 0.5 * t, 1e-9 * t, 800);
        if set.violation(&out.point) <= 1e-6 {
            best = best.min(dist(&scaled(&out.point, 1.0 / t), v));
        }
    }
    best
}
