//! Instance file schema and conversion into core types.
//!
//! An instance is a JSON object:
//!
//! ```json
//! {
//!   "n": 2, "s": 2,
//!   "note": "free text",
//!   "objectives": [[{"coef": 1.0, "exps": [3, 0]}, ...], ...],
//!   "set": {"kind": "polyhedron", "A": [[...]], "b": [...]}
//!        | {"kind": "custom", "constraints": ["exp(x1 - 1) - x2", ...],
//!           "declared_cone": {"A": [[...]]}, "witness": [...]},
//!   "witness": [...],
//!   "window": {"lower": [...], "upper": [...], "resolution": 41},
//!   "expected": { ... }
//! }
//! ```
//!
//! The top-level `witness` is required for polyhedral sets and optional for
//! custom sets (which carry one inside `set`); it doubles as the default
//! start point for the solver.

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use pvop_core::oracle::GridWindow;
use pvop_core::poly::{Polynomial, VectorPolynomial};
use pvop_core::sets::{Cone, ConstraintSet};
use pvop_core::parse_constraint;

#[derive(Debug, Clone, Deserialize)]
pub struct RawTerm {
    pub coef: f64,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RawSet {
    Polyhedron {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Custom {
        constraints: Vec<String>,
        declared_cone: RawCone,
        witness: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawCone {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawWindow {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub resolution: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LeadingValuesAt {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SolverExpectation {
    pub lambdas: Option<Vec<Vec<f64>>>,
    pub x0: Option<Vec<f64>>,
    /// "found" (default) or "no_attained_minimum".
    pub expect: Option<String>,
    pub point: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub certify: Option<bool>,
}

/// Per-fixture expectations consumed by the `examples` subcommand.
#[derive(Debug, Clone, Deserialize)]
pub struct Expected {
    /// "yes_zero", "yes_empty", or "no".
    pub strong: Option<String>,
    /// "only_zero", "empty", "has_nonzero", "inconclusive" per component.
    pub component_verdicts: Option<Vec<String>>,
    pub witnesses_on_axes: Option<bool>,
    pub strong_witness_all_negative: Option<bool>,
    pub precheck_empty: Option<bool>,
    /// "yes" or "no".
    pub r0: Option<String>,
    pub r0_witness: Option<Vec<f64>>,
    pub r0_condition: Option<Vec<f64>>,
    pub leading_values_at: Option<LeadingValuesAt>,
    pub pareto_points_exact: Option<Vec<Vec<f64>>>,
    pub weak_equals_pareto: Option<bool>,
    pub pareto_contains_all_x1_zero: Option<bool>,
    pub front_radius_finite: Option<bool>,
    pub solver: Option<SolverExpectation>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawInstance {
    n: usize,
    s: usize,
    #[serde(default)]
    note: Option<String>,
    objectives: Vec<Vec<RawTerm>>,
    set: RawSet,
    #[serde(default)]
    witness: Option<Vec<f64>>,
    #[serde(default)]
    window: Option<RawWindow>,
    #[serde(default)]
    expected: Option<Expected>,
}

/// A parsed, validated problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub f: VectorPolynomial,
    pub set: ConstraintSet,
    /// Default solver start point.
    pub x0: Vec<f64>,
    pub window: Option<GridWindow>,
    pub expected: Option<Expected>,
    pub note: Option<String>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        let raw: RawInstance = serde_json::from_str(text).context("invalid instance file")?;
        if raw.objectives.len() != raw.s {
            bail!(
                "instance declares s = {} but provides {} objectives",
                raw.s,
                raw.objectives.len()
            );
        }
        let mut components = Vec::with_capacity(raw.s);
        for (i, terms) in raw.objectives.iter().enumerate() {
            let pairs: Vec<(f64, &[u32])> = terms
                .iter()
                .map(|t| (t.coef, t.exps.as_slice()))
                .collect();
            let p = Polynomial::from_terms(raw.n, &pairs)
                .map_err(|e| anyhow!("objective {}: {e}", i + 1))?;
            components.push(p);
        }
        let f = VectorPolynomial::new(components)
            .map_err(|e| anyhow!("objective vector: {e}"))?;

        let set = match &raw.set {
            RawSet::Polyhedron { a, b } => {
                let witness = raw
                    .witness
                    .clone()
                    .ok_or_else(|| anyhow!("polyhedral instances need a top-level witness"))?;
                ConstraintSet::polyhedron(raw.n, a.clone(), b.clone(), witness)
                    .map_err(|e| anyhow!("constraint set: {e}"))?
            }
            RawSet::Custom {
                constraints,
                declared_cone,
                witness,
            } => {
                let mut exprs = Vec::with_capacity(constraints.len());
                for (i, text) in constraints.iter().enumerate() {
                    let expr = parse_constraint(text)
                        .map_err(|e| anyhow!("constraint {}: {e}", i + 1))?;
                    exprs.push(expr);
                }
                let cone = Cone::new(raw.n, declared_cone.a.clone())
                    .map_err(|e| anyhow!("declared cone: {e}"))?;
                ConstraintSet::custom(raw.n, exprs, cone, witness.clone())
                    .map_err(|e| anyhow!("constraint set: {e}"))?
            }
        };

        let x0 = raw
            .witness
            .clone()
            .unwrap_or_else(|| set.witness().to_vec());
        if x0.len() != raw.n {
            bail!("witness has {} entries, expected {}", x0.len(), raw.n);
        }

        let window = match &raw.window {
            Some(w) => Some(
                GridWindow::new(w.lower.clone(), w.upper.clone(), w.resolution)
                    .map_err(|e| anyhow!("window: {e}"))?,
            ),
            None => None,
        };

        Ok(Instance {
            f,
            set,
            x0,
            window,
            expected: raw.expected,
            note: raw.note,
        })
    }
}
