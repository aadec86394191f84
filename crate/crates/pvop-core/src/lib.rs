//! Core algorithms for polynomial vector optimization problems PVOP(K, f).
//!
//! A problem instance is a vector polynomial `f = (f_1, ..., f_s)` minimized
//! componentwise (Pareto sense) over a nonempty closed set `K` in R^n. The
//! crate decides recession-based regularity conditions of the instance,
//! searches for Pareto efficient points through weighted-sum scalarization
//! over sublevel sets, provides a brute-force grid oracle as independent
//! ground truth, and probes how verdicts behave under perturbations of the
//! objective coefficients.
//!
//! The crate is `no_std`-compatible (requires `alloc`); all file formats,
//! CSV emission, and the CLI live in the companion `pvop-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod expr;
pub mod math;
pub mod oracle;
pub mod poly;
pub mod regularity;
pub mod search;
pub mod sets;
pub mod solver;
pub mod stability;
pub mod vecmath;

pub use expr::{parse_constraint, ConstraintExpr, ParseError};
pub use oracle::{dominates, grid_front, DominanceMode, GridFront, GridWindow};
pub use poly::{CoefficientVector, Monomial, PolyError, Polynomial, VectorPolynomial};
pub use regularity::{
    analyze_regularity, wvcp_r0_check, AnalyzerOptions, R0Report, RegularityReport,
};
pub use sets::{sample_base, validate_declared_cone, BaseSample, Cone, ConstraintSet};
pub use solver::{certify_pareto, precheck_emptiness, solve, ParetoResult, SolveOptions};
