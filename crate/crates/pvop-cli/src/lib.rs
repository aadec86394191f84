//! Instance files, report rendering, and subcommand runners for the `pvop`
//! binary. Kept as a library so the regression and acceptance suites can
//! drive the exact code paths the CLI uses.

pub mod fixtures;
pub mod instance;
pub mod render;
pub mod runner;

pub use instance::{Expected, Instance, SolverExpectation};
