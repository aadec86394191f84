//! Derivative-free compass search over a feasibility oracle.
//!
//! Probes the `2n` axis moves at the current step length, takes the best
//! strictly improving feasible move, and halves the step when no move
//! improves. Deterministic for fixed inputs; used for boundary polishing in
//! the solver and for the constrained searches of the cone validator.

use alloc::vec::Vec;

pub struct CompassResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// True when the search stopped because the step shrank below
    /// `min_step` (as opposed to running out of budget).
    pub converged: bool,
}

/// Minimizes `objective` from a feasible `start`, restricted to points where
/// `feasible` holds. `start` itself must be feasible.
pub fn compass_minimize<F, G>(
    mut objective: F,
    mut feasible: G,
    start: &[f64],
    initial_step: f64,
    min_step: f64,
    budget: usize,
) -> CompassResult
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> bool,
{
    let n = start.len();
    let mut point = start.to_vec();
    let mut value = objective(&point);
    let mut evaluations = 1usize;
    let mut step = initial_step;
    let mut converged = false;

    while evaluations < budget {
        if step < min_step {
            converged = true;
            break;
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for axis in 0..n {
            for sign in [1.0, -1.0] {
                if evaluations >= budget {
                    break;
                }
                let mut cand = point.clone();
                cand[axis] += sign * step;
                if !feasible(&cand) {
                    continue;
                }
                let v = objective(&cand);
                evaluations += 1;
                if v < value && best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((cand, v));
                }
            }
        }
        match best {
            Some((cand, v)) => {
                point = cand;
                value = v;
                step *= 1.6;
            }
            None => step *= 0.5,
        }
    }

    CompassResult {
        point,
        value,
        evaluations,
        converged,
    }
}
