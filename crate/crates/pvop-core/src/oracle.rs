//! Brute-force ground truth: grid enumeration of (weak) Pareto sets on
//! compact windows. Independent of the solver's descent machinery, so it
//! can certify or refute solver output.

use alloc::vec::Vec;
use core::fmt;

use crate::poly::VectorPolynomial;
use crate::sets::ConstraintSet;
use crate::vecmath::lex_cmp;

/// Dominance comparison tolerance, shared with the solver.
pub const DOMINANCE_TOL: f64 = 1e-8;

/// Grid enumeration is exponential in the dimension; the oracle refuses
/// anything beyond this.
pub const MAX_ORACLE_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooManyVariables { n: usize },
    WindowArity { expected: usize, found: usize },
    EmptyWindow,
    ResolutionTooSmall { resolution: usize },
    NoFeasibleNode,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyVariables { n } => {
                write!(f, "grid oracle supports up to {MAX_ORACLE_DIMENSION} variables, got {n}")
            }
            OracleError::WindowArity { expected, found } => {
                write!(f, "window bound has {found} entries, expected {expected}")
            }
            OracleError::EmptyWindow => write!(f, "window bounds must satisfy lower < upper"),
            OracleError::ResolutionTooSmall { resolution } => {
                write!(f, "grid resolution must be at least 2, got {resolution}")
            }
            OracleError::NoFeasibleNode => write!(f, "no feasible grid node in the window"),
        }
    }
}

impl core::error::Error for OracleError {}

/// Axis-aligned box with a per-axis node count.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWindow {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub resolution: usize,
}

impl GridWindow {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, resolution: usize) -> Result<Self, OracleError> {
        if lower.len() != upper.len() {
            return Err(OracleError::WindowArity {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(OracleError::EmptyWindow);
        }
        if resolution < 2 {
            return Err(OracleError::ResolutionTooSmall { resolution });
        }
        Ok(GridWindow {
            lower,
            upper,
            resolution,
        })
    }

    pub fn n(&self) -> usize {
        self.lower.len()
    }

    /// Axis step lengths.
    pub fn cell(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l) / (self.resolution - 1) as f64)
            .collect()
    }

    /// Scales the box about its center, keeping the physical cell size by
    /// scaling the node count along with it.
    pub fn scaled_about_center(&self, factor: f64) -> GridWindow {
        let lower: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u) - 0.5 * factor * (u - l))
            .collect();
        let upper: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u) + 0.5 * factor * (u - l))
            .collect();
        let resolution = crate::math::round((self.resolution - 1) as f64 * factor) as usize + 1;
        GridWindow {
            lower,
            upper,
            resolution,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceMode {
    /// Better or equal everywhere, strictly better somewhere.
    Strict,
    /// Strictly better everywhere.
    Weak,
}

/// Whether objective vector `a` dominates `b`.
pub fn dominates(a: &[f64], b: &[f64], mode: DominanceMode, tol: f64) -> bool {
    debug_assert_eq!(a.len(), b.len());
    match mode {
        DominanceMode::Strict => {
            a.iter().zip(b).all(|(x, y)| *x <= *y + tol)
                && a.iter().zip(b).any(|(x, y)| *x < *y - tol)
        }
        DominanceMode::Weak => a.iter().zip(b).all(|(x, y)| *x < *y - tol),
    }
}

/// A feasible grid node with its objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

/// Non-dominated subsets of the feasible grid nodes.
#[derive(Debug, Clone)]
pub struct GridFront {
    /// Nodes not strictly dominated by any feasible node.
    pub pareto: Vec<FrontPoint>,
    /// Nodes not weakly dominated (strictly better in every component)
    /// by any feasible node; always a superset of `pareto`.
    pub weak: Vec<FrontPoint>,
    pub feasible_count: usize,
    pub cell: Vec<f64>,
}

/// Visits every feasible grid node of the window; returns the feasible count.
pub fn feasible_grid<F: FnMut(&[f64])>(
    set: &ConstraintSet,
    window: &GridWindow,
    mut visit: F,
) -> Result<usize, OracleError> {
    let n = set.n();
    if n > MAX_ORACLE_DIMENSION {
        return Err(OracleError::TooManyVariables { n });
    }
    if window.n() != n {
        return Err(OracleError::WindowArity {
            expected: n,
            found: window.n(),
        });
    }
    let res = window.resolution;
    let mut index = alloc::vec![0usize; n];
    let mut x = alloc::vec![0.0f64; n];
    let cell = window.cell();
    let mut count = 0usize;
    loop {
        for (i, idx) in index.iter().enumerate() {
            x[i] = window.lower[i] + cell[i] * *idx as f64;
        }
        if set.contains(&x) {
            count += 1;
            visit(&x);
        }
        // Odometer increment over the multi-index.
        let mut axis = 0;
        loop {
            if axis == n {
                return Ok(count);
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

/// Enumerates feasible grid nodes and extracts the strict and weak Pareto
/// fronts by pairwise dominance. Output order is lexicographic in `x`.
pub fn grid_front(
    f: &VectorPolynomial,
    set: &ConstraintSet,
    window: &GridWindow,
) -> Result<GridFront, OracleError> {
    let mut nodes: Vec<FrontPoint> = Vec::new();
    feasible_grid(set, window, |x| {
        nodes.push(FrontPoint {
            x: x.to_vec(),
            values: f.eval(x),
        });
    })?;
    if nodes.is_empty() {
        return Err(OracleError::NoFeasibleNode);
    }

    // Scan candidates in ascending objective-sum order: likely dominators
    // come first, so dominated nodes exit early.
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    let sums: Vec<f64> = nodes
        .iter()
        .map(|p| p.values.iter().sum::<f64>())
        .collect();
    order.sort_by(|&i, &j| sums[i].total_cmp(&sums[j]).then(i.cmp(&j)));

    let mut pareto = Vec::new();
    let mut weak = Vec::new();
    for (qi, q) in nodes.iter().enumerate() {
        let mut strictly_dominated = false;
        let mut weakly_dominated = false;
        for &pi in &order {
            if pi == qi {
                continue;
            }
            let p = &nodes[pi];
            if dominates(&p.values, &q.values, DominanceMode::Weak, DOMINANCE_TOL) {
                weakly_dominated = true;
                strictly_dominated = true;
                break;
            }
            if !strictly_dominated
                && dominates(&p.values, &q.values, DominanceMode::Strict, DOMINANCE_TOL)
            {
                strictly_dominated = true;
            }
        }
        if !strictly_dominated {
            pareto.push(q.clone());
        }
        if !weakly_dominated {
            weak.push(q.clone());
        }
    }
    pareto.sort_by(|a, b| lex_cmp(&a.x, &b.x));
    weak.sort_by(|a, b| lex_cmp(&a.x, &b.x));
    debug_assert!(pareto.len() <= weak.len());
    Ok(GridFront {
        pareto,
        weak,
        feasible_count: nodes.len(),
        cell: window.cell(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, VectorPolynomial};
    use alloc::vec;

    fn shifted_quadrant() -> ConstraintSet {
        ConstraintSet::polyhedron(
            2,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
        )
        .unwrap()
    }

    fn bilinear_pair() -> VectorPolynomial {
        VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[1, 1]), (1.0, &[0, 0])]),
            poly(2, &[(1.0, &[1, 1]), (1.0, &[1, 0]), (-1.0, &[0, 0])]),
        ])
        .unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[2.0, 1.0], &[5.0, 6.0], DominanceMode::Strict, DOMINANCE_TOL));
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0], DominanceMode::Strict, DOMINANCE_TOL));
        assert!(!dominates(&[0.0, 5.0], &[1.0, 1.0], DominanceMode::Weak, DOMINANCE_TOL));
        assert!(dominates(&[0.0, 0.0], &[1.0, 1.0], DominanceMode::Weak, DOMINANCE_TOL));
        // Weak dominance implies strict dominance.
        assert!(dominates(&[0.0, 0.0], &[1.0, 1.0], DominanceMode::Strict, DOMINANCE_TOL));
    }

    #[test]
    fn front_of_bilinear_pair_is_corner() {
        let window = GridWindow::new(vec![1.0, 1.0], vec![3.0, 3.0], 41).unwrap();
        let front = grid_front(&bilinear_pair(), &shifted_quadrant(), &window).unwrap();
        assert_eq!(front.pareto.len(), 1);
        assert_eq!(front.pareto[0].x, vec![1.0, 1.0]);
        assert_eq!(front.weak.len(), 1);
        assert_eq!(front.weak[0].x, vec![1.0, 1.0]);
        assert_eq!(front.pareto[0].values, vec![2.0, 1.0]);
    }

    #[test]
    fn ridge_front_contains_axis() {
        // f = (x1^2 - x2 - 1, x2^3 + 1) on the sector x2 >= x1 >= 0: every
        // grid node with x1 = 0 is Pareto efficient.
        let f = VectorPolynomial::new(vec![
            poly(2, &[(1.0, &[2, 0]), (-1.0, &[0, 1]), (-1.0, &[0, 0])]),
            poly(2, &[(1.0, &[0, 3]), (1.0, &[0, 0])]),
        ])
        .unwrap();
        let k = ConstraintSet::polyhedron(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        )
        .unwrap();
        let window = GridWindow::new(vec![0.0, 0.0], vec![3.0, 3.0], 61).unwrap();
        let front = grid_front(&f, &k, &window).unwrap();
        let axis_in_front = front.pareto.iter().filter(|p| p.x[0] == 0.0).count();
        assert_eq!(axis_in_front, 61);
    }

    #[test]
    fn single_feasible_node_is_pareto() {
        let k = ConstraintSet::polyhedron(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            vec![2.0, -2.0, 2.0, -2.0],
            vec![2.0, 2.0],
        )
        .unwrap();
        let window = GridWindow::new(vec![0.0, 0.0], vec![4.0, 4.0], 5).unwrap();
        let front = grid_front(&bilinear_pair(), &k, &window).unwrap();
        assert_eq!(front.feasible_count, 1);
        assert_eq!(
            front.pareto,
            vec![FrontPoint {
                x: vec![2.0, 2.0],
                values: vec![5.0, 5.0]
            }]
        );
    }

    #[test]
    fn no_feasible_node_is_an_error() {
        let k = shifted_quadrant();
        let window = GridWindow::new(vec![-3.0, -3.0], vec![-1.0, -1.0], 5).unwrap();
        assert_eq!(
            grid_front(&bilinear_pair(), &k, &window).unwrap_err(),
            OracleError::NoFeasibleNode
        );
    }

    #[test]
    fn dimension_cap_enforced() {
        let k = ConstraintSet::polyhedron(4, vec![], vec![], vec![0.0; 4]).unwrap();
        let window = GridWindow::new(vec![-1.0; 4], vec![1.0; 4], 3).unwrap();
        assert!(matches!(
            feasible_grid(&k, &window, |_| {}),
            Err(OracleError::TooManyVariables { n: 4 })
        ));
    }

    #[test]
    fn pareto_subset_of_weak() {
        let window = GridWindow::new(vec![1.0, 1.0], vec![3.0, 3.0], 21).unwrap();
        let front = grid_front(&bilinear_pair(), &shifted_quadrant(), &window).unwrap();
        for p in &front.pareto {
            assert!(front.weak.iter().any(|w| w.x == p.x));
        }
    }

    #[test]
    fn refinement_keeps_coarse_nodes_undominated() {
        // Resolution 2r-1 keeps every coarse node; a fine-front point can
        // therefore never be dominated by a coarse-grid point.
        let f = bilinear_pair();
        let k = shifted_quadrant();
        let coarse = GridWindow::new(vec![1.0, 1.0], vec![3.0, 3.0], 11).unwrap();
        let fine = GridWindow::new(vec![1.0, 1.0], vec![3.0, 3.0], 21).unwrap();
        let coarse_front = grid_front(&f, &k, &coarse).unwrap();
        let fine_front = grid_front(&f, &k, &fine).unwrap();
        for q in &fine_front.pareto {
            for p in &coarse_front.pareto {
                assert!(!dominates(
                    &p.values,
                    &q.values,
                    DominanceMode::Strict,
                    DOMINANCE_TOL
                ));
            }
        }
    }

    #[test]
    fn window_scaling() {
        let w = GridWindow::new(vec![-1.0, -1.0], vec![1.0, 1.0], 11).unwrap();
        let big = w.scaled_about_center(2.0);
        assert_eq!(big.lower, vec![-2.0, -2.0]);
        assert_eq!(big.upper, vec![2.0, 2.0]);
        assert_eq!(big.resolution, 21);
        assert_eq!(big.cell(), w.cell());
    }
}
