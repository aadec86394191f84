//! Sparse multivariate polynomials over `f64`.
//!
//! A polynomial is a map from exponent vectors to nonzero coefficients.
//! On top of the arithmetic (evaluation, gradients, sums) the module
//! provides the two domain-specific operations everything else builds on:
//!
//! * the leading form — the top-degree homogeneous component, which equals
//!   the limit `lim_{t->inf} p(t x) / t^deg p` pointwise;
//! * dense coefficient vectors over the graded monomial basis of the space
//!   of polynomials of degree at most `d`, whose Euclidean norm is the norm
//!   used by the perturbation machinery.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Errors from polynomial construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// A point or exponent vector has the wrong number of entries.
    DimensionMismatch { expected: usize, found: usize },
    /// The operation is undefined for the zero polynomial.
    ZeroPolynomial,
    /// The polynomial does not fit in the requested coefficient space.
    DegreeOverflow { degree: i64, cap: u32 },
    /// A vector polynomial needs at least one component.
    EmptyVector,
    /// Vector components must share the variable count.
    MixedVariableCounts,
    /// Component degrees must be at least one.
    InvalidComponentDegree { index: usize, degree: i64 },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} entries, found {found}")
            }
            PolyError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            PolyError::DegreeOverflow { degree, cap } => {
                write!(f, "degree {degree} exceeds coefficient-space cap {cap}")
            }
            PolyError::EmptyVector => write!(f, "vector polynomial needs at least one component"),
            PolyError::MixedVariableCounts => {
                write!(f, "vector polynomial components disagree on the variable count")
            }
            PolyError::InvalidComponentDegree { index, degree } => {
                write!(f, "component {index} has degree {degree}; each component needs degree >= 1")
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// A single term: exponent vector plus nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Sparse polynomial in `n` variables. Zero coefficients are never stored,
/// and no two stored terms share an exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        let mut p = Polynomial::zero(n);
        if value != 0.0 {
            p.terms.insert(alloc::vec![0; n], value);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs. Repeated
    /// exponent vectors are accumulated; exact zero sums are dropped.
    pub fn from_terms(n: usize, terms: &[(f64, &[u32])]) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(n);
        for (coefficient, exponents) in terms {
            if exponents.len() != n {
                return Err(PolyError::DimensionMismatch {
                    expected: n,
                    found: exponents.len(),
                });
            }
            p.accumulate(exponents.to_vec(), *coefficient);
        }
        Ok(p)
    }

    fn accumulate(&mut self, exponents: Vec<u32>, coefficient: f64) {
        if coefficient == 0.0 {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coefficient;
                if sum == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial {
            exponents: e.clone(),
            coefficient: *c,
        })
    }

    /// Total degree; the zero polynomial reports the sentinel `-1`.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// True when every stored term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    /// Evaluates at `x`. Panics on dimension mismatch; use [`checked_eval`]
    /// at API boundaries.
    ///
    /// [`checked_eval`]: Polynomial::checked_eval
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        let mut acc = 0.0;
        for (exponents, coefficient) in &self.terms {
            let mut term = *coefficient;
            for (xi, e) in x.iter().zip(exponents) {
                if *e > 0 {
                    term *= math::powu(*xi, *e);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn checked_eval(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self.eval(x))
    }

    /// Gradient at `x`, computed term by term from the analytic partials.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        let mut grad = alloc::vec![0.0; self.n];
        for (exponents, coefficient) in &self.terms {
            for j in 0..self.n {
                let ej = exponents[j];
                if ej == 0 {
                    continue;
                }
                let mut part = *coefficient * ej as f64;
                for (i, (xi, e)) in x.iter().zip(exponents).enumerate() {
                    let power = if i == j { *e - 1 } else { *e };
                    if power > 0 {
                        part *= math::powu(*xi, power);
                    }
                }
                grad[j] += part;
            }
        }
        grad
    }

    pub fn checked_gradient(&self, x: &[f64]) -> Result<Vec<f64>, PolyError> {
        if x.len() != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self.gradient(x))
    }

    /// The homogeneous component of top total degree. Pointwise this equals
    /// `lim_{t->inf} p(t x) / t^deg p`, so it is computed algebraically here
    /// and the limit identity is kept as a property test.
    pub fn leading_form(&self) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let top = self.degree();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() as i64 == top)
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        Ok(Polynomial {
            n: self.n,
            terms,
        })
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        if c == 0.0 {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), c * v)).collect(),
        }
    }

    /// Largest variable index actually used, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&p| p > 0))
            .max()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Graded ordering, highest degree first; descending lex inside a block.
        let mut terms: Vec<(&Vec<u32>, &f64)> = self.terms.iter().collect();
        terms.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        for (idx, (exponents, coefficient)) in terms.iter().enumerate() {
            let c = **coefficient;
            if idx == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = math::abs(c);
            let is_const = exponents.iter().all(|&e| e == 0);
            if mag != 1.0 || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (i, e) in exponents.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Dense coefficient vector of a polynomial inside the space of polynomials
/// of degree at most `cap`, over the graded monomial basis (degree blocks in
/// ascending order, descending lexicographic inside a block). Its Euclidean
/// norm is the coefficient-space norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    n: usize,
    cap: u32,
    values: Vec<f64>,
}

impl CoefficientVector {
    /// Basis size `C(n + cap, cap)`.
    pub fn dimension(n: usize, cap: u32) -> usize {
        binomial(n as u64 + cap as u64, cap as u64) as usize
    }

    /// Enumerates the basis exponent vectors in storage order.
    pub fn basis(n: usize, cap: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(Self::dimension(n, cap));
        for total in 0..=cap {
            let mut prefix = Vec::with_capacity(n);
            push_block(n, total, &mut prefix, &mut out);
        }
        out
    }

    pub fn from_polynomial(p: &Polynomial, cap: u32) -> Result<Self, PolyError> {
        if p.degree() > cap as i64 {
            return Err(PolyError::DegreeOverflow {
                degree: p.degree(),
                cap,
            });
        }
        let basis = Self::basis(p.n, cap);
        let index: BTreeMap<&Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut values = alloc::vec![0.0; basis.len()];
        for (e, c) in &p.terms {
            values[index[e]] = *c;
        }
        Ok(CoefficientVector {
            n: p.n,
            cap,
            values,
        })
    }

    pub fn new(n: usize, cap: u32, values: Vec<f64>) -> Result<Self, PolyError> {
        let expected = Self::dimension(n, cap);
        if values.len() != expected {
            return Err(PolyError::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(CoefficientVector { n, cap, values })
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let basis = Self::basis(self.n, self.cap);
        let mut p = Polynomial::zero(self.n);
        for (e, v) in basis.into_iter().zip(&self.values) {
            if *v != 0.0 {
                p.terms.insert(e, *v);
            }
        }
        p
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.values.iter().map(|v| v * v).sum())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }
}

fn push_block(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == n - 1 {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=remaining).rev() {
        prefix.push(e);
        push_block(n, remaining - e, prefix, out);
        prefix.pop();
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Outcome of a checked perturbation `f + g`.
#[derive(Debug, Clone)]
pub struct Perturbed {
    pub sum: VectorPolynomial,
    /// Whether `deg g_i < deg f_i` held for every component.
    pub lower_degree: bool,
}

/// An `s`-tuple of polynomials sharing a variable count; every component
/// must have degree at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPolynomial {
    components: Vec<Polynomial>,
}

impl VectorPolynomial {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolyError> {
        if components.is_empty() {
            return Err(PolyError::EmptyVector);
        }
        let n = components[0].n;
        if components.iter().any(|c| c.n != n) {
            return Err(PolyError::MixedVariableCounts);
        }
        for (index, c) in components.iter().enumerate() {
            if c.degree() < 1 {
                return Err(PolyError::InvalidComponentDegree {
                    index,
                    degree: c.degree(),
                });
            }
        }
        Ok(VectorPolynomial { components })
    }

    pub fn n(&self) -> usize {
        self.components[0].n
    }

    pub fn s(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.degree() as u32).collect()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Componentwise leading form; preserves `s` and the degree vector.
    pub fn leading_form(&self) -> VectorPolynomial {
        let components = self
            .components
            .iter()
            .map(|c| c.leading_form().expect("components are nonzero by invariant"))
            .collect();
        VectorPolynomial { components }
    }

    /// Componentwise sum; re-validates the degree invariant, which exact
    /// cancellation of all non-constant terms can break.
    pub fn add(&self, other: &VectorPolynomial) -> Result<VectorPolynomial, PolyError> {
        if self.s() != other.s() {
            return Err(PolyError::DimensionMismatch {
                expected: self.s(),
                found: other.s(),
            });
        }
        let mut components = Vec::with_capacity(self.s());
        for (a, b) in self.components.iter().zip(&other.components) {
            components.push(a.add(b)?);
        }
        VectorPolynomial::new(components)
    }

    /// Sum with a perturbation, reporting whether the perturbation stayed
    /// strictly below the degrees of `self`. With `enforce_lower_degree` the
    /// sum is refused when the degree contract fails.
    pub fn perturb(
        &self,
        g: &VectorPolynomial,
        enforce_lower_degree: bool,
    ) -> Result<Perturbed, PolyError> {
        if self.s() != g.s() {
            return Err(PolyError::DimensionMismatch {
                expected: self.s(),
                found: g.s(),
            });
        }
        let lower_degree = self
            .components
            .iter()
            .zip(&g.components)
            .all(|(f, gi)| gi.degree() < f.degree());
        if enforce_lower_degree && !lower_degree {
            return Err(PolyError::DegreeOverflow {
                degree: g
                    .components
                    .iter()
                    .map(|c| c.degree())
                    .max()
                    .unwrap_or(-1),
                cap: self
                    .components
                    .iter()
                    .map(|c| c.degree() as u32)
                    .max()
                    .unwrap_or(0),
            });
        }
        Ok(Perturbed {
            sum: self.add(g)?,
            lower_degree,
        })
    }

    /// Product-space coefficient norm: the Euclidean norm of the stacked
    /// per-component coefficient vectors, each taken at its own degree cap.
    pub fn coefficient_norm(&self) -> f64 {
        let mut acc = 0.0;
        for c in &self.components {
            let cv = CoefficientVector::from_polynomial(c, c.degree() as u32)
                .expect("own degree always fits");
            acc += cv.values.iter().map(|v| v * v).sum::<f64>();
        }
        math::sqrt(acc)
    }
}

impl fmt::Display for VectorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Convenience constructor used across the test suites.
pub fn poly(n: usize, terms: &[(f64, &[u32])]) -> Polynomial {
    Polynomial::from_terms(n, terms).expect("static test polynomial")
}
