//! Controlled-accuracy quadrature on finite, semi-infinite and vertical-line
//! domains.

mod double_exp;
pub(crate) mod extended;
mod kronrod;
mod semi_infinite;
mod value;
mod vertical;

pub use double_exp::{integrate_exp_sinh, integrate_tanh_sinh};
pub use kronrod::integrate_finite;
pub use semi_infinite::{integrate_semi_infinite, integrate_with_tail_model, TailWindow};
pub use value::{CompensatedSum, Pair, QuadValue};
pub use vertical::{integrate_vertical_line, TailDecay, VerticalLine};

use crate::error::{check_finite, domain, Result};

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub err_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Accuracy metadata of a quadrature without its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSummary {
    pub err_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<V> QuadResult<V> {
    pub fn summary(&self) -> QuadSummary {
        QuadSummary { err_estimate: self.err_estimate, evals: self.evals, converged: self.converged }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadResult<W> {
        QuadResult {
            value: f(self.value),
            err_estimate: self.err_estimate,
            evals: self.evals,
            converged: self.converged,
        }
    }
}

impl<V: QuadValue> QuadResult<V> {
    /// Sum of two independent results over adjacent domains.
    pub fn combine(self, other: QuadResult<V>) -> QuadResult<V> {
        QuadResult {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }
}

impl QuadSummary {
    pub fn combine(self, other: QuadSummary) -> QuadSummary {
        QuadSummary {
            err_estimate: self.err_estimate + other.err_estimate,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }
}

/// Strictly increasing interior points that must be panel boundaries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Breakpoints(Vec<f64>);

impl Breakpoints {
    pub fn none() -> Self {
        Self(Vec::new())
    }

    /// Validates strict monotonicity and finiteness.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        for &p in &points {
            check_finite(p, "breakpoint")?;
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("breakpoints must be strictly increasing"));
        }
        Ok(Self(points))
    }

    /// Sorts, de-duplicates and keeps only points strictly inside `(a, b)`.
    pub fn from_unsorted(mut points: Vec<f64>, a: f64, b: f64) -> Self {
        points.retain(|p| p.is_finite() && *p > a && *p < b);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Self(points)
    }

    /// Integers strictly inside `(a, b)`.
    pub fn integers(a: f64, b: f64) -> Self {
        let first = a.floor() as i64 + 1;
        let last = b.ceil() as i64 - 1;
        Self((first..=last).map(|k| k as f64).filter(|&k| k > a && k < b).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_inside(&self, a: f64, b: f64) -> Result<()> {
        match (self.0.first(), self.0.last()) {
            (Some(&lo), Some(&hi)) if lo <= a || hi >= b => {
                Err(domain(format!("breakpoints must lie strictly inside ({a}, {b})")))
            }
            _ => Ok(()),
        }
    }
}
