//! Both sides of every identity, evaluated independently, with the
//! discrepancy between them.

mod kernels;
mod laplace;
mod strip;
mod theta;


use std::cell::RefCell;
use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::QuadSummary;
use crate::Complex64;

pub use kernels::{check_mellin_convolution, check_muntz_gaussian, muntz_apply, KernelKind, MellinKernel};
pub use laplace::{check_laplace_asymptotic, laplace_expansion_coefficient};
pub use strip::{check_fractional_mellin, check_phi_mellin, check_phi_parseval, fit_laplace_polynomial, LaplaceFit};
pub use theta::{
    check_gaussian_parseval, check_gaussian_parseval_symmetry, check_theta_functional, check_theta_parseval,
};

/// A parameter value recorded with a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Real(f64),
    Text(String),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl From<u32> for Param {
    fn from(v: u32) -> Self {
        Param::Int(v.into())
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.into())
    }
}

pub type Params = BTreeMap<String, Param>;

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(entries: [(&str, Param); N]) -> Params {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn s_params(s: Complex64) -> [(&'static str, Param); 2] {
    [("s_re", s.re.into()), ("s_im", s.im.into())]
}

fn nan_from_null<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// One evaluated identity instance. Non-finite values serialize as `null`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub params: Params,
    #[serde(deserialize_with = "nan_from_null")]
    pub lhs_re: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub lhs_im: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub rhs_re: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub rhs_im: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub abs_err: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub rel_err: f64,
    #[serde(deserialize_with = "nan_from_null")]
    pub tolerance_used: f64,
    pub passed: bool,
    pub lhs_evals: usize,
    pub rhs_evals: usize,
    /// Both sides finished with converged quadratures.
    pub converged: bool,
    /// Why the check could not be evaluated.
    pub error: Option<String>,
    #[serde(skip)]
    pub lhs_quad: Option<QuadSummary>,
    #[serde(skip)]
    pub rhs_quad: Option<QuadSummary>,
}

/// Metadata for a side computed in closed form or by a special function.
pub(crate) fn exact_side(evals: usize) -> QuadSummary {
    QuadSummary { err_estimate: 0.0, evals, converged: true }
}

impl IdentityCheck {
    pub fn new(
        name: &str,
        params: Params,
        (lhs, lhs_quad): (Complex64, QuadSummary),
        (rhs, rhs_quad): (Complex64, QuadSummary),
        tolerance: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(rhs.norm()).max(1e-300);
        let mut check = Self {
            name: name.to_string(),
            params,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_err,
            rel_err,
            tolerance_used: tolerance,
            passed: false,
            lhs_evals: lhs_quad.evals,
            rhs_evals: rhs_quad.evals,
            converged: lhs_quad.converged && rhs_quad.converged,
            lhs_quad: Some(lhs_quad),
            rhs_quad: Some(rhs_quad),
            error: None,
        };
        check.passed = check.decide();
        check
    }

    /// A check whose evaluation failed numerically; every value is NaN.
    pub fn failed(name: &str, params: Params, tolerance: f64, err: &Error) -> Self {
        Self {
            name: name.to_string(),
            params,
            lhs_re: f64::NAN,
            lhs_im: f64::NAN,
            rhs_re: f64::NAN,
            rhs_im: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tolerance_used: tolerance,
            passed: false,
            lhs_evals: 0,
            rhs_evals: 0,
            converged: false,
            lhs_quad: None,
            rhs_quad: None,
            error: Some(err.to_string()),
        }
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }

    /// Sum of the error estimates of both sides.
    pub fn err_estimate(&self) -> f64 {
        [self.lhs_quad, self.rhs_quad].iter().flatten().map(|q| q.err_estimate).sum()
    }

    fn decide(&self) -> bool {
        self.converged && (self.abs_err <= self.tolerance_used || self.rel_err <= self.tolerance_used)
    }

    /// Re-judges the check against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance_used = tolerance;
        self.passed = self.decide();
        self
    }
}

/// Records the first error raised inside an integrand closure.
#[derive(Default)]
pub(crate) struct Trap(RefCell<Option<Error>>);

impl Trap {
    pub(crate) fn real(&self, r: Result<f64>) -> f64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    }

    pub(crate) fn complex(&self, r: Result<Complex64>) -> Complex64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        })
    }

    /// The trapped error takes precedence over the quadrature outcome.
    pub(crate) fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

/// `x^e` for real `x > 0`.
pub(crate) fn real_pow(x: f64, e: Complex64) -> Complex64 {
    (e * x.ln()).exp()
}

/// `v·x^e` formed in log space, so tiny `x` with a large negative exponent
/// does not overflow before the small factor `v` is applied.
pub(crate) fn times_pow(v: f64, x: f64, e: Complex64) -> Complex64 {
    if v == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let w = (e * x.ln() + v.abs().ln()).exp();
    if v < 0.0 {
        -w
    } else {
        w
    }
}

pub(crate) fn times_pow_real(v: f64, x: f64, e: f64) -> f64 {
    times_pow(v, x, Complex64::new(e, 0.0)).re
}

pub(crate) fn require_strip(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite(format!("s = {s}")));
    }
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(domain(format!("requires 0 < Re s < 1, got s = {s}")));
    }
    Ok(())
}
