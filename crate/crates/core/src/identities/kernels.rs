use std::cell::Cell;
use std::f64::consts::PI;

use super::{exact_side, params, real_pow, times_pow, IdentityCheck, Param, Trap};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};
use crate::quadrature::{integrate_exp_sinh, integrate_finite, integrate_tanh_sinh, Breakpoints, QuadResult};
use crate::special::{gamma, theta_sum_regularized, zeta, Constants};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `e^{−πx²}`
    Gaussian,
    /// Indicator of `(0, 1]`.
    Indicator,
}

/// A kernel with its Mellin transform `F(s) = ∫₀^∞ f(x) x^{s−1} dx`.
#[derive(Debug, Clone, Copy)]
pub struct MellinKernel {
    pub name: &'static str,
    pub kind: KernelKind,
    pub f: fn(f64) -> f64,
    pub transform: Option<fn(Complex64) -> Result<Complex64>>,
    /// `∫₀^∞ f`.
    pub total_integral: f64,
}

fn gaussian_kernel(x: f64) -> f64 {
    (-PI * x * x).exp()
}

fn gaussian_transform(s: Complex64) -> Result<Complex64> {
    Ok(0.5 * (-0.5 * s * PI.ln()).exp() * gamma(0.5 * s)?)
}

fn indicator_kernel(x: f64) -> f64 {
    if x > 0.0 && x <= 1.0 {
        1.0
    } else {
        0.0
    }
}

fn indicator_transform(s: Complex64) -> Result<Complex64> {
    Ok(1.0 / s)
}

impl MellinKernel {
    pub fn gaussian() -> Self {
        Self {
            name: "gaussian",
            kind: KernelKind::Gaussian,
            f: gaussian_kernel,
            transform: Some(gaussian_transform),
            total_integral: 0.5,
        }
    }

    pub fn indicator() -> Self {
        Self {
            name: "indicator",
            kind: KernelKind::Indicator,
            f: indicator_kernel,
            transform: Some(indicator_transform),
            total_integral: 1.0,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "gaussian" => Some(Self::gaussian()),
            "indicator" => Some(Self::indicator()),
            _ => None,
        }
    }

    /// `F(s)` for `Re s > 0`.
    pub fn transform_at(&self, s: Complex64) -> Result<Complex64> {
        if !(s.re > 0.0) {
            return Err(domain(format!("kernel transform requires Re s > 0, got {s}")));
        }
        let f = self.transform.ok_or_else(|| domain(format!("kernel {} has no known transform", self.name)))?;
        f(s)
    }

    /// Largest `x` where the kernel can be nonzero.
    fn support_end(&self) -> f64 {
        match self.kind {
            KernelKind::Gaussian => f64::INFINITY,
            KernelKind::Indicator => 1.0,
        }
    }
}

/// `Pf(x) = Σ_{n≥1} f(nx) − (1/x)∫₀^∞ f`.
///
/// The series stops once a term is below `abs_tol/10` and the geometric
/// bound from the ratio of the last two terms is too.
pub fn muntz_apply(k: &MellinKernel, x: f64, acc: &AccuracySpec) -> Result<f64> {
    check_finite(x, "x")?;
    acc.validate()?;
    if x <= 0.0 {
        return Err(domain(format!("muntz_apply requires x > 0, got {x}")));
    }
    let cut = 0.1 * acc.abs_tol.max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 1..=acc.max_evals {
        let nx = n as f64 * x;
        let term = (k.f)(nx);
        sum += term;
        if nx > k.support_end() {
            return Ok(sum - k.total_integral / x);
        }
        let ratio = term.abs() / prev;
        if term.abs() < cut && ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) < cut {
            return Ok(sum - k.total_integral / x);
        }
        prev = term.abs();
    }
    Err(Error::BudgetExhausted {
        evals: acc.max_evals,
        context: format!("series for P{}({x}) has no attainable truncation bound", k.name),
    })
}

/// `ζ(s)F(s) = ∫₀^∞ Pf(x) x^{s−1} dx` for `f = e^{−πx²}`, `F(s) = ½π^{−s/2}Γ(s/2)`.
pub fn check_muntz_gaussian(s: Complex64, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
    super::require_strip(s)?;
    acc.validate()?;
    let sacc = AccuracySpec::special();
    let lhs = zeta(s, &sacc)? * 0.5 * (-0.5 * s * constants.pi.ln()).exp() * gamma(0.5 * s)?;

    let kernel = MellinKernel::gaussian();
    let e = s - 1.0;
    let trap = Trap::default();
    let head = integrate_tanh_sinh(|x| times_pow(trap.real(theta_sum_regularized(x, &sacc)), x, e), 0.0, 1.0, acc);
    let head = trap.finish(head)?;
    let trap = Trap::default();
    let body = integrate_finite(
        |x| real_pow(x, e) * trap.real(muntz_apply(&kernel, x, &sacc)),
        1.0,
        6.0,
        &Breakpoints::none(),
        acc,
    );
    let body = trap.finish(body)?;
    // beyond x = 6 the series is below e^{−36π}: Pf(x) = −1/(2x)
    let beyond = -0.5 * real_pow(6.0, e) / (1.0 - s);
    let mut rhs = head.combine(body);
    rhs.value += beyond;

    let tolerance = if s.im.abs() <= 1.0 { 1e-7 } else { 1e-6 };
    let [a, b] = super::s_params(s);
    Ok(IdentityCheck::new(
        "muntz_gaussian",
        params([a, b]),
        (lhs, exact_side(1)),
        (rhs.value, rhs.summary()),
        tolerance,
    ))
}

/// `h(x) = ∫₀^∞ f(u) g(x/u) du/u`, split at 1 and x where either kernel may
/// jump. The outer pieces are rescaled to `u = a·w` so that no node depends
/// on the magnitude of `x`.
fn convolve(kf: &MellinKernel, kg: &MellinKernel, x: f64, acc: &AccuracySpec) -> Result<QuadResult<f64>> {
    let (a, b) = (x.min(1.0), x.max(1.0));
    let scaled = |c: f64| move |w: f64| (kf.f)(c * w) * (kg.f)(x / c / w) / w;
    let mut r = integrate_tanh_sinh(scaled(a), 0.0, 1.0, acc)?;
    if a < b {
        r = r.combine(integrate_tanh_sinh(|u: f64| (kf.f)(u) * (kg.f)(x / u) / u, a, b, acc)?);
    }
    r = r.combine(integrate_exp_sinh(scaled(b), 1.0, 1.0, acc)?);
    if !r.converged {
        return Err(Error::InnerConvolution { x, detail: format!("error estimate {:e}", r.err_estimate) });
    }
    Ok(r)
}

fn convolution_tolerance(kf: KernelKind, kg: KernelKind) -> f64 {
    match (kf, kg) {
        (KernelKind::Gaussian, KernelKind::Gaussian) => 1e-6,
        (KernelKind::Indicator, KernelKind::Indicator) => 1e-8,
        _ => 1e-5,
    }
}

/// `M[∫₀^∞ f(u) g(x/u) du/u; s] = F(s) G(s)`, with the convolution itself
/// computed by an inner quadrature at every outer abscissa.
pub fn check_mellin_convolution(
    kf: &MellinKernel,
    kg: &MellinKernel,
    s: Complex64,
    acc: &AccuracySpec,
) -> Result<IdentityCheck> {
    check_finite(s.re, "Re s")?;
    check_finite(s.im, "Im s")?;
    acc.validate()?;
    let rhs = kf.transform_at(s)? * kg.transform_at(s)?;

    let inner_acc = acc.scaled(0.1);
    let inner_evals = Cell::new(0usize);
    let trap = Trap::default();
    let h = |x: f64| {
        let r = convolve(kf, kg, x, &inner_acc).map(|r| {
            inner_evals.set(inner_evals.get() + r.evals);
            r.value
        });
        trap.real(r)
    };
    let e = s - 1.0;
    let outer = integrate_tanh_sinh(|x| times_pow(h(x), x, e), 0.0, 1.0, acc)
        .and_then(|head| Ok(head.combine(integrate_exp_sinh(|x| times_pow(h(x), x, e), 1.0, 1.0, acc)?)));
    let outer = trap.finish(outer)?;

    let mut lhs_quad = outer.summary();
    lhs_quad.evals += inner_evals.get();
    let [a, b] = super::s_params(s);
    Ok(IdentityCheck::new(
        "mellin_convolution",
        params([("f", Param::from(kf.name)), ("g", Param::from(kg.name)), a, b]),
        (outer.value, lhs_quad),
        (rhs, exact_side(2)),
        convolution_tolerance(kf.kind, kg.kind),
    ))
}
