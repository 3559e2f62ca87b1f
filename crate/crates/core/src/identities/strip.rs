use super::{exact_side, params, require_strip, s_params, times_pow, IdentityCheck, Trap};
use crate::accuracy::AccuracySpec;
use crate::error::{domain, Error, Result};
use crate::phi::{fit_polynomial, poly, PhiEvaluator};
use crate::quadrature::{
    integrate_finite, integrate_tanh_sinh, integrate_vertical_line, integrate_with_tail_model, Breakpoints, QuadResult,
    TailDecay, TailWindow, VerticalLine,
};
use crate::special::{frac_unchecked, zeta};
use crate::Complex64;

/// Window end for the exactly known φ₁ = {x}.
const FRACTIONAL_WINDOW_END: f64 = 2000.0;
const FRACTIONAL_TOL: f64 = 1e-8;
const LINE_T_HINT: f64 = 100.0;

/// `∫₀^∞ f(x) x^{−1−s} dx` for `f` oscillating about `mean` at large x,
/// through the smooth window `[end/4, end]` with integer breakpoints.
/// `kinks` are points of `(0, 1)` where `f` is only continuous.
fn mellin_of_oscillating<F, M>(
    f: F,
    mean: M,
    s: Complex64,
    end: f64,
    kinks: &[f64],
    acc: &AccuracySpec,
) -> Result<QuadResult<Complex64>>
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let e = -(s + 1.0);
    let g = |x: f64| times_pow(f(x), x, e);
    let head = match kinks.first() {
        None => integrate_tanh_sinh(g, 0.0, 1.0, acc)?,
        Some(&first) => {
            let near_zero = integrate_tanh_sinh(g, 0.0, first, acc)?;
            let rest = integrate_finite(g, first, 1.0, &Breakpoints::from_unsorted(kinks.to_vec(), first, 1.0), acc)?;
            near_zero.combine(rest)
        }
    };
    let budget = acc.with_max_evals(acc.max_evals.saturating_sub(head.evals).max(1));
    let body = integrate_with_tail_model(
        |x: f64| times_pow(f(x), x, e),
        |x: f64| times_pow(mean(x), x, e),
        1.0,
        TailWindow::new(0.25 * end, end)?,
        &Breakpoints::integers(1.0, end),
        &budget,
    )?;
    Ok(head.combine(body))
}

fn fractional_rhs(s: Complex64, acc: &AccuracySpec) -> Result<QuadResult<Complex64>> {
    mellin_of_oscillating(frac_unchecked, |_| 0.5, s, FRACTIONAL_WINDOW_END, &[], acc)
}

/// Quadrature accuracy for integrals of tabulated φₙ: a hundredth of the
/// identity's tolerance, or the caller's accuracy if that is looser.
fn tabulated_accuracy(acc: &AccuracySpec, tolerance: f64) -> AccuracySpec {
    acc.with_tolerances(acc.abs_tol, acc.rel_tol.max(0.01 * tolerance))
}

fn check_order(n: u32, ev: &PhiEvaluator) -> Result<()> {
    if n == 0 {
        return Err(domain("order n must be at least 1"));
    }
    if ev.order() != n {
        return Err(Error::OrderMismatch { expected: n, found: ev.order() });
    }
    Ok(())
}

/// `ζ(s)/s = −∫₀^∞ {x} x^{−1−s} dx` for `0 < Re s < 1`.
pub fn check_fractional_mellin(s: Complex64, acc: &AccuracySpec) -> Result<IdentityCheck> {
    require_strip(s)?;
    acc.validate()?;
    let lhs = zeta(s, &AccuracySpec::special())? / s;
    let rhs = fractional_rhs(s, acc)?;
    Ok(IdentityCheck::new(
        "fractional_mellin",
        params(s_params(s)),
        (lhs, exact_side(1)),
        (-rhs.value, rhs.summary()),
        FRACTIONAL_TOL,
    ))
}

fn phi_mellin_tolerance(n: u32) -> f64 {
    match n {
        1 => FRACTIONAL_TOL,
        2 => 1e-5,
        _ => 1e-4,
    }
}

/// `ζ(s)ⁿ/(−s)ⁿ = ∫₀^∞ φₙ(x) x^{−1−s} dx`. For n = 1 the right side is
/// computed exactly as in [`check_fractional_mellin`].
pub fn check_phi_mellin(n: u32, s: Complex64, ev: &PhiEvaluator, acc: &AccuracySpec) -> Result<IdentityCheck> {
    require_strip(s)?;
    check_order(n, ev)?;
    acc.validate()?;
    let lhs = (zeta(s, &AccuracySpec::special())? / -s).powu(n);
    let tolerance = phi_mellin_tolerance(n);
    let rhs = if n == 1 {
        fractional_rhs(s, acc)?
    } else {
        let trap = Trap::default();
        let phi_acc = tabulated_accuracy(acc, tolerance);
        let r = mellin_of_oscillating(
            |x| trap.real(ev.eval(x)),
            |x| ev.mean(x),
            s,
            ev.x_max(),
            &ev.grid_breakpoints(),
            &phi_acc,
        );
        trap.finish(r)?
    };
    let [a, b] = s_params(s);
    Ok(IdentityCheck::new(
        "phi_mellin",
        params([("n", n.into()), a, b]),
        (lhs, exact_side(1)),
        (rhs.value, rhs.summary()),
        tolerance,
    ))
}

/// `(1/2π)∫|ζ(σ+it)|²ⁿ/(σ²+t²)ⁿ dt = ∫₀^∞ φₙ²(x) x^{−1−2σ} dx`.
///
/// The right side takes the large-x mean of φₙ² as `1/3` for n = 1 and as
/// the square of the mean of φₙ otherwise.
pub fn check_phi_parseval(n: u32, sigma: f64, ev: &PhiEvaluator, acc: &AccuracySpec) -> Result<IdentityCheck> {
    require_strip(Complex64::new(sigma, 0.0))?;
    check_order(n, ev)?;
    acc.validate()?;

    let zacc = AccuracySpec::special();
    let trap = Trap::default();
    let line_acc = acc.with_tolerances(acc.abs_tol, acc.rel_tol.max(1e-4));
    let line = integrate_vertical_line(
        |t| {
            let s = Complex64::new(sigma, t);
            let z = trap.complex(zeta(s, &zacc));
            let z2 = (z * z.conj()).re;
            (z2 / (sigma * sigma + t * t)).powi(n as i32)
        },
        LINE_T_HINT,
        VerticalLine { decay: TailDecay::Polynomial, even: true },
        &line_acc,
    );
    let lhs = trap.finish(line)?;
    let scale = 1.0 / (2.0 * std::f64::consts::PI);

    let tolerance = if n == 1 { 1e-3 } else { 5e-3 };
    let s2 = Complex64::new(2.0 * sigma, 0.0);
    let rhs = if n == 1 {
        mellin_of_oscillating(|x| frac_unchecked(x).powi(2), |_| 1.0 / 3.0, s2, FRACTIONAL_WINDOW_END, &[], acc)?
    } else {
        let trap = Trap::default();
        let r = mellin_of_oscillating(
            |x| trap.real(ev.eval(x)).powi(2),
            |x| ev.mean(x).powi(2),
            s2,
            ev.x_max(),
            &ev.grid_breakpoints(),
            &tabulated_accuracy(acc, tolerance),
        );
        trap.finish(r)?
    };
    let mut lhs_quad = lhs.summary();
    lhs_quad.err_estimate *= scale;
    Ok(IdentityCheck::new(
        "phi_parseval",
        params([("n", n.into()), ("sigma", sigma.into())]),
        (Complex64::new(lhs.value * scale, 0.0), lhs_quad),
        (Complex64::new(rhs.value.re, 0.0), rhs.summary()),
        tolerance,
    ))
}

/// Least-squares polynomial in `ln T` through sampled Laplace transforms
/// `∫₀^∞ φₙ(x)/x e^{−x/T} dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceFit {
    pub order: u32,
    /// `c_k` of `Σ c_k lnᵏT`.
    pub coefficients: Vec<f64>,
    pub samples: Vec<(f64, f64)>,
    /// Largest absolute deviation of a sample from the fit.
    pub max_residual: f64,
}

/// Fits a polynomial of degree n in `ln T` to the Laplace transform of
/// `φₙ(x)/x` sampled at `t_values`.
pub fn fit_laplace_polynomial(ev: &PhiEvaluator, t_values: &[f64], acc: &AccuracySpec) -> Result<LaplaceFit> {
    let n = ev.order();
    if t_values.len() <= n as usize + 1 {
        return Err(domain(format!("need more than {} sample points for a degree-{n} fit", n + 1)));
    }
    let end = ev.x_max();
    let mut samples = Vec::with_capacity(t_values.len());
    for &t in t_values {
        if !(t.is_finite() && t > 0.0 && t <= end / 10.0) {
            return Err(domain(format!("T must lie in (0, {}], got {t}", end / 10.0)));
        }
        let trap = Trap::default();
        let damp = |x: f64| (-x / t).exp() / x;
        let kinks = ev.grid_breakpoints();
        let first = kinks.first().copied().unwrap_or(1.0);
        let head = integrate_tanh_sinh(|x: f64| trap.real(ev.eval(x)) * damp(x), 0.0, first, acc);
        let head = trap.finish(head)?;
        let trap = Trap::default();
        let mid = if first < 1.0 {
            let bp = Breakpoints::from_unsorted(kinks, first, 1.0);
            let r = integrate_finite(|x: f64| trap.real(ev.eval(x)) * damp(x), first, 1.0, &bp, acc);
            trap.finish(r)?.value
        } else {
            0.0
        };
        let trap = Trap::default();
        let body = integrate_with_tail_model(
            |x: f64| trap.real(ev.eval(x)) * damp(x),
            |x: f64| ev.mean(x) * damp(x),
            1.0,
            TailWindow::new(0.25 * end, end)?,
            &Breakpoints::integers(1.0, end),
            acc,
        );
        let body = trap.finish(body)?;
        samples.push((t, head.value + mid + body.value));
    }
    let points: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln(), v)).collect();
    let coefficients = fit_polynomial(&points, n as usize)?;
    let max_residual = points.iter().map(|&(y, v)| (poly(&coefficients, y) - v).abs()).fold(0.0, f64::max);
    Ok(LaplaceFit { order: n, coefficients, samples, max_residual })
}
