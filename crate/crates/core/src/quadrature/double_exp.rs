use std::f64::consts::FRAC_PI_2;

use super::{CompensatedSum, QuadResult, QuadValue};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};

const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
const T_LIMIT: f64 = 7.0;

/// Trapezoidal sums of `w(t)·f(x(t))` over `t ∈ ℝ` with halving steps.
/// `node(t)` returns the abscissa and weight or `None` once `t` leaves the
/// representable range.
fn double_exponential<V, F, N>(mut f: F, node: N, acc: &AccuracySpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    acc.validate()?;
    let Some((x0, w0)) = node(0.0) else {
        return Err(domain("quadrature node at t = 0 is not representable"));
    };
    if acc.max_evals == 0 {
        return Ok(QuadResult { value: V::zero(), err_estimate: f64::INFINITY, evals: 0, converged: false });
    }
    let center = f(x0) * w0;
    if !center.is_finite() {
        return Err(Error::NonFinite(format!("integrand at x = {x0}")));
    }
    let mut evals = 1usize;
    let mut abs_sum = center.magnitude();

    // Σ w f over t = dir·(offset + k·step), k ≥ 0, plus the size of the last
    // term when the sweep stopped at the edge of the representable range
    let mut sweep =
        |offset: f64, step: f64, dir: f64, evals: &mut usize, abs_sum: &mut f64| -> Result<Option<(V, f64)>> {
            let mut sum = CompensatedSum::new();
            let mut small_run = 0;
            let mut last = 0.0;
            let mut k = 0usize;
            loop {
                let t = dir * (offset + step * k as f64);
                if t.abs() > T_LIMIT {
                    break;
                }
                let Some((x, w)) = node(t) else { break };
                if *evals >= acc.max_evals {
                    return Ok(None);
                }
                let fx = f(x);
                *evals += 1;
                if !fx.is_finite() {
                    return Err(Error::NonFinite(format!("integrand at x = {x}")));
                }
                let term = fx * w;
                last = term.magnitude();
                sum.add(term);
                *abs_sum += last;
                if last <= 1e-20 * *abs_sum {
                    small_run += 1;
                    if small_run >= 3 {
                        return Ok(Some((sum.value(), 0.0)));
                    }
                } else {
                    small_run = 0;
                }
                k += 1;
            }
            Ok(Some((sum.value(), last)))
        };

    let mut raw = center;
    let mut h = 1.0;
    let mut prev: Option<V> = None;
    let mut estimate = V::zero();
    let mut err = f64::INFINITY;
    for level in 0..=MAX_LEVEL {
        let (offset, step) = if level == 0 { (1.0, 1.0) } else { (h, 2.0 * h) };
        let right = sweep(offset, step, 1.0, &mut evals, &mut abs_sum)?;
        let left = sweep(offset, step, -1.0, &mut evals, &mut abs_sum)?;
        let (Some((r, edge_r)), Some((l, edge_l))) = (right, left) else {
            return Ok(QuadResult { value: prev.unwrap_or(estimate), err_estimate: err, evals, converged: false });
        };
        raw = raw + r + l;
        estimate = raw * h;
        if let Some(p) = prev {
            let roundoff = 16.0 * f64::EPSILON * abs_sum * h;
            err = (estimate - p).magnitude().max(roundoff) + (edge_r + edge_l) * h;
            if level >= MIN_LEVEL && err <= acc.tolerance(estimate.magnitude()) {
                return Ok(QuadResult { value: estimate, err_estimate: err, evals, converged: true });
            }
        }
        prev = Some(estimate);
        h *= 0.5;
    }
    Ok(QuadResult { value: estimate, err_estimate: err, evals, converged: false })
}

/// Tanh-sinh quadrature over `[a, b]`; suited to integrable endpoint
/// singularities. Abscissae approach the endpoints to within the smallest
/// representable offset, so a singular endpoint is best placed at 0.
pub fn integrate_tanh_sinh<V, F>(f: F, a: f64, b: f64, acc: &AccuracySpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    check_finite(a, "a")?;
    check_finite(b, "b")?;
    if a >= b {
        return Err(domain(format!("tanh-sinh requires a < b, got [{a}, {b}]")));
    }
    let len = b - a;
    let node = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the nearer endpoint
        let delta = len * e / (1.0 + e);
        if delta <= 0.0 {
            return None;
        }
        let x = if t < 0.0 { a + delta } else { b - delta };
        if x <= a || x >= b {
            return None;
        }
        let w = len * FRAC_PI_2 * t.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e));
        Some((x, w))
    };
    double_exponential(f, node, acc)
}

/// Exp-sinh quadrature over `[a, ∞)` with `x = a + scale·exp(π/2·sinh t)`;
/// suited to algebraic behaviour at `a` and algebraic or faster decay.
pub fn integrate_exp_sinh<V, F>(f: F, a: f64, scale: f64, acc: &AccuracySpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    check_finite(a, "a")?;
    check_finite(scale, "scale")?;
    if scale <= 0.0 {
        return Err(domain("exp-sinh scale must be positive"));
    }
    let node = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = scale * u.exp();
        if !e.is_finite() || e == 0.0 {
            return None;
        }
        let x = a + e;
        if x <= a || !x.is_finite() {
            return None;
        }
        Some((x, FRAC_PI_2 * t.cosh() * e))
    };
    double_exponential(f, node, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn acc() -> AccuracySpec {
        AccuracySpec::new(1e-14, 1e-13, 1_000_000).unwrap()
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        let r = integrate_tanh_sinh(|x: f64| x.powf(-0.5), 0.0, 1.0, &acc()).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate_tanh_sinh(|x: f64| -x.ln(), 0.0, 1.0, &acc()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        let r = integrate_tanh_sinh(|x: f64| x.powf(-0.9), 0.0, 1.0, &AccuracySpec::default()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn exp_sinh_power_and_exponential_decay() {
        let r = integrate_exp_sinh(|x: f64| (-x).exp(), 0.0, 1.0, &acc()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-13);
        let r = integrate_exp_sinh(|x: f64| x.powf(-0.5) / (1.0 + x), 0.0, 1.0, &acc()).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-12);
        let r = integrate_exp_sinh(|x: f64| x.powi(-2), 1.0, 1.0, &acc()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn exp_sinh_complex_mellin() {
        // ∫₀^∞ e^{-x} x^{s-1} dx = Γ(s)
        let s = Complex64::new(0.5, 2.0);
        let r =
            integrate_exp_sinh(|x: f64| (-x).exp() * Complex64::new(x, 0.0).powc(s - 1.0), 0.0, 1.0, &acc()).unwrap();
        let g = crate::special::gamma(s).unwrap();
        assert!((r.value - g).norm() < 1e-12 * g.norm(), "{} vs {}", r.value, g);
    }

    #[test]
    fn budget_exhaustion() {
        let tiny = AccuracySpec::default().with_max_evals(10);
        let r = integrate_exp_sinh(|x: f64| (-x).exp(), 0.0, 1.0, &tiny).unwrap();
        assert!(!r.converged);
        assert!(r.evals <= 10);
    }
}
