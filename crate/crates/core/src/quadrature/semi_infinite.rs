use super::{integrate_exp_sinh, integrate_finite, Breakpoints, Pair, QuadResult, QuadValue};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};

/// Semi-infinite quadrature over `[a, ∞)` through `x = a + t/(1 − t)` and
/// adaptive Gauss–Kronrod on `t ∈ (0, 1)`; breakpoints are mapped along.
///
/// Fails when the integrand shows no decay (`x·|f(x)|` not decreasing over
/// several decades), since the mapped integrand is then not integrable.
pub fn integrate_semi_infinite<V, F>(mut f: F, a: f64, bp: &Breakpoints, acc: &AccuracySpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    check_finite(a, "a")?;
    acc.validate()?;
    if a < 0.0 {
        return Err(domain(format!("integrate_semi_infinite requires a >= 0, got {a}")));
    }
    if let Some(&first) = bp.points().first() {
        if first <= a {
            return Err(domain("breakpoints must lie strictly inside (a, ∞)"));
        }
    }
    let probes: Vec<f64> = [1e4, 1e7, 1e10, 1e13]
        .iter()
        .map(|&d| {
            let x = a + d * std::f64::consts::FRAC_1_SQRT_2;
            x * f(x).magnitude()
        })
        .collect();
    if probes[0] > 0.0 && probes.windows(2).all(|w| w[1] >= 0.5 * w[0]) {
        return Err(Error::NonConvergence(format!("integrand does not decay on [{a}, ∞): x·|f(x)| = {probes:?}")));
    }
    let mapped = Breakpoints::from_unsorted(bp.points().iter().map(|&x| (x - a) / (1.0 + x - a)).collect(), 0.0, 1.0);
    let acc_inner = acc.with_max_evals(acc.max_evals.saturating_sub(probes.len()).max(1));
    let mut r = integrate_finite(
        |t: f64| {
            let u = 1.0 - t;
            f(a + t / u) * (1.0 / (u * u))
        },
        0.0,
        1.0,
        &mapped,
        &acc_inner,
    )?;
    r.evals += probes.len();
    Ok(r)
}

/// Smooth cut-over region for [`integrate_with_tail_model`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWindow {
    pub start: f64,
    pub end: f64,
}

impl TailWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        check_finite(start, "window start")?;
        check_finite(end, "window end")?;
        if !(start < end) {
            return Err(domain(format!("window requires start < end, got [{start}, {end}]")));
        }
        Ok(Self { start, end })
    }

    /// The same window with its transition squeezed into the upper half.
    fn narrow(&self) -> Self {
        Self { start: 0.5 * (self.start + self.end), end: self.end }
    }

    /// C^∞ step: 1 below `start`, 0 above `end`.
    pub fn weight(&self, x: f64) -> f64 {
        if x <= self.start {
            return 1.0;
        }
        if x >= self.end {
            return 0.0;
        }
        let tau = (x - self.start) / (self.end - self.start);
        let up = (-1.0 / tau).exp();
        let down = (-1.0 / (1.0 - tau)).exp();
        down / (up + down)
    }
}

/// `∫_a^∞ f` for integrands that oscillate around a smooth mean `m` without
/// decaying relative to it.
///
/// Computes `∫_a^end [w f + (1 − w) m] + ∫_end^∞ m` where `w` is a smooth step
/// across the window. Oscillations of `f − m` that are periodic or slowly
/// modulated are suppressed to all orders by the smooth cut-over; `m` must
/// decay integrably. The error estimate adds the difference between the
/// given window and a narrower one evaluated on the same abscissae.
pub fn integrate_with_tail_model<V, F, M>(
    mut f: F,
    mut mean: M,
    a: f64,
    window: TailWindow,
    bp: &Breakpoints,
    acc: &AccuracySpec,
) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
    M: FnMut(f64) -> V,
{
    check_finite(a, "a")?;
    if !(a < window.start) {
        return Err(domain(format!("window [{}, {}] must start above a = {a}", window.start, window.end)));
    }
    let narrow = window.narrow();
    let head = integrate_finite(
        |x: f64| {
            let fx = f(x);
            if x <= window.start {
                return Pair(fx, fx);
            }
            let mx = mean(x);
            let (w1, w2) = (window.weight(x), narrow.weight(x));
            Pair(mx + (fx - mx) * w1, mx + (fx - mx) * w2)
        },
        a,
        window.end,
        bp,
        acc,
    )?;
    let remaining = acc.max_evals.saturating_sub(head.evals).max(1);
    let tail_acc = acc.with_max_evals(remaining).with_tolerances(0.1 * acc.abs_tol, 0.1 * acc.rel_tol);
    let tail = integrate_exp_sinh(&mut mean, window.end, window.end, &tail_acc)?;
    let Pair(wide, tight) = head.value;
    let window_err = (wide - tight).magnitude();
    let value = wide + tail.value;
    let err = head.err_estimate + tail.err_estimate + window_err;
    Ok(QuadResult {
        value,
        err_estimate: err,
        evals: head.evals + tail.evals,
        converged: head.converged && tail.converged && err <= acc.tolerance(value.magnitude()),
    })
}
