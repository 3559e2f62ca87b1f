use std::f64::consts::PI;

use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};

fn check_positive(z: f64, what: &str) -> Result<()> {
    check_finite(z, what)?;
    if z <= 0.0 {
        return Err(domain(format!("{what} must be positive, got {z}")));
    }
    Ok(())
}

/// `Σ_{n≥1} e^{−πn²z}` summed directly until the geometric bound on the
/// remainder drops below the tolerance.
fn series(z: f64, acc: &AccuracySpec, scale: f64) -> Result<f64> {
    series_with_pi(z, PI, acc, scale)
}

fn series_with_pi(z: f64, pi: f64, acc: &AccuracySpec, scale: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 1usize;
    loop {
        if n > acc.max_evals {
            return Err(Error::BudgetExhausted { evals: n - 1, context: format!("theta series at z = {z}") });
        }
        let nf = n as f64;
        let term = (-pi * nf * nf * z).exp();
        sum += term;
        // ratio of successive terms beyond n is at most e^{-π(2n+1)z}
        let ratio = (-pi * (2.0 * nf + 1.0) * z).exp();
        let bound = if ratio < 1.0 { term * ratio / (1.0 - ratio) } else { f64::INFINITY };
        let tol =
            acc.tolerance(scale + 2.0 * sum).min(1e-3 * f64::EPSILON * (scale + 2.0 * sum)).max(f64::MIN_POSITIVE);
        if bound <= tol || term == 0.0 {
            return Ok(sum);
        }
        n += 1;
    }
}

/// `Σ_{n≥1} e^{−πn²z}` for `z ≥ 1`, where the series terminates after a
/// handful of terms.
pub fn theta_tail(z: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(z, "z")?;
    series(z, acc, 1.0)
}

/// Jacobi theta `θ(z) = Σ_{n∈ℤ} e^{−πn²z}`; arguments below 1 are first mapped
/// through `θ(z) = z^{−1/2} θ(1/z)`.
pub fn jacobi_theta(z: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(z, "z")?;
    if z >= 1.0 {
        Ok(1.0 + 2.0 * series(z, acc, 1.0)?)
    } else {
        let w = 1.0 / z;
        Ok((1.0 + 2.0 * series(w, acc, 1.0)?) / z.sqrt())
    }
}

/// Jacobi theta by direct summation without argument reduction.
pub fn jacobi_theta_direct(z: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(z, "z")?;
    Ok(1.0 + 2.0 * series(z, acc, 1.0)?)
}

/// Direct summation with a caller-supplied value of π.
pub(crate) fn jacobi_theta_direct_with_pi(z: f64, pi: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(z, "z")?;
    Ok(1.0 + 2.0 * series_with_pi(z, pi, acc, 1.0)?)
}

/// `Σ_{n≥1} e^{−πn²x²}`, using `(θ(1/x²)/x − 1)/2` below `x = 1`.
pub fn theta_sum(x: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(x, "x")?;
    if x >= 1.0 {
        series(x * x, acc, 1.0)
    } else {
        let w = 1.0 / (x * x);
        let tail = if w.is_finite() { series(w, acc, 1.0)? } else { 0.0 };
        Ok((1.0 + 2.0 * tail) / (2.0 * x) - 0.5)
    }
}

/// `Σ_{n≥1} e^{−πn²x²} − 1/(2x)` without cancellation: below `x = 1` the
/// pole is removed analytically, leaving `Σ_{n≥1} e^{−πn²/x²}/x − ½`.
pub fn theta_sum_regularized(x: f64, acc: &AccuracySpec) -> Result<f64> {
    check_positive(x, "x")?;
    if x >= 1.0 {
        Ok(series(x * x, acc, 1.0)? - 0.5 / x)
    } else {
        let w = 1.0 / (x * x);
        let tail = if w.is_finite() { series(w, acc, 1.0)? / x } else { 0.0 };
        Ok(tail - 0.5)
    }
}
