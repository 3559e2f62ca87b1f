use twofloat::TwoFloat;

use super::{params, IdentityCheck};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Result};
use crate::quadrature::{extended::integrate_panels, QuadSummary};
use crate::special::{dd, zeta, Constants};
use crate::Complex64;

/// Integration stops at `CUTOFF·T`, where `e^{−x/T}` is below 1e-30.
const CUTOFF: f64 = 70.0;
const MAX_TERMS: u32 = 5;

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `ζ(1 − 2m) / ((2m − 1)! (1 − 2m))`, the coefficient of `T^{1−2m}`.
pub fn laplace_expansion_coefficient(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(domain("expansion index m starts at 1"));
    }
    let k = 2 * m - 1;
    let z = zeta(Complex64::new(1.0 - f64::from(2 * m), 0.0), &AccuracySpec::special())?.re;
    Ok(z / (factorial(k) * -f64::from(k)))
}

/// `∫₀^∞ ({x}/x) e^{−x/T} dx` in double-double: the first cell in closed
/// form, then one Gauss–Legendre panel per integer cell.
fn laplace_of_fractional(t: f64, tol: f64, max_evals: usize) -> Result<(TwoFloat, QuadSummary)> {
    let td = TwoFloat::from(t);
    let inv_t = dd::div(TwoFloat::from(1.0), td);
    let first = td * (TwoFloat::from(1.0) - dd::exp(-inv_t));
    let end = (CUTOFF * t).ceil();
    let edges: Vec<f64> = (1..=end as usize).map(|k| k as f64).collect();
    let r = integrate_panels(
        |x| {
            let cell = x.hi().floor();
            dd::div(x - cell, x) * dd::exp(-dd::div(x, td))
        },
        &edges,
        tol,
        max_evals,
    )?;
    // ∫_end^∞ is below T e^{−end/T} / end
    let beyond = t * (-end / t).exp() / end;
    let summary = QuadSummary { err_estimate: r.err_estimate + beyond, evals: r.evals, converged: r.converged };
    Ok((first + r.value, summary))
}

/// `∫₀^∞ ({x}/x) e^{−x/T} dx` against its expansion
/// `½ ln T − ½γ + ½ ln 2π + Σ_{m≤M} c_m T^{1−2m}`.
///
/// Both sides and their difference are carried in double-double so that
/// remainders far below `f64` resolution are still measured. The check
/// passes when the discrepancy is within twice the first omitted term.
pub fn check_laplace_asymptotic(t: f64, m: u32, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
    check_finite(t, "T")?;
    acc.validate()?;
    if t < 10.0 {
        return Err(domain(format!("requires T >= 10, got {t}")));
    }
    if !(1..=MAX_TERMS).contains(&m) {
        return Err(domain(format!("requires 1 <= M <= {MAX_TERMS}, got {m}")));
    }
    let omitted = laplace_expansion_coefficient(m + 1)?.abs() * t.powi(-1 - 2 * m as i32);
    let tolerance = 2.0 * omitted;

    let (lhs, lhs_quad) = laplace_of_fractional(t, 1e-3 * tolerance, acc.max_evals)?;

    let half = 0.5;
    let mut rhs =
        dd::ln(TwoFloat::from(t)) * half - constants.euler_gamma_dd() * half + constants.log_two_pi_dd() * half;
    for j in 1..=m {
        let c = laplace_expansion_coefficient(j)?;
        rhs += TwoFloat::from(c) * t.powi(1 - 2 * j as i32);
    }

    let diff = lhs - rhs;
    let mut check = IdentityCheck::new(
        "laplace_asymptotic",
        params([("T", t.into()), ("M", m.into())]),
        (Complex64::new(lhs.hi(), 0.0), lhs_quad),
        (Complex64::new(rhs.hi(), 0.0), QuadSummary { err_estimate: 0.0, evals: m as usize, converged: true }),
        tolerance,
    );
    check.abs_err = diff.hi().abs();
    check.rel_err = check.abs_err / lhs.hi().abs().max(rhs.hi().abs()).max(1e-300);
    Ok(check.with_tolerance(tolerance))
}
