use super::{exact_side, params, require_strip, times_pow_real, IdentityCheck, Trap};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Result};
use crate::quadrature::{
    integrate_finite, integrate_tanh_sinh, integrate_vertical_line, Breakpoints, QuadResult, TailDecay, VerticalLine,
};
use crate::special::theta::jacobi_theta_direct_with_pi;
use crate::special::{jacobi_theta, ln_gamma, theta_sum_regularized, theta_tail, zeta, Constants};
use crate::Complex64;

/// Beyond this point every theta correction is below 1e-49 and the
/// integrands reduce to their power-law parts, integrated exactly.
const ANALYTIC_FROM: f64 = 6.0;
const THETA_TOL: f64 = 1e-12;
const PARSEVAL_TOL: f64 = 1e-6;
const PARSEVAL_TOL_NEAR_EDGE: f64 = 1e-5;

fn require_sigma(sigma: f64) -> Result<()> {
    require_strip(Complex64::new(sigma, 0.0))
}

/// `θ(t) = t^{−1/2} θ(1/t)` with both sides summed directly.
pub fn check_theta_functional(t: f64, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
    check_finite(t, "t")?;
    acc.validate()?;
    if t <= 0.0 {
        return Err(domain(format!("requires t > 0, got {t}")));
    }
    let sacc = AccuracySpec::special();
    let lhs = jacobi_theta_direct_with_pi(t, constants.pi, &sacc)?;
    let rhs = jacobi_theta_direct_with_pi(1.0 / t, constants.pi, &sacc)? / t.sqrt();
    Ok(IdentityCheck::new(
        "theta_functional",
        params([("t", t.into())]),
        (Complex64::new(lhs, 0.0), exact_side(1)),
        (Complex64::new(rhs, 0.0), exact_side(1)),
        THETA_TOL,
    ))
}

/// `∫|ζ(σ+it) Γ(σ/2+it/2)|² dt` over the whole line.
fn zeta_gamma_line(sigma: f64, acc: &AccuracySpec) -> Result<QuadResult<f64>> {
    let zacc = AccuracySpec::special();
    let trap = Trap::default();
    let r = integrate_vertical_line(
        |t| {
            let s = Complex64::new(sigma, t);
            let z = trap.complex(zeta(s, &zacc));
            let lg = trap.complex(ln_gamma(s * 0.5));
            (z * z.conj()).re * (2.0 * lg.re).exp()
        },
        20.0,
        VerticalLine { decay: TailDecay::Exponential, even: true },
        acc,
    );
    trap.finish(r)
}

/// `∫₀^∞ h(x) dx` split at 1 and [`ANALYTIC_FROM`], with `∫_{ANALYTIC_FROM}^∞`
/// supplied in closed form.
fn split_integral<H: Fn(f64) -> Result<f64>>(h: H, beyond: f64, acc: &AccuracySpec) -> Result<QuadResult<f64>> {
    let trap = Trap::default();
    let head = integrate_tanh_sinh(|x| trap.real(h(x)), 0.0, 1.0, acc);
    let head = trap.finish(head)?;
    let trap = Trap::default();
    let body = integrate_finite(|x| trap.real(h(x)), 1.0, ANALYTIC_FROM, &Breakpoints::none(), acc);
    let body = trap.finish(body)?;
    let mut r = head.combine(body);
    r.value += beyond;
    Ok(r)
}

/// `∫₀^∞ (Σ e^{−πn²x²} − 1/(2x))² x^{2σ−1} dx`.
fn gaussian_moment(sigma: f64, acc: &AccuracySpec) -> Result<QuadResult<f64>> {
    let sacc = AccuracySpec::special();
    let e = 2.0 * sigma - 1.0;
    let beyond = ANALYTIC_FROM.powf(2.0 * sigma - 2.0) / (4.0 * (2.0 - 2.0 * sigma));
    split_integral(|x| Ok(times_pow_real(theta_sum_regularized(x, &sacc)?.powi(2), x, e)), beyond, acc)
}

fn parseval_tolerance(sigma: f64) -> f64 {
    if sigma <= 0.8 {
        PARSEVAL_TOL
    } else {
        PARSEVAL_TOL_NEAR_EDGE
    }
}

/// `∫|ζ(σ+it)Γ(σ/2+it/2)|² dt = 8π^{1+σ} ∫₀^∞ (Σ e^{−πn²x²} − 1/(2x))² x^{2σ−1} dx`.
pub fn check_gaussian_parseval(sigma: f64, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
    require_sigma(sigma)?;
    acc.validate()?;
    let lhs = zeta_gamma_line(sigma, acc)?;
    let moment = gaussian_moment(sigma, acc)?;
    let factor = 8.0 * constants.pi.powf(1.0 + sigma);
    let mut rhs_quad = moment.summary();
    rhs_quad.err_estimate *= factor;
    Ok(IdentityCheck::new(
        "gaussian_parseval",
        params([("sigma", sigma.into())]),
        (Complex64::new(lhs.value, 0.0), lhs.summary()),
        (Complex64::new(factor * moment.value, 0.0), rhs_quad),
        parseval_tolerance(sigma),
    ))
}

/// Invariance of the Gaussian Parseval right side under `σ ↦ 1 − σ` once
/// the factor `π^σ` is divided out: compares `π^{−σ}R(σ)` with
/// `π^{σ−1}R(1−σ)`.
pub fn check_gaussian_parseval_symmetry(
    sigma: f64,
    constants: &Constants,
    acc: &AccuracySpec,
) -> Result<IdentityCheck> {
    require_sigma(sigma)?;
    acc.validate()?;
    let a = gaussian_moment(sigma, acc)?;
    let b = gaussian_moment(1.0 - sigma, acc)?;
    // π^{−σ} · 8π^{1+σ} and π^{σ−1} · 8π^{2−σ}
    let factor = 8.0 * constants.pi;
    let (mut qa, mut qb) = (a.summary(), b.summary());
    qa.err_estimate *= factor;
    qb.err_estimate *= factor;
    let tolerance = 10.0 * acc.rel_tol.max(1e-12);
    Ok(IdentityCheck::new(
        "gaussian_parseval_symmetry",
        params([("sigma", sigma.into())]),
        (Complex64::new(factor * a.value, 0.0), qa),
        (Complex64::new(factor * b.value, 0.0), qb),
        tolerance,
    ))
}

/// `uθ(u²) − 1 − u`. Below `u = 1` it is `θ(1/u²) − 1 − u`, whose theta part
/// is exponentially small and is summed as such.
fn theta_defect(u: f64, sacc: &AccuracySpec) -> Result<f64> {
    if u < 1.0 {
        let w = 1.0 / (u * u);
        let tail = if w.is_finite() { theta_tail(w, sacc)? } else { 0.0 };
        Ok(2.0 * tail - u)
    } else {
        Ok(u * (jacobi_theta(u * u, sacc)? - 1.0) - 1.0)
    }
}

/// `∫|ζ(σ+it)Γ(σ/2+it/2)|² dt = 2π^{σ+1} ∫₀^∞ (uθ(u²) − 1 − u)² u^{2σ−3} du`.
pub fn check_theta_parseval(sigma: f64, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
    require_sigma(sigma)?;
    acc.validate()?;
    let lhs = zeta_gamma_line(sigma, acc)?;
    let sacc = AccuracySpec::special();
    let e = 2.0 * sigma - 3.0;
    let beyond = ANALYTIC_FROM.powf(2.0 * sigma - 2.0) / (2.0 - 2.0 * sigma);
    let moment = split_integral(|u| Ok(times_pow_real(theta_defect(u, &sacc)?.powi(2), u, e)), beyond, acc)?;
    let factor = 2.0 * constants.pi.powf(1.0 + sigma);
    let mut rhs_quad = moment.summary();
    rhs_quad.err_estimate *= factor;
    Ok(IdentityCheck::new(
        "theta_parseval",
        params([("sigma", sigma.into())]),
        (Complex64::new(lhs.value, 0.0), lhs.summary()),
        (Complex64::new(factor * moment.value, 0.0), rhs_quad),
        PARSEVAL_TOL,
    ))
}
