use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::{check_complex, sin_pi};
use crate::accuracy::AccuracySpec;
use crate::error::{Error, Result};

const MAX_CORRECTIONS: usize = 120;
const MIN_DIRECT_TERMS: usize = 20;

/// `B_{2k}/(2k)!` for k = 1..=MAX_CORRECTIONS (index k − 1).
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let two_pi = 2.0 * PI;
        (1..=MAX_CORRECTIONS)
            .map(|k| match k {
                1 => 1.0 / 12.0,
                2 => -1.0 / 720.0,
                3 => 1.0 / 30_240.0,
                4 => -1.0 / 1_209_600.0,
                _ => {
                    // B_{2k}/(2k)! = 2(-1)^{k+1} ζ(2k) / (2π)^{2k}
                    let m = 2 * k as i32;
                    let direct: f64 = (1..=64).rev().map(|n| f64::from(n).powi(-m)).sum();
                    let zeta_even = direct + 65f64.powi(1 - m) / f64::from(m - 1) + 0.5 * 65f64.powi(-m);
                    let sign = if k % 2 == 1 { 2.0 } else { -2.0 };
                    sign * zeta_even / two_pi.powi(m)
                }
            })
            .collect()
    })
}

struct Tail {
    value: Complex64,
    err: f64,
}

/// Euler–Maclaurin tail from `N` onwards with at most `max_k` corrections.
/// Stops once the next correction falls below `tol`; `None` when the
/// corrections start growing before that happens.
fn em_tail(s: Complex64, n: usize, max_k: usize, tol: f64) -> Option<Tail> {
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    let mut value = n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    let inv_n2 = 1.0 / (nf * nf);
    let ratios = bernoulli_ratios();
    let mut poch = s;
    let mut scale = n_pow / nf;
    let mut prev = f64::INFINITY;
    for (k, &b) in ratios.iter().take(max_k).enumerate() {
        let term = b * poch * scale;
        let mag = term.norm();
        if mag <= tol || mag == 0.0 {
            let two_k = 2.0 * k as f64 + 1.0;
            let factor = ((s + two_k).norm() / (s.re + two_k)).max(1.0);
            return Some(Tail { value, err: mag * factor });
        }
        if mag > prev {
            return None;
        }
        prev = mag;
        value += term;
        let m = 2.0 * k as f64 + 1.0;
        poch *= (s + m) * (s + m + 1.0);
        scale *= inv_n2;
    }
    None
}

fn direct_sum(s: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc += (-s * (k as f64).ln()).exp();
    }
    acc
}

/// Riemann zeta function.
///
/// Euler–Maclaurin summation for `Re s > 0` and `s = 0`, the functional
/// equation for `Re s ≤ 0` otherwise.
pub fn zeta(s: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    check_complex(s, "s")?;
    acc.validate()?;
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole("s = 1".into()));
    }
    if s.re > 0.0 || (s.re == 0.0 && s.im == 0.0) {
        zeta_adaptive(s, acc)
    } else {
        reflect(s, acc)
    }
}

fn zeta_adaptive(s: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    let mut n = MIN_DIRECT_TERMS.max((2.0 * s.im.abs()).ceil() as usize);
    let mut evals = 0usize;
    loop {
        if evals + n > acc.max_evals {
            return Err(Error::BudgetExhausted { evals, context: format!("zeta({s}) with N = {n}") });
        }
        evals += n;
        let head = direct_sum(s, n);
        let nf = n as f64;
        let rough = head + (-s * nf.ln()).exp() * nf / (s - 1.0);
        let tol = 0.25 * acc.tolerance(rough.norm());
        if let Some(tail) = em_tail(s, n, MAX_CORRECTIONS, tol) {
            let value = head + tail.value;
            if tail.err <= acc.tolerance(value.norm()) || tail.err <= 4.0 * f64::EPSILON * value.norm() {
                return Ok(value);
            }
        }
        n *= 2;
    }
}

fn reflect(s: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    if s.im == 0.0 && s.re < 0.0 && s.re % 2.0 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let z = zeta_adaptive(one_minus, acc)?;
    let log_factor = s * LN_2 + (s - 1.0) * PI.ln() + ln_gamma(one_minus)?;
    Ok(log_factor.exp() * sin_pi(s * 0.5) * z)
}

/// Euler–Maclaurin evaluation with exactly `n_terms` direct terms and at most
/// `n_corrections` Bernoulli corrections. Valid for any `s ≠ 1` with
/// `Re s > 1 − 2·n_corrections`.
pub fn zeta_euler_maclaurin(s: Complex64, n_terms: usize, n_corrections: usize) -> Result<Complex64> {
    check_complex(s, "s")?;
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole("s = 1".into()));
    }
    if n_terms == 0 || n_corrections == 0 || n_corrections > MAX_CORRECTIONS {
        return Err(Error::Domain(format!("need n_terms >= 1 and 1 <= n_corrections <= {MAX_CORRECTIONS}")));
    }
    let nf = n_terms as f64;
    let n_pow = (-s * nf.ln()).exp();
    let mut value = direct_sum(s, n_terms) + n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    let mut poch = s;
    let mut scale = n_pow / nf;
    for (k, &b) in bernoulli_ratios().iter().take(n_corrections).enumerate() {
        value += b * poch * scale;
        let m = 2.0 * k as f64 + 1.0;
        poch *= (s + m) * (s + m + 1.0);
        scale /= nf * nf;
    }
    Ok(value)
}

/// Taylor coefficients `[ζ(0), ζ′(0), ζ″(0)/2!, …]` up to `order`, from a
/// Cauchy integral on the circle |s| = ½.
pub fn zeta_taylor_at_zero(order: usize) -> Result<Vec<f64>> {
    const POINTS: usize = 64;
    const RADIUS: f64 = 0.5;
    let acc = AccuracySpec::special();
    let values: Vec<Complex64> = (0..POINTS)
        .map(|j| {
            let theta = 2.0 * PI * (j as f64 + 0.5) / POINTS as f64;
            zeta(Complex64::from_polar(RADIUS, theta), &acc)
        })
        .collect::<Result<_>>()?;
    Ok((0..=order)
        .map(|k| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, &z)| {
                    let theta = 2.0 * PI * (j as f64 + 0.5) / POINTS as f64;
                    z * Complex64::from_polar(RADIUS.powi(-(k as i32)), -(k as f64) * theta)
                })
                .sum();
            sum.re / POINTS as f64
        })
        .collect())
}
