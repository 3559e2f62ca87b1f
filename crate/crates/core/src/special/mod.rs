//! Special functions: ζ(s), Γ(s), Jacobi θ, the fractional part and constants.

pub mod constants;
pub(crate) mod dd;
pub mod gamma;
pub mod theta;
pub mod zeta;

pub use constants::Constants;
pub use gamma::{gamma, ln_gamma};
pub use theta::{jacobi_theta, jacobi_theta_direct, theta_sum, theta_sum_regularized, theta_tail};
pub use zeta::{zeta, zeta_euler_maclaurin, zeta_taylor_at_zero};

use crate::error::{check_finite, domain, Result};
use crate::ComplexValue;

/// Fractional part `x − ⌊x⌋` for finite `x ≥ 0`.
pub fn frac(x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    if x < 0.0 {
        return Err(domain(format!("frac requires x >= 0, got {x}")));
    }
    Ok(frac_unchecked(x))
}

#[inline]
pub(crate) fn frac_unchecked(x: f64) -> f64 {
    x - x.floor()
}

/// `(sin πx, cos πx)` with exact zeros at integers and half-integers.
pub(crate) fn sin_cos_pi(x: f64) -> (f64, f64) {
    let r = x - 2.0 * (0.5 * x).round();
    let q = (2.0 * r).round();
    let f = r - 0.5 * q;
    let (s, c) = (std::f64::consts::PI * f).sin_cos();
    match q as i64 {
        0 => (s, c),
        1 => (c, -s),
        -1 => (-c, s),
        _ => (-s, -c),
    }
}

/// `sin(πz)` for complex `z`.
pub(crate) fn sin_pi(z: ComplexValue) -> ComplexValue {
    let (s, c) = sin_cos_pi(z.re);
    let y = std::f64::consts::PI * z.im;
    ComplexValue::new(s * y.cosh(), c * y.sinh())
}

pub(crate) fn check_complex(s: ComplexValue, what: &str) -> Result<()> {
    check_finite(s.re, what)?;
    check_finite(s.im, what)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frac_examples() {
        assert_eq!(frac(2.75).unwrap(), 0.75);
        assert_eq!(frac(3.0).unwrap(), 0.0);
        assert_eq!(frac(0.4).unwrap(), 0.4);
        assert!(frac(-0.5).is_err());
        assert!(frac(f64::INFINITY).is_err());
        assert!(frac(f64::NAN).is_err());
    }

    #[test]
    fn sin_pi_exact_at_special_points() {
        assert_eq!(sin_cos_pi(1.0), (0.0, -1.0));
        assert_eq!(sin_cos_pi(-0.5), (-1.0, 0.0));
        assert_eq!(sin_cos_pi(7.0).0, 0.0);
        assert_eq!(sin_cos_pi(-2.5), (-1.0, 0.0));
        let (s, c) = sin_cos_pi(0.3);
        assert!((s - (0.3 * std::f64::consts::PI).sin()).abs() < 1e-16);
        assert!((c - (0.3 * std::f64::consts::PI).cos()).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn frac_is_periodic(k in 0u32..1_000_000, r in 0.0f64..1.0) {
            // exact dyadic inputs keep x + 1 representable without rounding
            let x = f64::from(k) + (r * 1024.0).floor() / 1024.0;
            prop_assert_eq!(frac(x + 1.0).unwrap(), frac(x).unwrap());
        }

        #[test]
        fn frac_in_unit_interval(x in 0.0f64..1e12) {
            let f = frac(x).unwrap();
            prop_assert!((0.0..1.0).contains(&f));
        }
    }
}
