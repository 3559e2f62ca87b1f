#![allow(clippy::approx_constant, clippy::excessive_precision)]

use std::f64::consts::PI;

use num_complex::Complex64;

use twofloat::TwoFloat;

use super::{check_complex, dd, sin_cos_pi, sin_pi};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
const HALF_LN_TWO_PI_LO: f64 = -3.878_294_158_067_241_6e-17;
const TWO_PI_HI: f64 = 6.283_185_307_179_586;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(format!("gamma at s = {}", z.re)));
    }
    Ok(())
}

/// ln Γ(z) for `Re z ≥ ½` as (real part, imaginary part modulo 2π). The
/// Stirling-like part `(x + ½) ln t − t` is carried in double-double because
/// its magnitude reaches several hundred on the supported strip.
fn ln_gamma_parts(z: Complex64) -> (TwoFloat, f64) {
    let x = z - 1.0;
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let ln_a = a.ln();

    let xr = TwoFloat::new_sub(z.re, 1.0);
    let xi = TwoFloat::from(z.im);
    let tr = xr + (LANCZOS_G + 0.5);
    let ln_abs = dd::ln(tr * tr + xi * xi) * 0.5;
    let arg = dd::atan2(xi, tr);
    let xr_half = xr + 0.5;
    let re = xr_half * ln_abs - xi * arg - tr + TwoFloat::new_add(HALF_LN_TWO_PI, HALF_LN_TWO_PI_LO) + ln_a.re;
    let im = xi * ln_abs + xr_half * arg - xi;
    let two_pi = TwoFloat::new_add(TWO_PI_HI, TWO_PI_LO);
    let turns = (im.hi() / TWO_PI_HI).round();
    let im_reduced = (im - two_pi * turns).hi() + ln_a.im;
    (re, im_reduced)
}

fn gamma_right(z: Complex64) -> Complex64 {
    let (re, im) = ln_gamma_parts(z);
    Complex64::from_polar(dd::exp(re).hi(), im)
}

/// `sin(πz)` with the hyperbolic factors evaluated in double-double.
fn sin_pi_precise(z: Complex64) -> Complex64 {
    let (s, c) = sin_cos_pi(z.re);
    let y = dd::pi() * z.im;
    let (ep, em) = (dd::exp(y), dd::exp(-y));
    Complex64::new(s * ((ep + em) * 0.5).hi(), c * ((ep - em) * 0.5).hi())
}

/// A logarithm of Γ(z); `exp` of the result is Γ(z). The imaginary part is
/// reduced modulo 2π rather than following the principal branch.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_complex(z, "s")?;
    check_pole(z)?;
    if z.re >= 0.5 {
        let (re, im) = ln_gamma_parts(z);
        Ok(Complex64::new(re.hi(), im))
    } else {
        let (re, im) = ln_gamma_parts(Complex64::new(1.0, 0.0) - z);
        Ok(PI.ln() - sin_pi(z).ln() - Complex64::new(re.hi(), im))
    }
}

/// Γ(s) by the Lanczos approximation (g = 607/128, fifteen terms) with reflection for
/// `Re s < ½`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_complex(z, "s")?;
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(gamma_right(z))
    } else {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        Ok(PI / (sin_pi_precise(z) * gamma_right(one_minus)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm()
    }

    #[test]
    fn integer_and_half_integer_values() {
        assert!((gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((gamma(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-15);
        assert!(gamma(c(0.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn reference_values_across_the_strip() {
        // mpmath at 40 digits
        let cases = [
            (c(-19.5, 3.25), c(-5.269_139_267_291_87e-22, -1.780_548_979_582_405e-22)),
            (c(0.25, 100.0), c(-1.918_127_530_134_608_7e-69, 4.388_420_928_975_552_3e-69)),
            (c(20.0, -100.0), c(1.635_341_772_096_434_6e-29, 5.039_379_651_857_019e-30)),
            (c(-3.7, 0.0), c(0.251_643_995_902_422_7, 0.0)),
            (c(2.5, -7.5), c(-0.000_529_038_873_068_144_5, 0.000_966_993_592_383_959)),
            (c(-0.5, 0.0), c(-3.544_907_701_811_032, 0.0)),
            (c(-7.047, -69.83), c(4.887223812542822e-62, -4.86463144573414e-62)),
            (c(6.037, -85.513), c(-1.4941119103380382e-48, -5.590870644479514e-48)),
            (c(1.435, -26.862), c(2.5421396591313283e-17, -3.97855352497446e-18)),
            (c(-17.68, 1.487), c(-2.032456204975203e-17, -1.413332785464011e-17)),
            (c(-18.5, -13.271), c(9.113246551122363e-33, 9.652819714417904e-33)),
            (c(-17.206, -81.857), c(-2.8718785433069058e-90, 3.0952182463577527e-90)),
            (c(-3.019, 65.37), c(9.499892127564021e-52, 2.4230363951617416e-51)),
            (c(-15.048, -55.352), c(-1.190155247538476e-65, -2.5525386816810044e-65)),
            (c(5.097, 89.542), c(1.7792643932132502e-52, -7.857559636047878e-53)),
            (c(3.084, -20.664), c(-1.3062274595548105e-11, -4.8827095857241394e-11)),
            (c(19.05, -90.683), c(7.739403461207715e-26, 2.074773948063635e-26)),
            (c(14.339, -42.078), c(-1.7892128982379586e-06, -5.770939184131092e-07)),
            (c(-14.23, -76.442), c(-1.1611126107973917e-80, 2.7181438435076278e-80)),
            (c(-7.661, 63.225), c(-3.523425298511936e-58, -9.081448749988378e-59)),
            (c(-12.771, 16.32), c(-4.050486263149956e-28, -1.4652787777699003e-28)),
            (c(5.557, -25.52), c(-2.553543170021402e-11, -1.2880843246964344e-10)),
            (c(1.91, -87.442), c(-1.7056132301064564e-57, 2.534786134873612e-57)),
            (c(-17.616, -58.808), c(4.5182298636256827e-73, 1.1903402299648746e-72)),
            (c(7.216, -14.482), c(-0.007323183947590192, -0.024868257865725985)),
            (c(-7.434, 17.112), c(-2.3791819247310416e-23, -6.674013887329081e-22)),
            (c(-1.873, -40.047), c(-1.8249843505370155e-31, 4.8411218387696376e-32)),
            (c(11.775, 39.799), c(-2.042504799154437e-09, -9.303487577123878e-10)),
            (c(-10.236, 14.885), c(2.8735568164078263e-24, -1.98107031245587e-23)),
            (c(1.008, 75.027), c(-4.668737834818287e-52, -1.4755396394929455e-50)),
        ];
        let mut worst = 0.0f64;
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            let rel = (got - want).norm() / want.norm();
            worst = worst.max(rel);
            assert!(rel < 1e-13, "gamma({z}) = {got}, want {want}, rel {rel:e}");
            let via_log = ln_gamma(z).unwrap().exp();
            assert!(close(via_log, want, 1e-12), "exp(ln_gamma({z}))");
        }
        assert!(worst > 0.0);
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(re in -20.0f64..20.0, im in -100.0f64..100.0) {
            prop_assume!(im.abs() > 1e-6);
            let a = gamma(c(re, im)).unwrap();
            let b = gamma(c(re, -im)).unwrap();
            prop_assert!((a.conj() - b).norm() <= 1e-13 * a.norm());
        }

        #[test]
        fn recurrence(re in -15.0f64..15.0, im in -50.0f64..50.0) {
            prop_assume!(im.abs() > 1e-3);
            let z = c(re, im);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!(close(lhs, rhs, 1e-12));
        }
    }
}
