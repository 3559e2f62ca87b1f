//! Double-double elementary functions built on `TwoFloat` arithmetic.
#![allow(clippy::approx_constant, clippy::excessive_precision)]

use twofloat::TwoFloat;

pub type Dd = TwoFloat;

const LN2_HI: f64 = 0.693_147_180_559_945_3;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
const FRAC_PI_2_HI: f64 = 1.570_796_326_794_896_6;
const FRAC_PI_2_LO: f64 = 6.123_233_995_736_766e-17;

pub fn ln2() -> Dd {
    TwoFloat::new_add(LN2_HI, LN2_LO)
}

pub fn pi() -> Dd {
    TwoFloat::new_add(2.0 * FRAC_PI_2_HI, 2.0 * FRAC_PI_2_LO)
}

/// `a / b` to full double-double accuracy; `TwoFloat`'s own quotient of two
/// double-doubles is only good to about one ulp of `f64`.
pub fn div(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

fn scale_pow2(x: Dd, k: i32) -> Dd {
    // split so each factor stays a normal power of two
    let half = k / 2;
    x * 2f64.powi(half) * 2f64.powi(k - half)
}

/// `e^a` to about 1e-31 relative.
pub fn exp(a: Dd) -> Dd {
    if a.hi() > 709.8 {
        return TwoFloat::from(f64::INFINITY);
    }
    if a.hi() < -745.2 {
        return TwoFloat::from(0.0);
    }
    let k = (a.hi() / LN2_HI).round();
    let r = (a - ln2() * k) * (1.0 / 1024.0);
    let mut term = r;
    let mut sum = r;
    for n in 2..=11 {
        term = term * r / f64::from(n);
        sum += term;
    }
    // e^{1024 r} − 1 by repeated doubling of the argument
    for _ in 0..10 {
        sum = sum * (sum + 2.0);
    }
    scale_pow2(sum + 1.0, k as i32)
}

/// Natural logarithm of a positive double-double.
pub fn ln(x: Dd) -> Dd {
    let mut y = TwoFloat::from(x.hi().ln());
    for _ in 0..2 {
        y = y + x * exp(-y) - 1.0;
    }
    y
}

/// `(sin a, cos a)` for moderate `|a|`.
pub fn sin_cos(a: Dd) -> (Dd, Dd) {
    let half_pi = TwoFloat::new_add(FRAC_PI_2_HI, FRAC_PI_2_LO);
    let q = (a.hi() / FRAC_PI_2_HI).round();
    let r = a - half_pi * q;
    let r2 = r * r;
    let mut s_term = r;
    let mut s = r;
    let mut c_term = TwoFloat::from(1.0);
    let mut c = TwoFloat::from(1.0);
    for j in 1..=15 {
        let jf = f64::from(j);
        s_term = -s_term * r2 / ((2.0 * jf) * (2.0 * jf + 1.0));
        c_term = -c_term * r2 / ((2.0 * jf - 1.0) * (2.0 * jf));
        s += s_term;
        c += c_term;
    }
    match (q as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// Four-quadrant arctangent of `y/x`.
pub fn atan2(y: Dd, x: Dd) -> Dd {
    let mut phi = TwoFloat::from(y.hi().atan2(x.hi()));
    if y.hi() == 0.0 && x.hi() > 0.0 {
        return phi;
    }
    for _ in 0..2 {
        let (s, c) = sin_cos(phi);
        phi += (y * c - x * s) / (x * c + y * s);
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_is_double_double() {
        let third = div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        assert!((third * 3.0 - 1.0).hi().abs() < 1e-31);
        let a = TwoFloat::new_add(2.0, 1e-20);
        let b = TwoFloat::new_add(7.0, -3e-19);
        assert!((div(a, b) * b - a).hi().abs() < 1e-31);
    }

    fn close(a: Dd, hi: f64, lo: f64, tol: f64) -> bool {
        let diff = (a - TwoFloat::new_add(hi, lo)).hi();
        diff.abs() <= tol * hi.abs()
    }

    // reference pairs (hi, lo) from mpmath at 50 digits
    #[test]
    fn exp_reference() {
        let cases = [
            (3.178_053_830_347_945_8, 24.000_000_000_000_004, -3.807_807_892_690_935_5e-16),
            (-150.123, 6.344_676_644_455_82e-66, -1.716_267_095_277_929_6e-82),
            (0.37, 1.447_734_614_663_324_5, -8.202_046_215_242_462e-17),
            (-0.37, 0.690_734_330_637_354_7, -1.389_625_224_365_037_5e-17),
            (300.5, 3.202_519_714_603_633e130, 3.450_128_650_899_247e112),
        ];
        for (x, hi, lo) in cases {
            assert!(close(exp(TwoFloat::from(x)), hi, lo, 1e-30), "exp({x})");
        }
    }

    #[test]
    fn ln_reference() {
        let cases = [
            (132.25, 4.884_694_070_738_408_6, 2.071_803_883_826_716_8e-16),
            (100.0, 4.605_170_185_988_092, -4.341_512_446_764_498_7e-16),
            (1e-300, -690.775_527_898_213_7, -2.367_009_617_670_983_2e-14),
        ];
        for (x, hi, lo) in cases {
            assert!(close(ln(TwoFloat::from(x)), hi, lo, 1e-30), "ln({x})");
        }
    }

    #[test]
    fn sin_cos_reference() {
        let cases = [
            (
                2.984_364_602_613_22,
                0.156_581_054_338_284_62,
                7.388_500_768_924_614e-18,
                -0.987_665_111_979_921_7,
                4.163_926_201_490_915_4e-17,
            ),
            (
                -1.3,
                -0.963_558_185_417_193,
                -1.824_765_048_090_938_6e-17,
                0.267_498_828_624_587_35,
                1.609_456_489_789_891_7e-17,
            ),
            (
                100.25,
                -0.277_282_856_454_851_3,
                -1.361_336_774_720_287e-17,
                0.960_788_331_276_061_2,
                -2.144_138_874_134_200_8e-17,
            ),
        ];
        for (x, sh, sl, ch, cl) in cases {
            let (s, c) = sin_cos(TwoFloat::from(x));
            assert!(close(s, sh, sl, 1e-29), "sin({x})");
            assert!(close(c, ch, cl, 1e-29), "cos({x})");
        }
    }

    #[test]
    fn atan2_quadrants() {
        let cases: [(f64, f64); 5] = [(3.25, -20.5), (-100.0, 26.5), (40.047, 8.627), (1.0, 3.0), (-1.0, -1.0)];
        for (y, x) in cases {
            let phi = atan2(TwoFloat::from(y), TwoFloat::from(x));
            let (s, c) = sin_cos(phi);
            let r = (y * y + x * x).sqrt();
            // residual of the defining relation y cos φ − x sin φ = 0
            let resid = (TwoFloat::from(y) * c - TwoFloat::from(x) * s).hi();
            assert!(resid.abs() < 1e-30 * r, "atan2({y}, {x})");
            assert!((phi.hi() - y.atan2(x)).abs() < 1e-15);
        }
    }
}
