#![allow(clippy::approx_constant, clippy::excessive_precision)]

use twofloat::TwoFloat;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
const EULER_GAMMA_LO: f64 = -4.942_915_152_430_645e-18;
const LOG_TWO_PI: f64 = 1.837_877_066_409_345_483_6;
const LOG_TWO_PI_LO: f64 = -7.756_588_316_134_483e-17;
const PI: f64 = 3.141_592_653_589_793_238_5;
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Mathematical constants feeding the identity checks.
///
/// Checks read constants from this struct rather than from `std`, so a
/// corrupted value propagates into every expression that depends on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub log_two_pi: f64,
    pub pi: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { euler_gamma: EULER_GAMMA, log_two_pi: LOG_TWO_PI, pi: PI }
    }
}

fn extended(value: f64, canonical: f64, canonical_lo: f64) -> TwoFloat {
    if value == canonical {
        TwoFloat::new_add(canonical, canonical_lo)
    } else {
        TwoFloat::from(value)
    }
}

impl Constants {
    pub fn euler_gamma_dd(&self) -> TwoFloat {
        extended(self.euler_gamma, EULER_GAMMA, EULER_GAMMA_LO)
    }

    pub fn log_two_pi_dd(&self) -> TwoFloat {
        extended(self.log_two_pi, LOG_TWO_PI, LOG_TWO_PI_LO)
    }

    pub fn pi_dd(&self) -> TwoFloat {
        extended(self.pi, PI, PI_LO)
    }
}
