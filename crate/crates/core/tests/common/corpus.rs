//! Closed-form integrals used to audit quadrature error estimates.

use std::f64::consts::{E, PI};

use zid_core::quadrature::{
    integrate_exp_sinh, integrate_finite, integrate_semi_infinite, integrate_tanh_sinh, integrate_vertical_line,
    integrate_with_tail_model, Breakpoints, QuadResult, TailDecay, TailWindow, VerticalLine,
};
use zid_core::special::{frac, gamma, zeta};
use zid_core::{AccuracySpec, Complex64};

pub struct Case {
    pub name: &'static str,
    pub discrepancy: f64,
    pub err_estimate: f64,
    pub converged: bool,
}

impl Case {
    fn real(name: &'static str, r: QuadResult<f64>, truth: f64) -> Self {
        Self { name, discrepancy: (r.value - truth).abs(), err_estimate: r.err_estimate, converged: r.converged }
    }

    fn complex(name: &'static str, r: QuadResult<Complex64>, truth: Complex64) -> Self {
        Self { name, discrepancy: (r.value - truth).norm(), err_estimate: r.err_estimate, converged: r.converged }
    }

    pub fn honest(&self) -> bool {
        self.converged && self.discrepancy <= 10.0 * self.err_estimate
    }
}

pub fn run() -> Vec<Case> {
    let acc = AccuracySpec::default();
    let none = Breakpoints::none();
    let fin = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, bp: &Breakpoints| integrate_finite(f, a, b, bp, &acc).unwrap();
    let zeta_half = zeta(Complex64::new(0.5, 0.0), &AccuracySpec::special()).unwrap().re;
    let n = 1000u32;
    let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / f64::from(k)).sum();
    let recip_bp = Breakpoints::new((2..n).rev().map(|k| 1.0 / f64::from(k)).collect()).unwrap();
    let s = Complex64::new(0.5, 2.0);

    vec![
        Case::real("x^2 on [0,1]", fin(&|x| x * x, 0.0, 1.0, &none), 1.0 / 3.0),
        Case::real("sin on [0,pi]", fin(&f64::sin, 0.0, PI, &none), 2.0),
        Case::real("x^-1/2 on [0,1]", fin(&|x: f64| x.powf(-0.5), 0.0, 1.0, &none), 2.0),
        Case::real("ln x on [0,1]", fin(&|x: f64| if x > 0.0 { x.ln() } else { 0.0 }, 0.0, 1.0, &none), -1.0),
        Case::real("1/(1+x^2) on [0,1]", fin(&|x| 1.0 / (1.0 + x * x), 0.0, 1.0, &none), PI / 4.0),
        Case::real("sqrt(1-x^2) on [0,1]", fin(&|x: f64| (1.0 - x * x).max(0.0).sqrt(), 0.0, 1.0, &none), PI / 4.0),
        Case::real(
            "|{x}-1/2| on [0,10]",
            fin(&|x| (frac(x).unwrap() - 0.5).abs(), 0.0, 10.0, &Breakpoints::integers(0.0, 10.0)),
            2.5,
        ),
        Case::real(
            "{1/x} on [1/1000,1]",
            fin(&|x| frac(1.0 / x).unwrap(), 1.0 / f64::from(n), 1.0, &recip_bp),
            f64::from(n).ln() - (harmonic - 1.0),
        ),
        Case::real("cos^2(5x) on [0,2pi]", fin(&|x: f64| (5.0 * x).cos().powi(2), 0.0, 2.0 * PI, &none), PI),
        Case::real("e^x on [0,1]", fin(&f64::exp, 0.0, 1.0, &none), E - 1.0),
        Case::real("e^-x on [0,inf)", integrate_semi_infinite(|x: f64| (-x).exp(), 0.0, &none, &acc).unwrap(), 1.0),
        Case::real("x^-2 on [1,inf)", integrate_semi_infinite(|x: f64| x.powi(-2), 1.0, &none, &acc).unwrap(), 1.0),
        Case::real(
            "1/(1+x^2) on [0,inf)",
            integrate_semi_infinite(|x: f64| 1.0 / (1.0 + x * x), 0.0, &none, &acc).unwrap(),
            PI / 2.0,
        ),
        Case::real(
            "x e^-x^2 on [0,inf)",
            integrate_semi_infinite(|x: f64| x * (-x * x).exp(), 0.0, &none, &acc).unwrap(),
            0.5,
        ),
        Case::real(
            "x^-1/2 e^-x exp-sinh",
            integrate_exp_sinh(|x: f64| x.powf(-0.5) * (-x).exp(), 0.0, 1.0, &acc).unwrap(),
            PI.sqrt(),
        ),
        Case::complex(
            "x^(s-1) e^-x exp-sinh",
            integrate_exp_sinh(|x: f64| (Complex64::from(x).ln() * (s - 1.0)).exp() * (-x).exp(), 0.0, 1.0, &acc)
                .unwrap(),
            gamma(s).unwrap(),
        ),
        Case::real(
            "1/sqrt(1-x^2) tanh-sinh",
            integrate_tanh_sinh(|x: f64| 1.0 / ((1.0 - x) * (1.0 + x)).sqrt(), -1.0, 1.0, &acc).unwrap(),
            PI,
        ),
        Case::real(
            "e^-t^2 vertical",
            integrate_vertical_line(
                |t| (-t * t).exp(),
                4.0,
                VerticalLine { decay: TailDecay::Exponential, even: true },
                &acc,
            )
            .unwrap(),
            PI.sqrt(),
        ),
        Case::real(
            "1/(1/4+t^2) vertical",
            integrate_vertical_line(
                |t| 1.0 / (0.25 + t * t),
                100.0,
                VerticalLine { decay: TailDecay::Polynomial, even: true },
                &AccuracySpec::new(1e-6, 1e-6, 10_000_000).unwrap(),
            )
            .unwrap(),
            2.0 * PI,
        ),
        Case::real(
            "{x} x^-3/2 windowed",
            integrate_with_tail_model(
                |x: f64| if x < 1.0 { x.powf(-0.5) } else { frac(x).unwrap() * x.powf(-1.5) },
                |x: f64| 0.5 * x.powf(-1.5),
                0.0,
                TailWindow::new(500.0, 2000.0).unwrap(),
                &Breakpoints::integers(0.0, 2000.0),
                &acc,
            )
            .unwrap(),
            -2.0 * zeta_half,
        ),
    ]
}
