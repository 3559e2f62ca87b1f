//! Gauss–Legendre quadrature carried in double-double arithmetic.

use std::sync::OnceLock;

use twofloat::TwoFloat;

use crate::error::{domain, Error, Result};
use crate::special::dd::{self, Dd};

const HIGH: usize = 20;
const LOW: usize = 14;

/// Nodes in `(0, 1)` and weights of the `n`-point rule on `[−1, 1]`; the rule
/// is symmetric and the odd `n` centre node is included with `x = 0`.
struct Rule {
    nodes: Vec<Dd>,
    weights: Vec<Dd>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: Dd) -> (Dd, Dd) {
    let mut p0 = TwoFloat::from(1.0);
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (x * p1 * (2.0 * kf - 1.0) - p0 * (kf - 1.0)) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = dd::div((p0 - x * p1) * (n as f64), 1.0 - x * x);
    (p1, d)
}

fn build(n: usize) -> Rule {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = TwoFloat::from(guess);
        for _ in 0..6 {
            let (p, d) = legendre(n, x);
            x -= p / d;
        }
        let (_, d) = legendre(n, x);
        nodes.push(x);
        weights.push(dd::div(TwoFloat::from(2.0), (1.0 - x * x) * d * d));
    }
    Rule { nodes, weights }
}

fn rule(n: usize) -> &'static Rule {
    static R20: OnceLock<Rule> = OnceLock::new();
    static R14: OnceLock<Rule> = OnceLock::new();
    match n {
        HIGH => R20.get_or_init(|| build(HIGH)),
        LOW => R14.get_or_init(|| build(LOW)),
        _ => unreachable!("unsupported rule size {n}"),
    }
}

fn apply<F: FnMut(Dd) -> Dd>(f: &mut F, r: &Rule, n: usize, c: Dd, h: Dd) -> Dd {
    let mut s = TwoFloat::from(0.0);
    for (j, (&x, &w)) in r.nodes.iter().zip(&r.weights).enumerate() {
        if n % 2 == 1 && j == r.nodes.len() - 1 {
            s += w * f(c);
        } else {
            s += w * (f(c - h * x) + f(c + h * x));
        }
    }
    s * h
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ExtendedResult {
    pub value: Dd,
    pub err_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Sum over consecutive panels `[edges[i], edges[i+1]]` of the 20-point rule;
/// each panel's error is its difference from the 14-point rule. The integrand
/// must be analytic on every closed panel.
pub(crate) fn integrate_panels<F: FnMut(Dd) -> Dd>(
    mut f: F,
    edges: &[f64],
    tol: f64,
    max_evals: usize,
) -> Result<ExtendedResult> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("panel edges must be strictly increasing"));
    }
    let per_panel = HIGH + LOW;
    let panels = edges.len() - 1;
    if panels * per_panel > max_evals {
        return Ok(ExtendedResult {
            value: TwoFloat::from(0.0),
            err_estimate: f64::INFINITY,
            evals: 0,
            converged: false,
        });
    }
    let (hi, lo) = (rule(HIGH), rule(LOW));
    let mut total = TwoFloat::from(0.0);
    let mut err = 0.0;
    for w in edges.windows(2) {
        let c = (TwoFloat::from(w[0]) + w[1]) * 0.5;
        let h = (TwoFloat::from(w[1]) - w[0]) * 0.5;
        let q_hi = apply(&mut f, hi, HIGH, c, h);
        let q_lo = apply(&mut f, lo, LOW, c, h);
        if !q_hi.hi().is_finite() {
            return Err(Error::NonFinite(format!("integrand on [{}, {}]", w[0], w[1])));
        }
        total += q_hi;
        err += (q_hi - q_lo).hi().abs();
    }
    // double-double rounding of the accumulated sum
    err += panels as f64 * 1e-31 * total.hi().abs();
    Ok(ExtendedResult { value: total, err_estimate: err, evals: panels * per_panel, converged: err <= tol })
}

/// 20-point Gauss–Legendre on `[a, b]` in plain `f64`, with the difference
/// from the 14-point rule as error estimate. For integrands analytic on the
/// closed interval.
pub(crate) fn fixed_gauss<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut run = |n: usize| {
        let r = rule(n);
        let mut s = 0.0;
        for (j, (x, w)) in r.nodes.iter().zip(&r.weights).enumerate() {
            let (x, w) = (x.hi(), w.hi());
            s += if n % 2 == 1 && j == r.nodes.len() - 1 { w * f(c) } else { w * (f(c - h * x) + f(c + h * x)) };
        }
        s * h
    };
    let hi = run(HIGH);
    let lo = run(LOW);
    (hi, (hi - lo).abs())
}

pub(crate) const FIXED_GAUSS_EVALS: usize = HIGH + LOW;
