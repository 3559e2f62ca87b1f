#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Breakpoints, CompensatedSum, QuadResult, QuadValue};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};

// Kronrod abscissae (Gauss nodes at odd indices) and weights of the 10/21 pair.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
pub(crate) const EVALS_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
}

/// One Gauss–Kronrod 10/21 panel: (Kronrod value, error estimate).
fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Result<(V, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_k = fc * WGK[10];
    let mut res_g = V::zero();
    let mut res_abs = fc.magnitude() * WGK[10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1 + f2;
        res_k = res_k + s * WGK[j];
        res_abs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            res_g = res_g + s * WG[j / 2];
        }
    }
    if !res_k.is_finite() {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    let value = res_k * h;
    let diff = (res_k - res_g).magnitude() * h.abs();
    let floor = 50.0 * f64::EPSILON * res_abs * h.abs();
    Ok((value, diff.max(floor)))
}

#[derive(Debug, PartialEq)]
struct Keyed(f64, usize);

impl Eq for Keyed {}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Adaptive Gauss–Kronrod (10/21) quadrature over `[a, b]`.
///
/// Breakpoints are mandatory panel boundaries. Panels are refined by global
/// bisection of the panel with the largest `|K21 − G10|` until the summed
/// estimate meets `acc` or the evaluation budget runs out, in which case the
/// result is returned with `converged = false`.
pub fn integrate_finite<V, F>(mut f: F, a: f64, b: f64, bp: &Breakpoints, acc: &AccuracySpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    check_finite(a, "a")?;
    check_finite(b, "b")?;
    acc.validate()?;
    if a >= b {
        return Err(domain(format!("integrate_finite requires a < b, got [{a}, {b}]")));
    }
    bp.check_inside(a, b)?;

    let mut edges = Vec::with_capacity(bp.len() + 2);
    edges.push(a);
    edges.extend_from_slice(bp.points());
    edges.push(b);
    let initial = edges.len() - 1;
    if initial * EVALS_PER_PANEL > acc.max_evals {
        return Ok(QuadResult { value: V::zero(), err_estimate: f64::INFINITY, evals: 0, converged: false });
    }

    let mut panels: Vec<Panel<V>> = Vec::with_capacity(2 * initial);
    let mut heap = BinaryHeap::with_capacity(2 * initial);
    let mut total = V::zero();
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (value, err) = gk21(&mut f, w[0], w[1])?;
        heap.push(Keyed(err, panels.len()));
        panels.push(Panel { a: w[0], b: w[1], value, err });
        total = total + value;
        total_err += err;
    }
    let mut evals = initial * EVALS_PER_PANEL;
    let mut converged = false;
    let mut since_resum = 0usize;

    loop {
        if total_err <= acc.tolerance(total.magnitude()) {
            total_err = panels.iter().map(|p| p.err).sum();
            if total_err <= acc.tolerance(total.magnitude()) {
                converged = true;
                break;
            }
        }
        let Some(Keyed(_, idx)) = heap.pop() else { break };
        if evals + 2 * EVALS_PER_PANEL > acc.max_evals {
            break;
        }
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 8.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            // too narrow to bisect; leave its error in place
            continue;
        }
        let (v1, e1) = gk21(&mut f, p.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, p.b)?;
        evals += 2 * EVALS_PER_PANEL;
        total = total - p.value + v1 + v2;
        total_err += e1 + e2 - p.err;
        panels[idx] = Panel { a: p.a, b: mid, value: v1, err: e1 };
        heap.push(Keyed(e1, idx));
        heap.push(Keyed(e2, panels.len()));
        panels.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
        since_resum += 1;
        if since_resum >= 1024 {
            since_resum = 0;
            total_err = panels.iter().map(|p| p.err).sum();
        }
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    for p in &panels {
        sum.add(p.value);
        err += p.err;
    }
    let value = sum.value();
    converged = converged && err <= acc.tolerance(value.magnitude());
    Ok(QuadResult { value, err_estimate: err, evals, converged })
}
