use super::{integrate_finite, Breakpoints, QuadResult};
use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};

/// Decay law assumed beyond the truncation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailDecay {
    /// `c·e^{−λt}`, e.g. Γ-damped integrands.
    Exponential,
    /// `c·t^{−p}` with `p > 1` fitted over the last decade.
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerticalLine {
    pub decay: TailDecay,
    /// `g(−t) = g(t)`: only `t ≥ 0` is sampled.
    pub even: bool,
}

const BLOCKS_PER_DECADE: usize = 16;
const EXP_BLOCK: f64 = 2.0;
/// Share of the fitted polynomial tail always counted as model uncertainty.
const TAIL_MODEL_FLOOR: f64 = 0.05;

struct Block {
    lo: f64,
    hi: f64,
    value: f64,
}

/// Least-squares fit of `log B_j` against `log lo_j`; returns (slope, intercept).
fn log_fit(blocks: &[Block]) -> Option<(f64, f64)> {
    let n = blocks.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for b in blocks {
        if !(b.value > 0.0) {
            return None;
        }
        let x = b.lo.ln();
        let y = b.value.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let det = n * sxx - sx * sx;
    if det <= 0.0 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / det;
    Some((slope, (sy - slope * sx) / n))
}

/// Tail `∫_T^∞` implied by a power-law fit of log-spaced block integrals with
/// ratio `r`: block integrals scale like `lo^{1−p}`.
fn power_tail(blocks: &[Block], t_end: f64, ratio: f64) -> Option<f64> {
    let (slope, intercept) = log_fit(blocks)?;
    if slope >= 0.0 {
        return None;
    }
    let q = ratio.powf(slope);
    let next = (intercept + slope * t_end.ln()).exp();
    Some(next / (1.0 - q))
}

/// `∫_{−∞}^{∞} g(t) dt` for an absolutely integrable `g`.
///
/// The line is truncated at an adaptively grown `T ≥ t_max_hint`; the part
/// beyond `T` comes from the declared decay model and its uncertainty is
/// folded into the error estimate. Panels have unit width so oscillations of
/// zeta-type integrands are resolved.
pub fn integrate_vertical_line<G>(
    mut g: G,
    t_max_hint: f64,
    line: VerticalLine,
    acc: &AccuracySpec,
) -> Result<QuadResult<f64>>
where
    G: FnMut(f64) -> f64,
{
    check_finite(t_max_hint, "t_max_hint")?;
    acc.validate()?;
    if t_max_hint <= 0.0 {
        return Err(domain("t_max_hint must be positive"));
    }
    let mut h = |t: f64| if line.even { 2.0 * g(t) } else { g(t) + g(-t) };
    let block_acc = acc.with_tolerances(0.01 * acc.abs_tol, 0.1 * acc.rel_tol);

    let mut evals = 0usize;
    let mut converged_panels = true;
    let mut panel_err = 0.0;
    let mut sum = 0.0;
    let mut blocks: Vec<Block> = Vec::new();

    let mut integrate_block =
        |lo: f64, hi: f64, evals: &mut usize, panel_err: &mut f64, ok: &mut bool| -> Result<Option<f64>> {
            let remaining = acc.max_evals.saturating_sub(*evals);
            if remaining == 0 {
                return Ok(None);
            }
            let r =
                integrate_finite(&mut h, lo, hi, &Breakpoints::integers(lo, hi), &block_acc.with_max_evals(remaining))?;
            *evals += r.evals;
            if r.evals == 0 {
                return Ok(None);
            }
            *panel_err += r.err_estimate;
            *ok &= r.converged;
            Ok(Some(r.value))
        };

    let starved =
        |sum: f64, err: f64, evals: usize| QuadResult { value: sum, err_estimate: err, evals, converged: false };

    match line.decay {
        TailDecay::Polynomial => {
            let ratio = 10f64.powf(1.0 / BLOCKS_PER_DECADE as f64);
            let t0 = (t_max_hint / 10.0).max(1.0);
            let Some(head) = integrate_block(0.0, t0, &mut evals, &mut panel_err, &mut converged_panels)? else {
                return Ok(starved(sum, f64::INFINITY, evals));
            };
            sum += head;
            let mut t = t0;
            loop {
                let hi = t * ratio;
                let Some(v) = integrate_block(t, hi, &mut evals, &mut panel_err, &mut converged_panels)? else {
                    return Err(Error::TailModel(format!(
                        "evaluation budget exhausted at T = {t} before the tail estimate met the tolerance"
                    )));
                };
                sum += v;
                blocks.push(Block { lo: t, hi, value: v });
                t = hi;
                if blocks.len() < BLOCKS_PER_DECADE || t < t_max_hint {
                    continue;
                }
                let last = &blocks[blocks.len() - BLOCKS_PER_DECADE..];
                let half = &blocks[blocks.len() - BLOCKS_PER_DECADE / 2..];
                let (Some(tail), Some(alt)) = (power_tail(last, t, ratio), power_tail(half, t, ratio)) else {
                    return Err(Error::TailModel(format!("no decaying power law fits the blocks below T = {t}")));
                };
                let tail_err = 2.0 * ((tail - alt).abs() + TAIL_MODEL_FLOOR * tail.abs());
                let value = sum + tail;
                let err = panel_err + tail_err;
                if err <= acc.tolerance(value) {
                    return Ok(QuadResult { value, err_estimate: err, evals, converged: converged_panels });
                }
                debug_assert!(blocks.last().is_none_or(|b| b.hi == t));
            }
        }
        TailDecay::Exponential => {
            let Some(head) = integrate_block(0.0, t_max_hint, &mut evals, &mut panel_err, &mut converged_panels)?
            else {
                return Ok(starved(sum, f64::INFINITY, evals));
            };
            sum += head;
            let mut t = t_max_hint;
            let mut prev: Option<f64> = None;
            loop {
                let hi = t + EXP_BLOCK;
                let Some(v) = integrate_block(t, hi, &mut evals, &mut panel_err, &mut converged_panels)? else {
                    return Err(Error::TailModel(format!(
                        "evaluation budget exhausted at T = {t} before the tail estimate met the tolerance"
                    )));
                };
                sum += v;
                t = hi;
                if let Some(p) = prev {
                    // geometric continuation of the last two blocks, doubled
                    let q = if p != 0.0 { (v / p).abs() } else { 0.0 };
                    let tail = if q < 1.0 { v.abs() * q / (1.0 - q) } else { f64::INFINITY };
                    let err = panel_err + 2.0 * tail;
                    if err <= acc.tolerance(sum) {
                        return Ok(QuadResult { value: sum, err_estimate: err, evals, converged: converged_panels });
                    }
                }
                prev = Some(v);
            }
        }
    }
}
