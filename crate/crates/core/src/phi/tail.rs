use crate::accuracy::AccuracySpec;
use crate::error::{Error, Result};
use crate::quadrature::extended::{fixed_gauss, FIXED_GAUSS_EVALS};
use crate::quadrature::{integrate_with_tail_model, Breakpoints, TailWindow};

/// `∫_x^∞ g` for `x ≥ 1`, where `g` is smooth on every integer cell: per-cell
/// Gauss sums on `[1, end]` and the full integral from a smooth-window
/// evaluation against the large-x mean of `g`.
#[derive(Debug, Clone)]
pub(crate) struct TailTable {
    /// `cum[j] = ∫_1^{1+j} g`
    cum: Vec<f64>,
    total: f64,
    pub(crate) err: f64,
    pub(crate) evals: usize,
}

impl TailTable {
    pub(crate) fn build<G, M>(mut g: G, mean: M, end: usize, acc: &AccuracySpec) -> Result<Self>
    where
        G: FnMut(f64) -> f64,
        M: FnMut(f64) -> f64,
    {
        let mut cum = Vec::with_capacity(end);
        cum.push(0.0);
        let mut acc_sum = 0.0;
        let mut err = 0.0;
        for m in 1..end {
            let (v, e) = fixed_gauss(&mut g, m as f64, m as f64 + 1.0);
            acc_sum += v;
            err += e;
            cum.push(acc_sum);
        }
        let endf = end as f64;
        let window = TailWindow::new(0.25 * endf, endf)?;
        let r = integrate_with_tail_model(&mut g, mean, 1.0, window, &Breakpoints::integers(1.0, endf), acc)?;
        if !r.converged {
            return Err(Error::NonConvergence(format!(
                "tail integral from 1 (estimate {:e} after {} evaluations)",
                r.err_estimate, r.evals
            )));
        }
        Ok(Self { cum, total: r.value, err: err + r.err_estimate, evals: r.evals + (end - 1) * FIXED_GAUSS_EVALS })
    }

    pub(crate) fn total(&self) -> f64 {
        self.total
    }

    fn end(&self) -> usize {
        self.cum.len()
    }

    /// `∫_x^∞ g`; beyond the tabulated range the cells up to `x` are summed on
    /// the fly.
    pub(crate) fn tail<G: FnMut(f64) -> Result<f64>>(&self, x: f64, mut g: G) -> Result<f64> {
        debug_assert!(x >= 1.0);
        let m = (x.floor() as usize).min(self.end());
        let mut rest = self.total - self.cum[m - 1];
        let mut failure = None;
        let mut h = |v: f64| match g(v) {
            Ok(y) => y,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        };
        let mut lo = m as f64;
        while lo + 1.0 <= x {
            rest -= fixed_gauss(&mut h, lo, lo + 1.0).0;
            lo += 1.0;
        }
        if x > lo {
            rest -= fixed_gauss(&mut h, lo, x).0;
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(rest),
        }
    }
}
