//! The convolution functions `φ₁(x) = {x}`, `φₙ(x) = ∫₀^∞ {u} φₙ₋₁(x/u) du/u`.
//!
//! On `(0, 1)` every φₙ equals `x` times a polynomial of degree `n − 1` in
//! `ln x`; on `[1, x_max]` it is smooth inside each integer cell and has kinks
//! at the integers. The evaluator tabulates both regimes: a log-spaced grid
//! below 1 and one Chebyshev expansion per integer cell above.

mod interp;
mod models;
mod tail;

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use interp::{cell_degree, cheb_nodes, ChebCell, LogGrid};
use tail::TailTable;

use crate::accuracy::AccuracySpec;
use crate::error::{check_finite, domain, Error, Result};
use crate::quadrature::{integrate_finite, Breakpoints};
use crate::special::frac_unchecked;

pub(crate) use models::{fit_polynomial, poly};

pub const DEFAULT_X_MIN: f64 = 1e-6;
pub const DEFAULT_X_MAX: f64 = 1e3;
const POINTS_PER_DECADE: usize = 32;

#[derive(Debug, Clone)]
pub struct PhiEvaluator {
    order: u32,
    x_min: f64,
    end: usize,
    child: Option<Box<PhiEvaluator>>,
    /// φ(x) = x Σ small[k] lnᵏx on (0, 1)
    small: Vec<f64>,
    /// large-x mean Σ mean[k] lnᵏx
    mean: Vec<f64>,
    grid: Option<LogGrid>,
    /// cell `[m, m + 1]` at index `m − 1`
    cells: Vec<ChebCell>,
    /// ∫_x^∞ φ(v) v⁻² dv
    tail: Option<TailTable>,
    /// ∫_x^∞ {u} lnᵏu u⁻² du for k ≤ order − 2
    moments: Vec<TailTable>,
    acc: AccuracySpec,
    err_estimate: f64,
    evals: usize,
}

/// Leading small-x term `x lnⁿ⁻¹(1/x)/(n − 1)!`.
pub fn phi_leading(n: u32, x: f64) -> Result<f64> {
    check_finite(x, "x")?;
    if n < 2 {
        return Err(domain(format!("phi_leading requires n >= 2, got {n}")));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("phi_leading requires 0 < x < 1, got {x}")));
    }
    Ok(leading(n, x))
}

fn leading(n: u32, x: f64) -> f64 {
    let l = -x.ln();
    let fact: f64 = (1..n).map(f64::from).product();
    x * l.powi(n as i32 - 1) / fact
}

/// Runs a fallible integrand through a quadrature that expects plain values.
struct Trap(Option<Error>);

impl Trap {
    fn catch(&mut self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.get_or_insert(e);
                0.0
            }
        }
    }

    fn check(self) -> Result<()> {
        self.0.map_or(Ok(()), Err)
    }
}

/// Inputs needed to evaluate φₙ from the definition: the order-(n−1)
/// evaluator and the moments of `{u}`.
struct Level<'a> {
    order: u32,
    child: &'a PhiEvaluator,
    moments: &'a [TailTable],
    acc: &'a AccuracySpec,
}

struct NodeValue {
    value: f64,
    err: f64,
    evals: usize,
}

impl Level<'_> {
    /// `x Σᵢ rᵢ ∫_x^∞ {u} lnⁱu u⁻² du` where the child's small-x form gives
    /// `φₙ₋₁(x/u) = (x/u) Σ_j q_j (ln x − ln u)^j` for `u > x`.
    fn above_x(&self, x: f64) -> Result<f64> {
        let r = models::shift_reflect(&self.child.small, x.ln());
        let lower = x.max(1.0);
        let mut sum = 0.0;
        for (i, (&ri, m)) in r.iter().zip(self.moments).enumerate() {
            let mi = m.tail(lower, |u| Ok(frac_unchecked(u) * u.ln().powi(i as i32) / (u * u)))?;
            sum += ri * mi;
        }
        Ok(x * sum)
    }

    fn value(&self, x: f64) -> Result<NodeValue> {
        let child = self.child;
        let mut trap = Trap(None);
        let (head, middle) = if x < 1.0 {
            // u ∈ (0, x): {u} = u, substitute v = x/u
            let head = x * child.tail_ref()?.total();
            let r = integrate_finite(|u: f64| trap.catch(child.eval(x / u)), x, 1.0, &Breakpoints::none(), self.acc)?;
            (head, r)
        } else {
            let head = x * child.tail_ref()?.tail(x, |v| Ok(child.eval(v)? / (v * v)))?;
            if x == 1.0 {
                let r = crate::quadrature::QuadResult { value: 0.0, err_estimate: 0.0, evals: 0, converged: true };
                (head, r)
            } else {
                let mut pts: Vec<f64> = (2..=x.ceil() as usize).map(|k| k as f64).collect();
                pts.extend((2..=x.floor() as usize).map(|k| x / k as f64));
                let bp = Breakpoints::from_unsorted(pts, 1.0, x);
                let r = integrate_finite(
                    |u: f64| frac_unchecked(u) * trap.catch(child.eval(x / u)) / u,
                    1.0,
                    x,
                    &bp,
                    self.acc,
                )?;
                (head, r)
            }
        };
        trap.check()?;
        if !middle.converged {
            return Err(Error::NonConvergence(format!(
                "phi_{}({x}): estimate {:e} after {} evaluations",
                self.order, middle.err_estimate, middle.evals
            )));
        }
        let value = head + middle.value + self.above_x(x)?;
        Ok(NodeValue { value, err: middle.err_estimate, evals: middle.evals })
    }
}

impl PhiEvaluator {
    /// Evaluator of order `n` on the default range `[1e-6, 1e3]`.
    pub fn build(n: u32, acc: &AccuracySpec) -> Result<Self> {
        Self::build_with_range(n, DEFAULT_X_MIN, DEFAULT_X_MAX, acc)
    }

    /// Builds orders `1..=n` in turn; each level reads only the previous one.
    pub fn build_with_range(n: u32, x_min: f64, x_max: f64, acc: &AccuracySpec) -> Result<Self> {
        check_finite(x_min, "x_min")?;
        check_finite(x_max, "x_max")?;
        acc.validate()?;
        if n < 1 {
            return Err(domain("order must be at least 1"));
        }
        if !(x_min > 0.0 && x_min < 1.0) {
            return Err(domain(format!("x_min must lie in (0, 1), got {x_min}")));
        }
        if !(x_max >= 8.0) {
            return Err(domain(format!("x_max must be at least 8, got {x_max}")));
        }
        let end = x_max.ceil() as usize;
        let mut ev = Self::first(x_min, end, acc)?;
        for order in 2..=n {
            ev = Self::next(ev, order, acc)?;
        }
        Ok(ev)
    }

    fn first(x_min: f64, end: usize, acc: &AccuracySpec) -> Result<Self> {
        let tail = TailTable::build(|v| frac_unchecked(v) / (v * v), |v| 0.5 / (v * v), end, acc)?;
        Ok(Self {
            order: 1,
            x_min,
            end,
            child: None,
            small: vec![1.0],
            mean: vec![0.5],
            grid: None,
            cells: Vec::new(),
            err_estimate: tail.err,
            evals: tail.evals,
            tail: Some(tail),
            moments: Vec::new(),
            acc: *acc,
        })
    }

    fn next(child: Self, order: u32, acc: &AccuracySpec) -> Result<Self> {
        let end = child.end;
        let x_min = child.x_min;
        let moments = (0..order - 1)
            .map(|k| {
                let k = k as i32;
                TailTable::build(
                    |u| frac_unchecked(u) * u.ln().powi(k) / (u * u),
                    |u| 0.5 * u.ln().powi(k) / (u * u),
                    end,
                    acc,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut evals: usize = moments.iter().map(|m| m.evals).sum();
        let mut err: f64 = 0.0;

        let (grid, cells) = {
            let level = Level { order, child: &child, moments: &moments, acc };
            let xs = LogGrid::abscissae(x_min, POINTS_PER_DECADE);
            let mut values = Vec::with_capacity(xs.len());
            for &x in &xs {
                let v = level.value(x)?;
                err = err.max(v.err / x);
                evals += v.evals;
                values.push(v.value / x);
            }
            let cells = build_cells(&level, end)?;
            for c in &cells {
                err = err.max(c.1);
                evals += c.2;
            }
            (LogGrid::new(x_min, values), cells.into_iter().map(|c| c.0).collect::<Vec<_>>())
        };
        let small = models::fit_polynomial(&grid.points().collect::<Vec<_>>(), order as usize - 1)?;
        let mean = models::mean_coefficients(order)?;
        let mut ev = Self {
            order,
            x_min,
            end,
            child: Some(Box::new(child)),
            small,
            mean,
            grid: Some(grid),
            cells,
            tail: None,
            moments,
            acc: *acc,
            err_estimate: 0.0,
            evals: 0,
        };
        let tail = {
            let ev_ref = &ev;
            let mean = ev.mean.clone();
            TailTable::build(|v| ev_ref.value(v) / (v * v), |v| poly(&mean, v.ln()) / (v * v), end, acc)?
        };
        ev.err_estimate = err + tail.err;
        ev.evals = evals + tail.evals;
        ev.tail = Some(tail);
        Ok(ev)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Upper end of the tabulated range.
    pub fn x_max(&self) -> f64 {
        self.end as f64
    }

    pub fn child(&self) -> Option<&PhiEvaluator> {
        self.child.as_deref()
    }

    pub fn accuracy(&self) -> &AccuracySpec {
        &self.acc
    }

    /// Largest quadrature error estimate met while tabulating, relative to the
    /// local size of φ below 1 and absolute above.
    pub fn err_estimate(&self) -> f64 {
        self.err_estimate
    }

    pub fn evals(&self) -> usize {
        self.evals
    }

    /// Coefficients `c_k` with `φₙ(x) = x Σ c_k lnᵏx` on `(0, 1)`, fitted to
    /// the tabulated values.
    pub fn small_x_coefficients(&self) -> &[f64] {
        &self.small
    }

    /// Coefficients `a_k` of the large-x mean `Σ a_k lnᵏx` about which φₙ
    /// oscillates.
    pub fn mean_coefficients(&self) -> &[f64] {
        &self.mean
    }

    pub fn mean(&self, x: f64) -> f64 {
        poly(&self.mean, x.ln())
    }

    /// Points of `(0, 1)` between which the tabulated φ is smooth; the
    /// interpolant is only continuous across them.
    pub fn grid_breakpoints(&self) -> Vec<f64> {
        match &self.grid {
            Some(g) => g.nodes().filter(|&x| x < 1.0).collect(),
            None => Vec::new(),
        }
    }

    fn tail_ref(&self) -> Result<&TailTable> {
        self.tail.as_ref().ok_or_else(|| Error::NonConvergence("tail table not built".into()))
    }

    /// Tabulated value for `0 < x ≤ x_max`.
    fn value(&self, x: f64) -> f64 {
        if self.order == 1 {
            return frac_unchecked(x);
        }
        if x < 1.0 {
            return match &self.grid {
                Some(g) if x >= self.x_min => x * g.eval(x),
                _ => x * poly(&self.small, x.ln()),
            };
        }
        let m = (x.floor() as usize).clamp(1, self.end - 1);
        self.cells[m - 1].eval(2.0 * (x - m as f64) - 1.0)
    }

    /// φₙ(x) for any `x > 0`. Below `x_min` the fitted small-x form is used;
    /// above `x_max` the value is recomputed from the definition.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_finite(x, "x")?;
        if x <= 0.0 {
            return Err(domain(format!("phi requires x > 0, got {x}")));
        }
        if self.order == 1 || x <= self.end as f64 {
            return Ok(self.value(x));
        }
        let child = self.child.as_deref().expect("order >= 2 has a child");
        let level = Level { order: self.order, child, moments: &self.moments, acc: &self.acc };
        Ok(level.value(x)?.value)
    }

    /// φₙ(x): exact for n = 1, tabulated on `[x_min, x_max]`, the leading
    /// small-x term below `x_min` and direct quadrature above `x_max`.
    pub fn phi(&self, x: f64) -> Result<f64> {
        check_finite(x, "x")?;
        if x <= 0.0 {
            return Err(domain(format!("phi requires x > 0, got {x}")));
        }
        if self.order >= 2 && x < self.x_min {
            return Ok(leading(self.order, x));
        }
        self.eval(x)
    }

    /// `φₙ(x) / lnⁿ⁻¹(x + 1)` for `x ≥ 1`.
    pub fn phi_growth_ratio(&self, x: f64) -> Result<f64> {
        check_finite(x, "x")?;
        if self.order < 2 {
            return Err(domain("growth ratio requires order >= 2"));
        }
        if x < 1.0 {
            return Err(domain(format!("growth ratio requires x >= 1, got {x}")));
        }
        Ok(self.phi(x)? / (x + 1.0).ln().powi(self.order as i32 - 1))
    }
}

type CellOutcome = (ChebCell, f64, usize);

fn build_cell(level: &Level<'_>, m: usize) -> Result<CellOutcome> {
    let nodes = cheb_nodes(m as f64, cell_degree(m));
    let mut values = Vec::with_capacity(nodes.len());
    let mut err: f64 = 0.0;
    let mut evals = 0;
    for &x in &nodes {
        let v = level.value(x)?;
        err = err.max(v.err);
        evals += v.evals;
        values.push(v.value);
    }
    let cell = ChebCell::from_values(&values);
    err = err.max(cell.tail_coeff());
    Ok((cell, err, evals))
}

/// Cells `[m, m + 1]` for `m = 1..end`, spread over the available cores.
/// Each cell depends only on the child level, so the result does not depend
/// on scheduling.
fn build_cells(level: &Level<'_>, end: usize) -> Result<Vec<CellOutcome>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let next = AtomicUsize::new(1);
    let mut done: Vec<(usize, Result<CellOutcome>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let m = next.fetch_add(1, Ordering::Relaxed);
                        if m >= end {
                            return out;
                        }
                        out.push((m, build_cell(level, m)));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("cell worker panicked")).collect()
    });
    done.sort_by_key(|d| d.0);
    done.into_iter().map(|d| d.1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiRow {
    pub n: u32,
    pub x: f64,
    pub phi: f64,
    /// Leading small-x term; absent for `x ≥ 1`.
    pub leading_term: Option<f64>,
}

/// φₙ on `points` log-spaced abscissae of `[x_min, x_max]`.
pub fn phi_table(ev: &PhiEvaluator, x_min: f64, x_max: f64, points: usize) -> Result<Vec<PhiRow>> {
    check_finite(x_min, "min")?;
    check_finite(x_max, "max")?;
    if !(x_min > 0.0 && x_min < x_max) {
        return Err(domain(format!("table range requires 0 < min < max, got [{x_min}, {x_max}]")));
    }
    if points < 2 {
        return Err(domain("table needs at least 2 points"));
    }
    let (l0, l1) = (x_min.ln(), x_max.ln());
    (0..points)
        .map(|i| {
            let x = match i {
                0 => x_min,
                _ if i == points - 1 => x_max,
                _ => (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp(),
            };
            let leading_term = (x < 1.0).then(|| if ev.order == 1 { x } else { leading(ev.order, x) });
            Ok(PhiRow { n: ev.order, x, phi: ev.phi(x)?, leading_term })
        })
        .collect()
}

/// CSV with header `n,x,phi,leading_term` and 17 significant digits.
pub fn write_phi_table_csv<W: Write>(mut w: W, rows: &[PhiRow]) -> std::io::Result<()> {
    writeln!(w, "n,x,phi,leading_term")?;
    for r in rows {
        let lead = r.leading_term.map(|v| format!("{v:.16e}")).unwrap_or_default();
        writeln!(w, "{},{:.16e},{:.16e},{}", r.n, r.x, r.phi, lead)?;
    }
    Ok(())
}
