use std::f64::consts::PI;

/// Chebyshev expansion of one integer cell `[m, m + 1]`.
#[derive(Debug, Clone)]
pub(crate) struct ChebCell {
    coeffs: Vec<f64>,
}

/// Interpolation nodes of a degree-`p` cell (first-kind Chebyshev points).
pub(crate) fn cheb_nodes(m: f64, p: usize) -> Vec<f64> {
    (0..=p).map(|j| m + 0.5 + 0.5 * (PI * (j as f64 + 0.5) / (p + 1) as f64).cos()).collect()
}

impl ChebCell {
    pub(crate) fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * s / n as f64;
                if k == 0 {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect();
        Self { coeffs }
    }

    /// Value at local coordinate `t ∈ [−1, 1]` by Clenshaw's recurrence.
    pub(crate) fn eval(&self, t: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }

    /// Magnitude of the last coefficient, a proxy for truncation error.
    pub(crate) fn tail_coeff(&self) -> f64 {
        self.coeffs.last().map_or(0.0, |c| c.abs())
    }
}

/// Polynomial degree used on cell `[m, m + 1]`. The cell restriction of φₙ
/// continues analytically up to the origin, so convergence improves with m.
pub(crate) fn cell_degree(m: usize) -> usize {
    match m {
        0..=3 => 16,
        4..=29 => 8,
        30..=99 => 6,
        100..=299 => 5,
        _ => 4,
    }
}

/// Uniform grid in `y = ln x` with values `φ(x)/x`, interpolated by local
/// cubics.
#[derive(Debug, Clone)]
pub(crate) struct LogGrid {
    y0: f64,
    h: f64,
    values: Vec<f64>,
}

impl LogGrid {
    pub(crate) fn abscissae(x_min: f64, per_decade: usize) -> Vec<f64> {
        let decades = -x_min.log10();
        let n = (decades * per_decade as f64).ceil().max(3.0) as usize;
        let y0 = x_min.ln();
        (0..=n).map(|i| (y0 * (1.0 - i as f64 / n as f64)).exp()).collect()
    }

    pub(crate) fn new(x_min: f64, values: Vec<f64>) -> Self {
        let y0 = x_min.ln();
        let h = -y0 / (values.len() - 1) as f64;
        Self { y0, h, values }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let y = x.ln();
        let n = self.values.len();
        let i = (((y - self.y0) / self.h).floor() as isize).clamp(1, n as isize - 3) as usize;
        let t = (y - self.y0) / self.h - (i - 1) as f64;
        // Lagrange cubic through nodes i−1..i+2 at local positions 0..3
        let v = &self.values[i - 1..i + 3];
        let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
    }

    /// Grid abscissae `x`, ascending.
    pub(crate) fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| (self.y0 + i as f64 * self.h).exp())
    }

    pub(crate) fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.y0 + i as f64 * self.h, v))
    }
}
