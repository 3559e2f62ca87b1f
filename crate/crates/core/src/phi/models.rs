use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::special::zeta_taylor_at_zero;

/// `Σ c_k y^k` by Horner's rule.
pub(crate) fn poly(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * y + ck)
}

/// Coefficients `a_k` of the large-x mean `Σ a_k ln^k x` of φₙ: the residue
/// at `s = 0` of `(ζ(s)/(−s))ⁿ xˢ`.
pub(crate) fn mean_coefficients(n: u32) -> Result<Vec<f64>> {
    let n = n as usize;
    let z = zeta_taylor_at_zero(n - 1)?;
    // Taylor coefficients of ζ(s)ⁿ up to s^{n−1}
    let mut pow = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; n];
        for (i, &p) in pow.iter().enumerate() {
            for (j, &zj) in z.iter().enumerate() {
                if i + j < n {
                    next[i + j] += p * zj;
                }
            }
        }
        pow = next;
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut fact = 1.0;
    Ok((0..n)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            sign * pow[n - 1 - k] / fact
        })
        .collect())
}

/// Least-squares coefficients of `Σ c_k y^k` through `(y, v)` pairs.
pub(crate) fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<Vec<f64>> {
    let a = DMatrix::from_fn(points.len(), degree + 1, |i, k| points[i].0.powi(k as i32));
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let c = a.svd(true, true).solve(&b, 1e-300).map_err(|e| Error::NonConvergence(format!("small-x fit: {e}")))?;
    Ok(c.iter().copied().collect())
}

/// Coefficients in `ln u` of `Σ_j q_j (L − ln u)^j`, i.e. `r_i` with
/// `Σ_j q_j (L − y)^j = Σ_i r_i y^i`.
pub(crate) fn shift_reflect(q: &[f64], l: f64) -> Vec<f64> {
    let mut r = vec![0.0; q.len()];
    for (j, &qj) in q.iter().enumerate() {
        let mut binom = 1.0;
        for (i, ri) in r.iter_mut().enumerate().take(j + 1) {
            if i > 0 {
                binom = binom * (j + 1 - i) as f64 / i as f64;
            }
            let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            *ri += qj * binom * sign * l.powi((j - i) as i32);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_first_two_orders() {
        let a1 = mean_coefficients(1).unwrap();
        assert!((a1[0] - 0.5).abs() < 1e-14);
        // ζ(s)²/s² residue: ζ(0)² ln x + 2ζ(0)ζ'(0) = ¼ ln x + ½ ln 2π
        let a2 = mean_coefficients(2).unwrap();
        assert!((a2[1] - 0.25).abs() < 1e-14);
        assert!((a2[0] - 0.918_938_533_204_672_7).abs() < 1e-14);
    }

    #[test]
    fn polynomial_fit_recovers_exact_coefficients() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let y = -0.5 * i as f64;
                (y, 0.3 - 1.5 * y + 0.5 * y * y)
            })
            .collect();
        let c = fit_polynomial(&pts, 2).unwrap();
        assert!((c[0] - 0.3).abs() < 1e-12 && (c[1] + 1.5).abs() < 1e-12 && (c[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reflected_polynomial() {
        let q = [1.0, 2.0, 3.0];
        let l = 0.7;
        let r = shift_reflect(&q, l);
        for y in [-1.0, 0.0, 2.5] {
            assert!((poly(&q, l - y) - poly(&r, y)).abs() < 1e-13);
        }
    }
}
