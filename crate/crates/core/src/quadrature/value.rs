use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// Size used for error control; for compound values the largest component.
    fn magnitude(&self) -> f64;
    fn is_finite(&self) -> bool;
    /// Component-wise Neumaier step: adds `x` into `(sum, comp)`.
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self);
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier(sum, comp, x);
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier(&mut sum.re, &mut comp.re, x.re);
        neumaier(&mut sum.im, &mut comp.im, x.im);
    }
}

/// Two integrands carried through one quadrature pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair<V>(pub V, pub V);

impl<V: QuadValue> Add for Pair<V> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl<V: QuadValue> Sub for Pair<V> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl<V: QuadValue> Mul<f64> for Pair<V> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Pair(self.0 * k, self.1 * k)
    }
}

impl<V: QuadValue> QuadValue for Pair<V> {
    fn zero() -> Self {
        Pair(V::zero(), V::zero())
    }
    fn magnitude(&self) -> f64 {
        self.0.magnitude().max(self.1.magnitude())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        V::compensated_add(&mut sum.0, &mut comp.0, x.0);
        V::compensated_add(&mut sum.1, &mut comp.1, x.1);
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<V> {
    sum: V,
    comp: V,
}

impl<V: QuadValue> CompensatedSum<V> {
    pub fn new() -> Self {
        Self { sum: V::zero(), comp: V::zero() }
    }

    pub fn add(&mut self, x: V) {
        V::compensated_add(&mut self.sum, &mut self.comp, x);
    }

    pub fn value(&self) -> V {
        self.sum + self.comp
    }
}

impl<V: QuadValue> Default for CompensatedSum<V> {
    fn default() -> Self {
        Self::new()
    }
}
