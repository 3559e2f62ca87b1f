use crate::error::{Error, Result};

/// Target tolerances plus an evaluation budget for a numeric operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl AccuracySpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        let acc = Self { abs_tol, rel_tol, max_evals };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidAccuracy(format!("abs_tol = {}", self.abs_tol)));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidAccuracy(format!("rel_tol = {}", self.rel_tol)));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::InvalidAccuracy("at least one of abs_tol and rel_tol must be positive".into()));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidAccuracy("max_evals must be positive".into()));
        }
        Ok(())
    }

    /// Accuracy used for special-function kernels inside identity checks.
    pub fn special() -> Self {
        Self { abs_tol: 1e-16, rel_tol: 1e-15, max_evals: 10_000_000 }
    }

    /// Error allowed for a result of magnitude `scale`.
    pub fn tolerance(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..self }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Self {
        Self { max_evals, ..self }
    }

    /// Both tolerances multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..self }
    }
}

impl Default for AccuracySpec {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_evals: 10_000_000 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_all_zero_tolerances() {
        assert!(AccuracySpec::new(0.0, 0.0, 10).is_err());
        assert!(AccuracySpec::new(0.0, 1e-8, 10).is_ok());
        assert!(AccuracySpec::new(1e-8, 0.0, 0).is_err());
        assert!(AccuracySpec::new(f64::NAN, 1e-8, 10).is_err());
    }

    #[test]
    fn default_budget() {
        let acc = AccuracySpec::default();
        assert_eq!(acc.max_evals, 10_000_000);
        assert_eq!(acc.tolerance(1.0), 1e-8);
        assert_eq!(acc.tolerance(1e-5), 1e-10);
    }
}
