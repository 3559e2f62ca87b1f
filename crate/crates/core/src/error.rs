use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid accuracy specification: {0}")]
    InvalidAccuracy(String),
    #[error("evaluation budget exhausted after {evals} evaluations: {context}")]
    BudgetExhausted { evals: usize, context: String },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("tail model failure: {0}")]
    TailModel(String),
    #[error("inner convolution did not converge at x = {x}: {detail}")]
    InnerConvolution { x: f64, detail: String },
    #[error("evaluator order {found} does not match requested order {expected}")]
    OrderMismatch { expected: u32, found: u32 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by invalid input rather than by numerical failure.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Pole(_)
                | Error::NonFinite(_)
                | Error::InvalidAccuracy(_)
                | Error::OrderMismatch { .. }
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} = {x}")))
    }
}
