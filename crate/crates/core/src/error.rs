use thiserror::Error;

use crate::numkernel::SpecialValue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The argument sits on a pole of Γ (or of a function built from it).
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A complex power or logarithm was requested on its branch cut.
    #[error("branch cut: {0}")]
    BranchCut(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Connection formula requested where c - a - b (or b - a) is an integer.
    #[error("degenerate hypergeometric parameters: {0}")]
    Degenerate(String),

    /// No evaluation strategy reached the requested tolerance; `best` holds
    /// the closest estimate with `converged == false`.
    #[error("no convergence in {what} (best estimate {:?}, error {:e})", best.value, best.abs_error_estimate)]
    NoConvergence { what: String, best: SpecialValue },

    #[error("quadrature did not converge in {what} (error estimate {estimate:e})")]
    QuadratureFailed { what: String, estimate: f64 },
}
