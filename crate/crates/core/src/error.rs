use crate::qcore::ComplexValue;

/// Failures raised by the evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A factor `1 - q^w` fell below the pole threshold. `at` is the nearest
    /// point `l + 2*pi*i*m / log q` of the singular lattice, in the argument
    /// coordinates of the function that was called.
    #[error("singular point at {at}")]
    Pole { at: ComplexValue },

    /// The truncation controller or the continuation exhausted its budget.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// The result is finite in the log domain but not representable as an
    /// `f64` value.
    #[error("value out of double-precision range (log value {log_value})")]
    Range { log_value: ComplexValue },
}

pub type Result<T> = std::result::Result<T, Error>;
