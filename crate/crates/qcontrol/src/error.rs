//! Crate-wide error type.
//!
//! Shape mismatches in low-level matrix arithmetic are programmer errors and
//! panic (as in every dense linear-algebra crate); everything data-dependent
//! (a matrix that fails a unitarity check, a state that is not normalized, an
//! eigenpair that does not match its operator) surfaces as an `Error` value
//! carrying the measured violation.

use thiserror::Error;

/// Convenient alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input claimed Hermitian but `‖H − H†‖_F` exceeded the tolerance.
    #[error("matrix is not Hermitian: asymmetry residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    /// Input claimed unitary but `‖M†M − 1‖_F` exceeded the tolerance.
    #[error("matrix is not unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    /// A pure state must have unit norm.
    #[error("state is not normalized: norm {norm:.17}")]
    NotNormalized { norm: f64 },

    /// A declared eigenpair disagrees with its operator.
    #[error("eigenpair does not match operator: residual {residual:.3e}")]
    InvalidEigenpair { residual: f64 },

    /// Dimensions that must agree do not.
    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A matrix that must be an exact 0/1 permutation is not.
    #[error("matrix is not a permutation: {reason}")]
    NotPermutation { reason: &'static str },

    /// A bounded coefficient exceeded its modulus cap.
    #[error("coefficient modulus {value:.17} exceeds cap {cap:.17}")]
    ModulusExceeded { value: f64, cap: f64 },

    /// An auxiliary register failed to return to its prepared state.
    #[error("auxiliary register failed to disentangle: residual {residual:.3e}")]
    Disentanglement { residual: f64 },

    /// Adversarial searches need at least one gate.
    #[error("gate set is empty")]
    EmptyGateSet,

    /// A named gate or preset does not exist.
    #[error("unknown name: {name}")]
    UnknownName { name: String },

    /// An argument combination the operation does not support.
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: &'static str },

    /// The iteration failed to reach its convergence target.
    #[error("{what} did not converge: residual {residual:.3e}")]
    NoConvergence { what: &'static str, residual: f64 },
}
