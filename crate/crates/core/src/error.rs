//! Crate-wide error type.
//!
//! All fallible operations return [`Result`]. Numerical diagnostics
//! (deviations, residues, offending eigenvalues) are carried as `f64`
//! regardless of the scalar the computation ran at, so error values are
//! printable and comparable without dragging the generic parameter around.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// Two operands have incompatible shapes for the requested operation.
    #[error("shape mismatch: ({a_rows}x{a_cols}) vs ({b_rows}x{b_cols})")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    /// A dimension disagrees with what the surrounding structure requires
    /// (channel vs. state, subsystem split vs. total, parameter count, ...).
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// Hermiticity check failed.
    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// Unit-trace check failed.
    #[error("trace is not 1 (got {trace:.12})")]
    TraceNotOne { trace: f64 },

    /// Positive-semidefiniteness check failed.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Unitarity / orthonormality check failed.
    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    /// Kraus completeness check failed (sum of K^dag K differs from I).
    #[error("Kraus family is not trace preserving (max |sum K^dag K - I| = {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    /// A channel or basis was built from an empty operator list.
    #[error("operator list is empty")]
    EmptyOperatorList,

    /// A convex-combination coefficient is not strictly positive.
    #[error("mixing coefficient {index} is not positive ({value})")]
    NonPositiveCoefficient { index: usize, value: f64 },

    /// The interpolation exponent must lie strictly between 0 and 1.
    #[error("alpha must lie strictly inside (0, 1), got {alpha}")]
    AlphaOutOfRange { alpha: f64 },

    /// A real parameter fell outside its admissible interval.
    #[error("parameter {name} out of range: {value} not in [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A rank argument is incompatible with the matrix dimension.
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    /// The Jacobi eigensolver failed to reduce the off-diagonal norm.
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigNoConvergence { sweeps: usize },

    /// A quantity that is real by construction came out with a noticeable
    /// imaginary part, indicating corrupted inputs upstream.
    #[error("imaginary residue {imag:.3e} exceeds {tol:.1e} on a real-valued quantity")]
    ImaginaryResidue { imag: f64, tol: f64 },

    /// Two independent evaluation routes of the same quantity disagree.
    #[error("independent evaluation routes disagree by {delta:.3e}")]
    FormDisagreement { delta: f64 },

    /// A correlation measure that is nonnegative by theory came out negative
    /// beyond tolerance.
    #[error("correlation measure is negative beyond tolerance ({value:.3e})")]
    NegativeCorrelation { value: f64 },

    /// No optimizer restart reached local convergence within its budget.
    #[error("optimizer: no restart converged within the evaluation budget")]
    OptimizerNoConvergence,

    /// Extraction of Hermitian generator parameters from a unitary failed.
    #[error("unitary logarithm failed (residual {residual:.3e})")]
    UnitaryLogFailed { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
