//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! QR, density operators, bipartite states, fractional powers and partial
//! traces.

pub mod density;
pub mod eig;
pub mod matrix;

pub use density::{
    frac_power, partial_trace, partial_trace_op, BipartiteState, DensityMatrix, Subsystem,
};
pub use eig::{eig_hermitian, exp_i_hermitian, HermitianEigensystem};
pub use matrix::{hs_inner, kron, qr_thin, trace_prod, ComplexMatrix};
