//! Skew-information measures of quantum state/channel non-commutativity and
//! the correlation quantifiers they induce on bipartite states.
//!
//! The layers, bottom up:
//!
//! * [`linalg`] — dense complex matrices, Hermitian eigendecomposition,
//!   fractional powers of density matrices, partial traces.
//! * [`channels`] — Kraus maps, trace-preserving channels, and the stock
//!   constructions (unitary conjugation, projective measurement,
//!   depolarizing, amplitude damping, mixtures, tensor lifts).
//! * [`measures`] — the skew-information functionals `T_a` / `I_a` of a
//!   state relative to an operator or a channel, the induced bipartite
//!   correlation measures, and closed forms for special families.
//! * [`optimize`] — extremization of the correlation measures over
//!   projective-measurement and unitary-conjugation channel families.
//! * [`sampling`] — seeded random ensembles (Ginibre, Haar, random states,
//!   channels, classical-quantum states) and Monte Carlo estimators.
//! * [`verify`] — a deterministic property suite that checks every
//!   structural claim of the measure layer on random ensembles, including
//!   two claims that are FALSE for non-unital channels and are reported
//!   honestly (see the module docs).
//!
//! Everything is generic over the scalar type through [`Real`]; the `F64*`
//! aliases below fix the common concrete choice.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Dense complex matrix over `f64`.
pub type F64Matrix = linalg::matrix::ComplexMatrix<f64>;
/// Density matrix over `f64`.
pub type F64Density = linalg::density::DensityMatrix<f64>;
/// Bipartite state over `f64`.
pub type F64Bipartite = linalg::density::BipartiteState<f64>;
/// Kraus map over `f64`.
pub type F64KrausMap = channels::KrausMap<f64>;
/// Trace-preserving channel over `f64`.
pub type F64Channel = channels::QuantumChannel<f64>;
