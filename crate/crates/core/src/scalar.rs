//! Floating-point abstraction used throughout the crate.
//!
//! Everything is generic over a [`Real`] scalar so the same code runs at
//! `f64` (the default, and the precision all stated tolerances assume) or at
//! `f32` for quick-and-dirty scans. `Real` is a blanket trait: any type
//! satisfying the listed `num_traits` bounds gets it for free.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar type underlying all matrices and measures.
///
/// Implemented by `f32` and `f64`. Note the documented tolerances
/// (`1e-10` for identities, `1e-8` for property suites, ...) are calibrated
/// for `f64`; at `f32` they must be relaxed by the caller.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal (tolerance, coefficient, angle, ...) into
    /// `Self`, panicking only for values unrepresentable in principle
    /// (never the case for finite literals in `f32`/`f64`).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal must convert")
    }

    /// Lossy view of `self` as `f64`, for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssignOps
        + std::iter::Sum
        + std::fmt::Debug
        + std::fmt::Display
        + std::fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the crate's scalar.
pub type C<T> = Complex<T>;

/// Default validation tolerance for structural identities (Hermiticity,
/// unit trace, unitarity, Kraus completeness, eigenvalue clamping).
///
/// `1e-10` at `f64`; floored at a small multiple of machine epsilon so the
/// same code remains usable at `f32`.
pub fn strict_tol<T: Real>() -> T {
    let floor = T::epsilon() * T::of(128.0);
    let base = T::of(1e-10);
    if base > floor {
        base
    } else {
        floor
    }
}

/// `0 + 0i`.
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// `1 + 0i`.
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Embeds a real scalar as a complex number.
pub fn cre<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
