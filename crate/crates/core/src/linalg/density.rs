//! Density operators, bipartite states, fractional powers and partial traces.
//!
//! [`DensityMatrix`] validates its defining properties eagerly (Hermitian,
//! unit trace, positive semidefinite) and stores the spectral decomposition
//! it computed while doing so, so every later fractional power reuses the
//! same eigensystem.
//!
//! Eigenvalue clamping: eigenvalues with `|lambda| <= strict_tol` are set to
//! exactly zero, and anything below `-strict_tol` is rejected. The symmetric
//! window matters: fractional powers amplify kernel noise brutally (an
//! eigenvalue that should be 0 but comes out as `+1e-16` turns into `~0.16`
//! under `powf(0.05)`), so rounding-level positives must be flushed to zero
//! just like rounding-level negatives. Genuine eigenvalues at or below the
//! clamp window are outside this crate's resolution by design.

use crate::error::{Error, Result};
use crate::linalg::eig::{eig_hermitian, HermitianEigensystem};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{cre, strict_tol, Real, C};

/// Which tensor factor of a bipartite system to keep.
///
/// Throughout the crate the `A` subsystem is the leading (slowest-varying)
/// tensor axis: basis state `|i_a, i_b>` has flat index `i_a * dim_b + i_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density operator together with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dim: usize,
    matrix: ComplexMatrix<T>,
    eig: HermitianEigensystem<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates and wraps a density operator.
    ///
    /// Checks, each within [`strict_tol`]: squareness, Hermiticity, unit
    /// trace, and positive semidefiniteness (after which eigenvalues within
    /// the clamp window collapse to exactly zero).
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let dim = matrix.square_dim()?;
        let tol = strict_tol::<T>();
        let herm_dev = matrix.hermiticity_deviation()?;
        if herm_dev > tol {
            return Err(Error::NotHermitian {
                deviation: herm_dev.as_f64(),
            });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne {
                trace: tr.re.as_f64(),
            });
        }
        let mut eig = eig_hermitian(&matrix, tol)?;
        if let Some(&min) = eig.eigenvalues.first() {
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min.as_f64(),
                });
            }
        }
        for lam in &mut eig.eigenvalues {
            if lam.abs() <= tol {
                *lam = T::zero();
            }
        }
        Ok(DensityMatrix { dim, matrix, eig })
    }

    /// Normalized pure state `|v><v| / <v|v>`.
    pub fn from_pure(v: &[C<T>]) -> Result<Self> {
        let norm_sqr = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if norm_sqr <= T::zero() {
            return Err(Error::ParamOutOfRange {
                name: "pure state norm",
                value: 0.0,
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
        let mut m = ComplexMatrix::outer(v, v);
        m = m.scale(cre(T::one() / norm_sqr));
        Self::new(m)
    }

    /// Maximally mixed state `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale(cre(T::one() / T::from_usize(dim).unwrap()));
        Self::new(m).expect("I/d is a valid state")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Spectral decomposition computed at construction, eigenvalues clamped.
    pub fn eig(&self) -> &HermitianEigensystem<T> {
        &self.eig
    }

    /// Clamped eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eig.eigenvalues
    }

    /// Purity `tr(rho^2)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> T {
        let f = self.matrix.frobenius_norm();
        f * f
    }
}

/// Fractional power `rho^t` for `t` in `[0, 1]`, via the cached spectrum:
/// `V diag(lambda^t) V^dag`, symmetrized.
///
/// Conventions at the spectrum's kernel: clamped zero eigenvalues contribute
/// zero for every `t`, including `t = 0`; so `frac_power(rho, 0)` is the
/// projector onto the support of `rho`, and `frac_power(rho, 1)` reproduces
/// `rho` up to rounding.
pub fn frac_power<T: Real>(rho: &DensityMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::ParamOutOfRange {
            name: "fractional power exponent",
            value: t.as_f64(),
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(rho.eig().map_eigenvalues(|lam| {
        if lam <= T::zero() {
            T::zero()
        } else if t == T::zero() {
            T::one()
        } else {
            lam.powf(t)
        }
    }))
}

/// Partial trace of an arbitrary operator on a `dim_a * dim_b` space.
///
/// `keep = Subsystem::A` sums out the trailing factor, `keep = Subsystem::B`
/// the leading one. The subsystem split must match the operator's dimension.
pub fn partial_trace_op<T: Real>(
    m: &ComplexMatrix<T>,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix<T>> {
    let n = m.square_dim()?;
    if n != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            context: "partial trace subsystem split",
            expected: dim_a * dim_b,
            got: n,
        });
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).fold(crate::scalar::czero(), |acc, b| {
                acc + m[(i * dim_b + b, j * dim_b + b)]
            })
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).fold(crate::scalar::czero(), |acc, a| {
                acc + m[(a * dim_b + i, a * dim_b + j)]
            })
        }),
    };
    Ok(out)
}

/// A density operator on a bipartite space with a declared `dim_a * dim_b`
/// tensor split (subsystem `A` on the leading axis).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T: Real> {
    dim_a: usize,
    dim_b: usize,
    state: DensityMatrix<T>,
}

impl<T: Real> BipartiteState<T> {
    /// Wraps an already validated state, checking the split multiplies out.
    pub fn new(dim_a: usize, dim_b: usize, state: DensityMatrix<T>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || state.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                context: "bipartite split",
                expected: dim_a * dim_b,
                got: state.dim(),
            });
        }
        Ok(BipartiteState {
            dim_a,
            dim_b,
            state,
        })
    }

    /// Validates a raw matrix as a density operator and wraps it.
    pub fn from_matrix(dim_a: usize, dim_b: usize, m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(dim_a, dim_b, DensityMatrix::new(m)?)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    /// Reduced state on `A` (traces out `B`).
    pub fn reduced_a(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(partial_trace_op(
            self.state.matrix(),
            self.dim_a,
            self.dim_b,
            Subsystem::A,
        )?)
    }

    /// Reduced state on `B` (traces out `A`).
    pub fn reduced_b(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(partial_trace_op(
            self.state.matrix(),
            self.dim_a,
            self.dim_b,
            Subsystem::B,
        )?)
    }
}

/// Partial trace of a bipartite state, returned as a validated state.
pub fn partial_trace<T: Real>(
    state: &BipartiteState<T>,
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    match keep {
        Subsystem::A => state.reduced_a(),
        Subsystem::B => state.reduced_b(),
    }
}
