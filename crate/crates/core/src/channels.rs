//! Quantum operations in Kraus form, measurement bases, and stock channel
//! constructors.
//!
//! [`KrausMap`] is any finite family of operators `{K_i}` acting as
//! `M -> sum_i K_i M K_i^dag` (a completely positive map, not necessarily
//! trace preserving). [`QuantumChannel`] is a `KrausMap` whose completeness
//! sum `sum_i K_i^dag K_i` equals the identity within [`strict_tol`], i.e. a
//! trace-preserving channel. Channels dereference to their underlying map,
//! so every `KrausMap` operation is available on a channel as well.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::matrix::{kron, ComplexMatrix};
use crate::scalar::{cre, czero, strict_tol, Real, C};

/// A completely positive map given by Kraus operators, all square and of a
/// common dimension. Not necessarily trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap<T: Real> {
    dim: usize,
    ops: Vec<ComplexMatrix<T>>,
    /// Cached completeness sum `sum_i K_i^dag K_i`.
    weight: ComplexMatrix<T>,
}

impl<T: Real> KrausMap<T> {
    /// Wraps a non-empty family of square operators of equal dimension.
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyOperatorList)?;
        let dim = first.square_dim()?;
        for op in &ops {
            if op.square_dim()? != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator dimension",
                    expected: dim,
                    got: op.rows(),
                });
            }
        }
        let mut weight = ComplexMatrix::zeros(dim, dim);
        for op in &ops {
            weight = &weight + &(&op.adjoint() * op);
        }
        Ok(KrausMap { dim, ops, weight })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    /// Completeness sum `sum_i K_i^dag K_i`, computed once at construction.
    pub fn weight(&self) -> &ComplexMatrix<T> {
        &self.weight
    }

    /// Deviation of the completeness sum from the identity,
    /// `max |sum K^dag K - I|`; zero exactly for trace-preserving families.
    pub fn completeness_deviation(&self) -> T {
        self.weight.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Applies the map: `m -> sum_i K_i m K_i^dag`.
    pub fn apply(&self, m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let n = m.square_dim()?;
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                context: "map applied to operator",
                expected: self.dim,
                got: n,
            });
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for op in &self.ops {
            out = &out + &(&(op * m) * &op.adjoint());
        }
        Ok(out)
    }

    /// The same map expressed in the frame rotated by `u`: Kraus operators
    /// `u^dag K_i u`. Satisfies
    /// `conjugated.apply(m) = u^dag . apply(u m u^dag) . u`.
    pub fn conjugated_by(&self, u: &ComplexMatrix<T>) -> Result<KrausMap<T>> {
        let dev = u.unitarity_deviation()?;
        if dev > strict_tol::<T>() {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
            });
        }
        if u.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "frame unitary dimension",
                expected: self.dim,
                got: u.rows(),
            });
        }
        let ud = u.adjoint();
        KrausMap::new(self.ops.iter().map(|k| &(&ud * k) * u).collect())
    }

    /// Tensors every Kraus operator with the identity on a trailing `B`
    /// factor of dimension `dim_b`: `K_i -> K_i (x) I_B`. The lifted map
    /// acts on the composite `A (x) B` space, touching only `A`.
    pub fn lift_left(&self, dim_b: usize) -> Result<KrausMap<T>> {
        if dim_b == 0 {
            return Err(Error::DimensionMismatch {
                context: "ancilla dimension for lift",
                expected: 1,
                got: 0,
            });
        }
        let id = ComplexMatrix::identity(dim_b);
        KrausMap::new(self.ops.iter().map(|k| kron(k, &id)).collect())
    }

    /// Tensors every Kraus operator with the identity on a leading `A`
    /// factor of dimension `dim_a`: `K_i -> I_A (x) K_i`. The lifted map
    /// acts on the composite `A (x) B` space, touching only `B`.
    pub fn lift_right(&self, dim_a: usize) -> Result<KrausMap<T>> {
        if dim_a == 0 {
            return Err(Error::DimensionMismatch {
                context: "ancilla dimension for lift",
                expected: 1,
                got: 0,
            });
        }
        let id = ComplexMatrix::identity(dim_a);
        KrausMap::new(self.ops.iter().map(|k| kron(&id, k)).collect())
    }
}

/// A trace-preserving [`KrausMap`] (completeness sum equal to the identity
/// within [`strict_tol`]).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel<T: Real>(KrausMap<T>);

impl<T: Real> QuantumChannel<T> {
    /// Builds the map and verifies trace preservation.
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        Self::from_map(KrausMap::new(ops)?)
    }

    /// Promotes an existing map after checking completeness.
    pub fn from_map(map: KrausMap<T>) -> Result<Self> {
        let dev = map.completeness_deviation();
        if dev > strict_tol::<T>() {
            return Err(Error::NotTracePreserving {
                deviation: dev.as_f64(),
            });
        }
        Ok(QuantumChannel(map))
    }

    /// Lift to `A (x) B`, acting as the identity on `B`. Trace preservation
    /// survives the lift exactly, but is re-verified for cheap insurance.
    pub fn lift_left(&self, dim_b: usize) -> Result<QuantumChannel<T>> {
        Self::from_map(self.0.lift_left(dim_b)?)
    }

    /// Lift to `A (x) B`, acting as the identity on `A`.
    pub fn lift_right(&self, dim_a: usize) -> Result<QuantumChannel<T>> {
        Self::from_map(self.0.lift_right(dim_a)?)
    }

    /// Frame conjugation (Kraus `u^dag K_i u`); preserves trace preservation.
    pub fn conjugated_by(&self, u: &ComplexMatrix<T>) -> Result<QuantumChannel<T>> {
        Self::from_map(self.0.conjugated_by(u)?)
    }

    /// The underlying Kraus family.
    pub fn as_map(&self) -> &KrausMap<T> {
        &self.0
    }
}

impl<T: Real> Deref for QuantumChannel<T> {
    type Target = KrausMap<T>;
    fn deref(&self) -> &KrausMap<T> {
        &self.0
    }
}

/// An orthonormal measurement basis, stored as the unitary whose columns are
/// the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis<T: Real> {
    dim: usize,
    vectors: ComplexMatrix<T>,
}

impl<T: Real> MeasurementBasis<T> {
    /// Wraps a unitary's columns as a measurement basis; the matrix must be
    /// unitary within [`strict_tol`].
    pub fn from_unitary(u: ComplexMatrix<T>) -> Result<Self> {
        let dim = u.square_dim()?;
        let dev = u.unitarity_deviation()?;
        if dev > strict_tol::<T>() {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
            });
        }
        Ok(MeasurementBasis { dim, vectors: u })
    }

    /// The computational (standard) basis.
    pub fn computational(dim: usize) -> Self {
        MeasurementBasis {
            dim,
            vectors: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The unitary whose `i`-th column is the `i`-th basis vector.
    pub fn vectors(&self) -> &ComplexMatrix<T> {
        &self.vectors
    }

    /// Rank-one projector `|u_i><u_i|` onto the `i`-th basis vector.
    pub fn projector(&self, i: usize) -> ComplexMatrix<T> {
        let col = self.vectors.column(i);
        ComplexMatrix::outer(&col, &col)
    }

    /// All `dim` projectors in basis order.
    pub fn projectors(&self) -> Vec<ComplexMatrix<T>> {
        (0..self.dim).map(|i| self.projector(i)).collect()
    }
}

/// Qubit amplitude damping channel with decay probability `p` in `[0, 1]`:
/// Kraus operators `[[1, 0], [0, sqrt(1-p)]]` and `[[0, sqrt(p)], [0, 0]]`.
pub fn amplitude_damping<T: Real>(p: T) -> Result<QuantumChannel<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::ParamOutOfRange {
            name: "damping probability",
            value: p.as_f64(),
            lo: 0.0,
            hi: 1.0,
        });
    }
    let z = czero::<T>();
    let k1 =
        ComplexMatrix::from_rows(&[vec![cre(T::one()), z], vec![z, cre((T::one() - p).sqrt())]])?;
    let k2 = ComplexMatrix::from_rows(&[vec![z, cre(p.sqrt())], vec![z, z]])?;
    QuantumChannel::new(vec![k1, k2])
}

/// Unitary conjugation channel `rho -> U rho U^dag`.
pub fn unitary_channel<T: Real>(u: ComplexMatrix<T>) -> Result<QuantumChannel<T>> {
    let dev = u.unitarity_deviation()?;
    if dev > strict_tol::<T>() {
        return Err(Error::NotUnitary {
            deviation: dev.as_f64(),
        });
    }
    QuantumChannel::new(vec![u])
}

/// Projective (von Neumann) measurement channel
/// `rho -> sum_i P_i rho P_i` for the given orthonormal basis.
pub fn projective_channel<T: Real>(basis: &MeasurementBasis<T>) -> QuantumChannel<T> {
    QuantumChannel::new(basis.projectors()).expect("projective families are trace preserving")
}

/// Orthonormal (Hilbert-Schmidt) basis of Hermitian operators on a
/// `dim`-dimensional space, `dim^2` elements in a fixed order:
///
/// 1. symmetric pairs `(E_jk + E_kj) / sqrt(2)` for `j < k`, lexicographic;
/// 2. antisymmetric pairs `(-i E_jk + i E_kj) / sqrt(2)` for `j < k`,
///    lexicographic;
/// 3. diagonal `diag(1, ..., 1, -l, 0, ..., 0) / sqrt(l (l+1))` for
///    `l = 1 .. dim-1` (the `-l` entry at index `l`);
/// 4. the normalized identity `I / sqrt(dim)` last.
///
/// For `dim = 2` this is `{X, Y, Z, I} / sqrt(2)`.
pub fn hermitian_operator_basis<T: Real>(dim: usize) -> Vec<ComplexMatrix<T>> {
    let mut out = Vec::with_capacity(dim * dim);
    let inv_sqrt2 = T::one() / T::of(2.0).sqrt();
    for j in 0..dim {
        for k in j + 1..dim {
            let mut m = ComplexMatrix::zeros(dim, dim);
            m[(j, k)] = cre(inv_sqrt2);
            m[(k, j)] = cre(inv_sqrt2);
            out.push(m);
        }
    }
    for j in 0..dim {
        for k in j + 1..dim {
            let mut m = ComplexMatrix::zeros(dim, dim);
            m[(j, k)] = C::new(T::zero(), -inv_sqrt2);
            m[(k, j)] = C::new(T::zero(), inv_sqrt2);
            out.push(m);
        }
    }
    for l in 1..dim {
        let norm = T::one() / (T::from_usize(l * (l + 1)).unwrap()).sqrt();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..l {
            m[(i, i)] = cre(norm);
        }
        m[(l, l)] = cre(-T::from_usize(l).unwrap() * norm);
        out.push(m);
    }
    out.push(
        ComplexMatrix::identity(dim).scale(cre(T::one() / T::from_usize(dim).unwrap().sqrt())),
    );
    out
}

/// Completely depolarizing channel `rho -> tr(rho) I / dim`, realized by the
/// Kraus family `{W_m / sqrt(dim)}` over [`hermitian_operator_basis`].
pub fn depolarizing_channel<T: Real>(dim: usize) -> QuantumChannel<T> {
    let scale = cre(T::one() / T::from_usize(dim).unwrap().sqrt());
    let ops = hermitian_operator_basis(dim)
        .into_iter()
        .map(|w| w.scale(scale))
        .collect();
    QuantumChannel::new(ops).expect("depolarizing family is trace preserving")
}

/// Positive linear combination of Kraus maps: given coefficients `c_i > 0`
/// and maps `Phi_i` of a common dimension, returns the map
/// `sum_i c_i Phi_i`, realized by rescaling every Kraus operator of `Phi_i`
/// with `sqrt(c_i)`. The result is generally not trace preserving.
pub fn positive_mix<T: Real>(coeffs: &[T], maps: &[KrausMap<T>]) -> Result<KrausMap<T>> {
    if coeffs.len() != maps.len() {
        return Err(Error::DimensionMismatch {
            context: "mix coefficient count",
            expected: maps.len(),
            got: coeffs.len(),
        });
    }
    let first = maps.first().ok_or(Error::EmptyOperatorList)?;
    let dim = first.dim();
    let mut ops = Vec::new();
    for (i, (&c, map)) in coeffs.iter().zip(maps).enumerate() {
        // `partial_cmp` so that a NaN coefficient is rejected, not let through.
        if c.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::NonPositiveCoefficient {
                index: i,
                value: c.as_f64(),
            });
        }
        if map.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "mixed map dimension",
                expected: dim,
                got: map.dim(),
            });
        }
        let s = cre(c.sqrt());
        for op in map.ops() {
            ops.push(op.scale(s));
        }
    }
    KrausMap::new(ops)
}
