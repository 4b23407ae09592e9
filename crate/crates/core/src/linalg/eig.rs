//! Hermitian eigendecomposition via the cyclic complex Jacobi method.
//!
//! Jacobi iteration annihilates one off-diagonal pair per rotation and is
//! unconditionally stable for Hermitian input. At the dimensions this crate
//! works with (products of qudits, d <= ~40) it is more than fast enough and
//! avoids pulling in a LAPACK binding.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{cre, czero, Real, C};

/// Spectral decomposition `M = V diag(lambda) V^dag` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigensystem<T: Real> {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<T>,
    /// Unitary whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigensystem<T> {
    /// Rebuilds `V diag(lambda) V^dag`; useful for residual checks.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_eigenvalues(|x| x)
    }

    /// Applies a real spectral function: `V diag(f(lambda)) V^dag`,
    /// symmetrized afterwards to kill rounding-level Hermiticity drift.
    pub fn map_eigenvalues(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        self.map_eigenvalues_complex(|x| cre(f(x))).hermitize()
    }

    /// Applies a complex spectral function: `V diag(f(lambda)) V^dag`.
    /// No symmetrization (the result is not Hermitian in general, e.g. for
    /// `f = exp(i .)`).
    pub fn map_eigenvalues_complex(&self, f: impl Fn(T) -> C<T>) -> ComplexMatrix<T> {
        let v = &self.eigenvectors;
        let n = v.rows();
        // W = V diag(f(lambda)): scale columns, then W V^dag.
        let mut w = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let s = f(lam);
            for i in 0..n {
                w[(i, j)] *= s;
            }
        }
        &w * &v.adjoint()
    }
}

/// Largest off-diagonal magnitude of a square matrix.
fn off_diagonal_max<T: Real>(m: &ComplexMatrix<T>) -> T {
    let n = m.rows();
    let mut best = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = m[(i, j)].norm();
                if v > best {
                    best = v;
                }
            }
        }
    }
    best
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within `herm_tol` (checked); it is then
/// symmetrized exactly and diagonalized by cyclic Jacobi sweeps. Iteration
/// stops once every off-diagonal entry is below `scale * eps * 4` where
/// `scale` is the largest entry magnitude of the input, which puts the
/// reconstruction residual at the rounding floor.
pub fn eig_hermitian<T: Real>(
    m: &ComplexMatrix<T>,
    herm_tol: T,
) -> Result<HermitianEigensystem<T>> {
    let n = m.square_dim()?;
    let dev = m.hermiticity_deviation()?;
    if dev > herm_tol {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::<T>::identity(n);
    if n <= 1 {
        return Ok(HermitianEigensystem {
            eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
            eigenvectors: v,
        });
    }

    let scale = {
        let s = a.max_abs();
        if s == T::zero() {
            T::one()
        } else {
            s
        }
    };
    let stop = scale * T::epsilon() * T::of(4.0);
    let max_sweeps = 60;
    let mut converged = false;

    for _ in 0..max_sweeps {
        if off_diagonal_max(&a) <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= stop {
                    continue;
                }
                // 2x2 Hermitian subproblem: diagonalize
                //   [ app   apq ]
                //   [ apq*  aqq ]
                // with the small-angle root for stability.
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let abs_apq = apq.norm();
                let tau = (app - aqq) / (T::of(2.0) * abs_apq);
                let t = {
                    let denom = tau.abs() + (T::one() + tau * tau).sqrt();
                    let mag = T::one() / denom;
                    if tau >= T::zero() {
                        mag
                    } else {
                        -mag
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let sigma = t * c;
                // Complex rotation: s carries the phase of conj(apq).
                let s = apq.conj() * cre(sigma / abs_apq);

                // J differs from the identity only in rows/cols p and q:
                //   J[p][p] = c, J[p][q] = -conj(s), J[q][p] = s, J[q][q] = c.
                // Update A <- J^dag A J, acting on rows then columns.
                let cc = cre(c);
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = cc * apj + s.conj() * aqj;
                    a[(q, j)] = -s * apj + cc * aqj;
                }
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * cc + aiq * s;
                    a[(i, q)] = -aip * s.conj() + aiq * cc;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cc + viq * s;
                    v[(i, q)] = -vip * s.conj() + viq * cc;
                }
                // Clean the annihilated pair exactly.
                a[(p, q)] = czero();
                a[(q, p)] = czero();
            }
        }
    }
    if !converged && off_diagonal_max(&a) > stop {
        return Err(Error::EigNoConvergence { sweeps: max_sweeps });
    }

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("NaN eigenvalue"));
    let eigenvalues: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Unitary `exp(i H)` of a Hermitian matrix `H`, via the spectral theorem.
pub fn exp_i_hermitian<T: Real>(h: &ComplexMatrix<T>, herm_tol: T) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(h, herm_tol)?;
    Ok(eig.map_eigenvalues_complex(|x| C::new(x.cos(), x.sin())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::kron;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn diagonalizes_pauli_y() {
        let y = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let eig = eig_hermitian(&y, 1e-12).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&y) < 1e-14);
        assert!(eig.eigenvectors.unitarity_deviation().unwrap() < 1e-14);
    }

    #[test]
    fn handles_degenerate_spectra() {
        // I (x) diag(2, 5) has each eigenvalue twice.
        let d = ComplexMatrix::real_diag(&[2.0, 5.0]);
        let m = kron(&ComplexMatrix::identity(2), &d);
        let eig = eig_hermitian(&m, 1e-12).unwrap();
        let want = [2.0f64, 2.0, 5.0, 5.0];
        for (got, want) in eig.eigenvalues.iter().zip(want) {
            assert!((got - want).abs() < 1e-13);
        }
        assert!(eig.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn larger_fixed_matrix_roundtrips() {
        // Deterministic pseudo-random Hermitian 9x9.
        let n = 9;
        let raw = ComplexMatrix::from_fn(n, n, |i, j| {
            c(
                ((3 * i + 7 * j + 1) as f64 * 0.3).sin(),
                ((i * j + 2) as f64 * 0.7).cos(),
            )
        });
        let h = raw.hermitize();
        let eig = eig_hermitian(&h, 1e-12).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&h) < 1e-12);
        assert!(eig.eigenvectors.unitarity_deviation().unwrap() < 1e-12);
        // Ascending order.
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // Trace is preserved by similarity.
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            eig_hermitian(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn spectral_functions_apply_elementwise() {
        let h = ComplexMatrix::real_diag(&[1.0, 4.0]);
        let eig = eig_hermitian(&h, 1e-12).unwrap();
        let sqrt = eig.map_eigenvalues(|x: f64| x.sqrt());
        assert!(sqrt.max_abs_diff(&ComplexMatrix::real_diag(&[1.0, 2.0])) < 1e-14);
    }

    #[test]
    fn exp_i_hermitian_is_unitary_and_correct() {
        // exp(i t Y) = cos(t) I + i sin(t) Y; check at t = 0.7 via H = 0.7 Y.
        let t = 0.7;
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -t)],
            vec![c(0.0, t), c(0.0, 0.0)],
        ])
        .unwrap();
        let u = exp_i_hermitian(&h, 1e-12).unwrap();
        assert!(u.unitarity_deviation().unwrap() < 1e-13);
        let want = ComplexMatrix::from_rows(&[
            vec![c(t.cos(), 0.0), c(t.sin(), 0.0)],
            vec![c(-t.sin(), 0.0), c(t.cos(), 0.0)],
        ])
        .unwrap();
        // i sin(t) * (-i) = sin(t) on the upper-right entry.
        assert!(u.max_abs_diff(&want) < 1e-13);
    }
}
