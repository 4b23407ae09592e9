//! Dense complex matrices.
//!
//! A deliberately small row-major matrix type carrying exactly the
//! operations the measures need: products, adjoints, traces, Kronecker
//! products, Hilbert-Schmidt inner products and a thin Householder QR.
//! Dimensions here are tiny (tensor products of qudits, d <= 36 in
//! practice), so clarity wins over blocking or SIMD tricks.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cre, czero, Real, C};

/// Dense complex matrix in row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// All-zeros matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cre(T::one());
        }
        m
    }

    /// Builds a matrix entry by entry from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch {
                    a_rows: r,
                    a_cols: c,
                    b_rows: 1,
                    b_cols: row.len(),
                });
            }
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    /// Square matrix with the given complex diagonal.
    pub fn diag(entries: &[C<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn real_diag(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = cre(e);
        }
        m
    }

    /// Rank-one outer product `u v^dag`.
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix; errors otherwise.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Borrows row `i` as a slice.
    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copies column `j` into a vector.
    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Entrywise map.
    pub fn map(&self, mut f: impl FnMut(C<T>) -> C<T>) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C<T>) -> Self {
        self.map(|z| z * s)
    }

    /// Trace (sum of diagonal entries); requires a square matrix.
    pub fn trace(&self) -> C<T> {
        debug_assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Hermitian part `(M + M^dag) / 2`.
    pub fn hermitize(&self) -> Self {
        debug_assert!(self.is_square(), "hermitize of non-square matrix");
        let half = cre(T::of(0.5));
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        })
    }

    /// Largest entry magnitude, `max_ij |M_ij|` (0 for empty matrices).
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Largest entrywise deviation `max_ij |M_ij - N_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff of mismatched shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Deviation from Hermiticity, `max_ij |M_ij - conj(M_ji)|`.
    pub fn hermiticity_deviation(&self) -> Result<T> {
        let n = self.square_dim()?;
        let mut dev = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > dev {
                    dev = d;
                }
            }
        }
        Ok(dev)
    }

    /// Deviation from unitarity, `max |M^dag M - I|`.
    pub fn unitarity_deviation(&self) -> Result<T> {
        let n = self.square_dim()?;
        let gram = &self.adjoint() * self;
        Ok(gram.max_abs_diff(&Self::identity(n)))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

// Arithmetic on references. Shape mismatches in these operators are
// programming errors (all public entry points validate dimensions up
// front), so they panic rather than return Result.

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    /// Matrix product, `i-k-j` loop order for cache friendliness.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "mul inner dimension");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == czero() {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += aik * b;
                }
            }
        }
        out
    }
}

impl<T: Real> std::fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re.as_f64(), z.im.as_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a (x) b`, with `a` acting on the leading tensor factor.
///
/// Index convention: row `(i_a, i_b)` of the product maps to flat index
/// `i_a * b.rows() + i_b`, i.e. the first factor varies slowest.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Trace of a product, `tr(a b)`, computed without forming the product.
/// Requires `a` to be `m x n` and `b` to be `n x m`.
pub fn trace_prod<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<C<T>> {
    if a.cols() != b.rows() || a.rows() != b.cols() {
        return Err(Error::ShapeMismatch {
            a_rows: a.rows(),
            a_cols: a.cols(),
            b_rows: b.rows(),
            b_cols: b.cols(),
        });
    }
    let mut acc = czero();
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    Ok(acc)
}

/// Hilbert-Schmidt inner product `<a, b> = tr(a^dag b)`, conjugate-linear in
/// the first argument. Both operands must have the same shape.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<C<T>> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::ShapeMismatch {
            a_rows: a.rows(),
            a_cols: a.cols(),
            b_rows: b.rows(),
            b_cols: b.cols(),
        });
    }
    let mut acc = czero();
    for (x, y) in a.data.iter().zip(&b.data) {
        acc += x.conj() * *y;
    }
    Ok(acc)
}

/// Thin QR factorization of an `m x n` matrix with `m >= n`, via Householder
/// reflections: returns `(q, r)` with `q` an `m x n` isometry
/// (`q^dag q = I_n`) and `r` upper triangular `n x n` such that `q r = a`.
pub fn qr_thin<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::ShapeMismatch {
            a_rows: m,
            a_cols: n,
            b_rows: n,
            b_cols: n,
        });
    }
    let mut work = a.clone();
    // Householder vectors; v[k] has length m - k.
    let mut reflectors: Vec<Vec<C<T>>> = Vec::with_capacity(n);

    for k in 0..n {
        // Column k below (and including) the diagonal.
        let mut v: Vec<C<T>> = (k..m).map(|i| work[(i, k)]).collect();
        let norm = v
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if norm == T::zero() {
            reflectors.push(Vec::new());
            continue;
        }
        // alpha = -exp(i arg(v0)) * ||v||, chosen so v0 - alpha never cancels.
        let phase = if v[0].norm() == T::zero() {
            cre(T::one())
        } else {
            v[0] / cre(v[0].norm())
        };
        let alpha = -phase * cre(norm);
        v[0] -= alpha;
        let vnorm_sqr = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if vnorm_sqr > T::zero() {
            // Apply P = I - 2 v v^dag / (v^dag v) to the trailing block.
            for j in k..n {
                let mut dot: C<T> = czero();
                for (t, &vi) in v.iter().enumerate() {
                    dot += vi.conj() * work[(k + t, j)];
                }
                let coef: C<T> = dot * cre(T::of(2.0) / vnorm_sqr);
                for (t, &vi) in v.iter().enumerate() {
                    let w = work[(k + t, j)];
                    work[(k + t, j)] = w - vi * coef;
                }
            }
        }
        work[(k, k)] = alpha;
        for i in k + 1..m {
            work[(i, k)] = czero();
        }
        reflectors.push(v);
    }

    let mut r = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            r[(i, j)] = work[(i, j)];
        }
    }

    // Accumulate Q by applying the reflectors in reverse to the thin identity.
    let mut q = ComplexMatrix::from_fn(m, n, |i, j| if i == j { cre(T::one()) } else { czero() });
    for k in (0..n).rev() {
        let v = &reflectors[k];
        if v.is_empty() {
            continue;
        }
        let vnorm_sqr = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if vnorm_sqr == T::zero() {
            continue;
        }
        for j in 0..n {
            let mut dot: C<T> = czero();
            for (t, &vi) in v.iter().enumerate() {
                dot += vi.conj() * q[(k + t, j)];
            }
            let coef: C<T> = dot * cre(T::of(2.0) / vnorm_sqr);
            for (t, &vi) in v.iter().enumerate() {
                let w = q[(k + t, j)];
                q[(k + t, j)] = w - vi * coef;
            }
        }
    }
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn identity_and_indexing() {
        let id = ComplexMatrix::<f64>::identity(3);
        assert_eq!(id[(0, 0)], c(1.0, 0.0));
        assert_eq!(id[(0, 1)], c(0.0, 0.0));
        assert_eq!(id.trace(), c(3.0, 0.0));
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, -1.0)],
        ])
        .unwrap();
        let p = &a * &b;
        // Row 0: [i, 1 + i*(-i)] = [i, 2]
        assert_eq!(p[(0, 0)], c(0.0, 1.0));
        assert_eq!(p[(0, 1)], c(2.0, 0.0));
        // Row 1: [0, 2]
        assert_eq!(p[(1, 0)], c(0.0, 0.0));
        assert_eq!(p[(1, 1)], c(2.0, 0.0));
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(3.0, 4.0)],
            vec![c(5.0, 6.0), c(7.0, 8.0)],
        ])
        .unwrap();
        let ad = a.adjoint();
        assert_eq!(ad[(0, 1)], c(5.0, -6.0));
        assert_eq!(ad[(1, 0)], c(3.0, -4.0));
    }

    #[test]
    fn kron_ordering_first_factor_slowest() {
        // kron(diag(1, 2), I_2) must be diag(1, 1, 2, 2): the first factor
        // indexes the leading (slow) tensor axis.
        let a = ComplexMatrix::real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::<f64>::identity(2);
        let k = kron(&a, &b);
        let want = ComplexMatrix::real_diag(&[1.0, 1.0, 2.0, 2.0]);
        assert!(k.max_abs_diff(&want) == 0.0);
    }

    #[test]
    fn kron_mixed_rectangular() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(2.0, 0.0)]]).unwrap(); // 1x2
        let b = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(0.0, -1.0)]]).unwrap(); // 2x1
        let k = kron(&a, &b); // 2x2
        assert_eq!(k[(0, 0)], c(0.0, 1.0));
        assert_eq!(k[(1, 0)], c(1.0, 0.0)); // i * (-i) = 1
        assert_eq!(k[(0, 1)], c(2.0, 0.0));
        assert_eq!(k[(1, 1)], c(0.0, -2.0));
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_slot() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0)]]).unwrap();
        let b = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0)]]).unwrap();
        // <i, 2> = conj(i) * 2 = -2i
        assert_eq!(hs_inner(&a, &b).unwrap(), c(0.0, -2.0));
        // Shape mismatch is an error, not a panic.
        let tall = ComplexMatrix::<f64>::zeros(2, 1);
        assert!(matches!(
            hs_inner(&a, &tall),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn hermitize_produces_hermitian_part() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, -1.0)],
        ])
        .unwrap();
        let h = a.hermitize();
        assert!(h.hermiticity_deviation().unwrap() < 1e-15);
        assert_eq!(h[(0, 0)], c(1.0, 0.0)); // imaginary diagonal removed
        assert_eq!(h[(0, 1)], c(1.0, 0.0)); // (2 + 0)/2
    }

    #[test]
    fn qr_reproduces_matrix_and_isometry() {
        // Fixed complex 4x3 with full column rank.
        let a = ComplexMatrix::from_fn(4, 3, |i, j| {
            c(
                ((i * 3 + j) as f64 * 0.37).sin(),
                ((i + 2 * j) as f64 * 0.71).cos(),
            )
        });
        let (q, r) = qr_thin(&a).unwrap();
        assert!((&q * &r).max_abs_diff(&a) < 1e-12);
        assert!(q.unitarity_deviation().is_err()); // q is 4x3, not square
        let gram = &q.adjoint() * &q;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        // R is upper triangular.
        for i in 0..3 {
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn qr_rejects_wide_matrices() {
        let wide = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(qr_thin(&wide), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn trace_prod_agrees_with_full_product() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, 2, |i, j| c(j as f64 * 0.3, i as f64));
        let direct = (&a * &b).trace();
        assert!((trace_prod(&a, &b).unwrap() - direct).norm() < 1e-14);
        assert!(trace_prod(&a, &a).is_err());
    }

    #[test]
    fn outer_product() {
        let u = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = [c(0.0, 1.0), c(1.0, 0.0)];
        let m = ComplexMatrix::outer(&u, &v);
        assert_eq!(m[(0, 0)], c(0.0, -1.0)); // 1 * conj(i)
        assert_eq!(m[(1, 1)], c(0.0, 1.0)); // i * conj(1)
    }
}
