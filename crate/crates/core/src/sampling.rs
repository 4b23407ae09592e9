//! Random ensembles (Haar unitaries, Ginibre-induced states, random
//! channels, classical-quantum states) and Monte Carlo estimation of the
//! uniform-twirl correlation.
//!
//! All generators draw from a [`SeededRng`] so every ensemble is exactly
//! reproducible from a 64-bit seed, across runs and across scalar types
//! (samples are produced in `f64` and converted). Parallel splitting is
//! supported only through [`SeededRng::fork`], which derives independent
//! sub-streams by hashing `(seed, index)`; the single-threaded stream is the
//! reference.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channels::{KrausMap, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::density::{frac_power, BipartiteState, DensityMatrix};
use crate::linalg::matrix::{kron, qr_thin, trace_prod, ComplexMatrix};
use crate::measures::MeasureParams;
use crate::scalar::{cre, Real, C};

/// Identifier of the only stream algorithm this crate emits.
const ALGORITHM: &str = "chacha12";

/// A seeded, reproducible random stream (ChaCha12).
///
/// Identical `(seed, algorithm)` pairs produce bit-identical sample
/// sequences. Sub-streams for independent tasks come from [`fork`], never
/// from sharing or re-seeding by hand.
///
/// [`fork`]: SeededRng::fork
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha12Rng,
}

/// SplitMix64 finalizer; decorrelates consecutive fork indices.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        ALGORITHM
    }

    /// Derives the `index`-th independent sub-stream. Deterministic in
    /// `(seed, index)` and independent of how much of `self` has been
    /// consumed.
    pub fn fork(&self, index: u64) -> SeededRng {
        SeededRng::new(splitmix64(self.seed ^ splitmix64(index)))
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

/// One standard complex Gaussian entry: independent N(0,1) real and
/// imaginary parts, drawn in `f64` so the stream is scalar-type agnostic.
fn complex_normal<T: Real>(rng: &mut SeededRng) -> C<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C::new(T::of(re), T::of(im))
}

/// A `rows x cols` Ginibre matrix (i.i.d. standard complex Gaussians),
/// filled row-major.
pub fn ginibre<T: Real>(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix<T> {
    let entries: Vec<C<T>> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j])
}

/// A Haar-distributed `d x d` unitary: QR of a Ginibre matrix with the R
/// diagonal's phases folded back into Q. Without that correction the
/// distribution is biased; with it the result is exactly Haar.
pub fn haar_unitary<T: Real>(d: usize, rng: &mut SeededRng) -> ComplexMatrix<T> {
    let g = ginibre(d, d, rng);
    let (q, r) = qr_thin(&g).expect("square Ginibre matrices always factor");
    // Column phases: R_kk / |R_kk|. A Ginibre matrix is singular with
    // probability zero; guard the measure-zero case anyway.
    ComplexMatrix::from_fn(d, d, |i, j| {
        let rd = r[(j, j)];
        let n = rd.norm();
        if n > T::zero() {
            q[(i, j)] * (rd / cre(n))
        } else {
            q[(i, j)]
        }
    })
}

/// A Ginibre-induced random density matrix of fixed rank:
/// `G G^dag / tr(G G^dag)` with `G` a `d x rank` Ginibre matrix.
pub fn random_density<T: Real>(
    d: usize,
    rank: usize,
    rng: &mut SeededRng,
) -> Result<DensityMatrix<T>> {
    if rank < 1 || rank > d {
        return Err(Error::RankOutOfRange { rank, dim: d });
    }
    let g = ginibre::<T>(d, rank, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(cre(T::one() / tr)))
}

/// A random channel with `kraus_count` Kraus operators: the `d x d` blocks
/// of a Haar-random isometry from dimension `d` into `d * kraus_count`
/// (economy QR of a tall Ginibre matrix). Completeness holds by
/// construction.
pub fn random_channel<T: Real>(
    d: usize,
    kraus_count: usize,
    rng: &mut SeededRng,
) -> QuantumChannel<T> {
    assert!(d >= 1 && kraus_count >= 1, "degenerate channel shape");
    let g = ginibre::<T>(d * kraus_count, d, rng);
    let (q, _) = qr_thin(&g).expect("tall Ginibre matrices always factor");
    let ops = (0..kraus_count)
        .map(|b| ComplexMatrix::from_fn(d, d, |i, j| q[(b * d + i, j)]))
        .collect();
    QuantumChannel::from_map(KrausMap::new(ops).expect("blocks of an isometry are well shaped"))
        .expect("isometry columns are orthonormal, so the blocks are complete")
}

/// A random bipartite state of the given total rank on `d_a x d_b`.
pub fn random_bipartite<T: Real>(
    d_a: usize,
    d_b: usize,
    rank: usize,
    rng: &mut SeededRng,
) -> Result<BipartiteState<T>> {
    let rho = random_density(d_a * d_b, rank, rng)?;
    BipartiteState::new(d_a, d_b, rho)
}

/// A random classical-quantum state
/// `rho_AB = sum_j p_j |j><j| (x) rho_j^B` in the computational basis of
/// `A`: uniform-Dirichlet weights (normalized exponentials) and full-rank
/// Ginibre factors on `B`.
pub fn random_classical_quantum<T: Real>(
    d_a: usize,
    d_b: usize,
    rng: &mut SeededRng,
) -> BipartiteState<T> {
    assert!(d_a >= 2 && d_b >= 2, "degenerate subsystem");
    let raw: Vec<f64> = (0..d_a).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut m = ComplexMatrix::<T>::zeros(d_a * d_b, d_a * d_b);
    for (j, &e) in raw.iter().enumerate() {
        let p = T::of(e / total);
        let rho_j = random_density::<T>(d_b, d_b, rng).expect("full rank is in range");
        for r in 0..d_b {
            for c in 0..d_b {
                m[(j * d_b + r, j * d_b + c)] = rho_j.matrix()[(r, c)] * cre(p);
            }
        }
    }
    BipartiteState::from_matrix(d_a, d_b, m).expect("convex block assembly is a valid state")
}

/// A Monte Carlo estimate: sample mean, standard error of the mean, and
/// sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub stderr: T,
    pub n_samples: usize,
}

/// Monte Carlo estimate of the uniform-twirl correlation
/// `int [ T_a(rho_AB, U (x) I) - T_a(rho_A, U) ] dU` over Haar unitaries
/// on `A`. The per-sample integrand is
/// `tr(rho_A^a U rho_A^(1-a) U^dag) - tr(rho_AB^a (U (x) I) rho_AB^(1-a) (U^dag (x) I))`
/// (the constant terms of the two measures cancel).
///
/// Converges to [`crate::measures::twirl_corr_closed`]; requires `n >= 2`
/// for the standard error.
pub fn mc_twirl_corr<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
    n: usize,
    rng: &mut SeededRng,
) -> McEstimate<T> {
    assert!(n >= 2, "standard error needs at least two samples");
    let a = params.alpha();
    let rho_a = state.reduced_a().expect("valid state has reductions");
    let la = frac_power(&rho_a, a).expect("alpha is in range");
    let l1a = frac_power(&rho_a, T::one() - a).expect("alpha is in range");
    let ga = frac_power(state.state(), a).expect("alpha is in range");
    let g1a = frac_power(state.state(), T::one() - a).expect("alpha is in range");
    let eye_b = ComplexMatrix::<T>::identity(state.dim_b());

    // Welford accumulation keeps the variance stable over long runs.
    let mut mean = T::zero();
    let mut m2 = T::zero();
    for i in 1..=n {
        let u = haar_unitary::<T>(state.dim_a(), rng);
        let ud = u.adjoint();
        let local = trace_prod(&(&la * &u), &(&l1a * &ud))
            .expect("shapes agree")
            .re;
        let (ub, udb) = (kron(&u, &eye_b), kron(&ud, &eye_b));
        let global = trace_prod(&(&ga * &ub), &(&g1a * &udb))
            .expect("shapes agree")
            .re;
        let x = local - global;
        let delta = x - mean;
        mean += delta / T::from_usize(i).unwrap();
        m2 += delta * (x - mean);
    }
    let nn = T::from_usize(n).unwrap();
    let var = m2 / (nn - T::one());
    McEstimate {
        mean,
        stderr: (var / nn).sqrt(),
        n_samples: n,
    }
}
