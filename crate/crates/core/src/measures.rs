//! Scalar measures of state/channel non-commutativity and the correlation
//! quantifiers they induce.
//!
//! For a state `rho`, an operator `K` and an interpolation exponent
//! `alpha` in `(0, 1)`:
//!
//! * generalized variance        `V(rho, K)   = tr(rho K^dag K) - tr(rho K) tr(rho K^dag)`
//! * GWYD skew information       `I_a(rho, K) = -1/2 tr([rho^a, K][rho^(1-a), K^dag])`
//! * MWYD skew information       `T_a(rho, K) = tr(rho K^dag K) - tr(rho^a K rho^(1-a) K^dag)`
//!
//! both skew informations extend to Kraus maps `Phi = {K_i}` by summing over
//! `i`; for trace-preserving `Phi` the MWYD sum collapses to the closed form
//! `T_a(rho, Phi) = 1 - tr(rho^a Phi(rho^(1-a)))`.
//!
//! On a bipartite state the difference between the lifted global measure and
//! the local one quantifies correlation relative to the channel:
//!
//! * `corr_t = T_a(rho_AB, Phi_A (x) Id_B) - T_a(rho_A, Phi_A)`
//! * `corr_i = I_a(rho_AB, Phi_A (x) Id_B) - I_a(rho_A, Phi_A)`
//!
//! Both are nonnegative (up to numerical tolerance) and coincide identically
//! at `alpha = 1/2`.
//!
//! Sign caveat: `mwyd_skew` of a single non-Hermitian operator may be
//! negative (e.g. `T_(1/2)(diag(3/4, 1/4), |0><1|) = 1/4 - sqrt(3)/4 < 0`),
//! and the Kraus sum `mwyd_channel` may ALSO be negative for channels whose
//! completeness sum in the opposite order `sum K K^dag` exceeds the identity
//! (non-unital channels such as amplitude damping: see
//! `unit tests::mwyd_channel_can_be_negative_for_nonunital_channels`).
//! Non-negativity of `mwyd_channel` is guaranteed for unital channels only.
//! The correlation differences `corr_t`/`corr_i` are nonnegative regardless,
//! and negative values beyond `-1e-9` raise [`Error::NegativeCorrelation`].

use crate::channels::{KrausMap, MeasurementBasis, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::density::{frac_power, BipartiteState, DensityMatrix, Subsystem};
use crate::linalg::matrix::{trace_prod, ComplexMatrix};
use crate::scalar::{Real, C};

/// Parameters shared by the interpolation-exponent measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureParams<T: Real> {
    alpha: T,
}

impl<T: Real> MeasureParams<T> {
    /// Requires `alpha` strictly inside `(0, 1)`.
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::AlphaOutOfRange {
                alpha: alpha.as_f64(),
            });
        }
        Ok(MeasureParams { alpha })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

/// Tolerance on the imaginary part of analytically real scalars.
const IMAG_TOL: f64 = 1e-9;

/// Tolerance below which correlation measures are treated as corrupt rather
/// than merely rounded.
const NEGATIVITY_TOL: f64 = 1e-9;

/// Agreement tolerance between independent evaluation routes.
const FORM_TOL: f64 = 1e-10;

/// The named tolerances are f64-scale; like [`crate::scalar::strict_tol`]
/// they get floored at a multiple of machine epsilon (larger here — route
/// comparisons accumulate rounding over matrix products and fractional
/// powers) so the generic code stays usable at f32. At f64 the floor is
/// ~4.5e-13 and every base value above wins, so nothing changes there.
fn scaled_tol<T: Real>(base: f64) -> T {
    let floor = T::epsilon() * T::of(2048.0);
    let base = T::of(base);
    if base > floor {
        base
    } else {
        floor
    }
}

/// Extracts the real part of an analytically real scalar, rejecting
/// imaginary residue above [`IMAG_TOL`].
fn real_scalar<T: Real>(z: C<T>) -> Result<T> {
    let tol = scaled_tol::<T>(IMAG_TOL);
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            imag: z.im.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(z.re)
}

/// Checks that `k` acts on the same space as `rho`.
fn check_operator_dim<T: Real>(rho: &DensityMatrix<T>, k: &ComplexMatrix<T>) -> Result<()> {
    let n = k.square_dim()?;
    if n != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "operator vs state dimension",
            expected: rho.dim(),
            got: n,
        });
    }
    Ok(())
}

/// Generalized variance `V(rho, K) = tr(rho K^dag K) - tr(rho K) tr(rho K^dag)`.
///
/// Coincides with the usual variance `tr(rho K^2) - (tr rho K)^2` for
/// Hermitian `K`, and with [`mwyd_skew`] (any `alpha`) for pure `rho`.
pub fn variance<T: Real>(rho: &DensityMatrix<T>, k: &ComplexMatrix<T>) -> Result<T> {
    check_operator_dim(rho, k)?;
    let m = rho.matrix();
    let second = trace_prod(m, &(&k.adjoint() * k))?;
    let mean_k = trace_prod(m, k)?;
    let mean_kd = trace_prod(m, &k.adjoint())?;
    real_scalar(second - mean_k * mean_kd)
}

/// The two fractional powers `(rho^alpha, rho^(1-alpha))` used by every
/// skew-information evaluation.
fn power_pair<T: Real>(
    rho: &DensityMatrix<T>,
    params: MeasureParams<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let a = params.alpha();
    Ok((frac_power(rho, a)?, frac_power(rho, T::one() - a)?))
}

/// One MWYD term `tr(rho K^dag K) - tr(rho^a K rho^(1-a) K^dag)` with the
/// powers supplied by the caller.
fn mwyd_term<T: Real>(
    rho: &DensityMatrix<T>,
    ra: &ComplexMatrix<T>,
    r1a: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
) -> Result<C<T>> {
    let kd = k.adjoint();
    let first = trace_prod(rho.matrix(), &(&kd * k))?;
    let cross = trace_prod(&(ra * k), &(r1a * &kd))?;
    Ok(first - cross)
}

/// One GWYD term, the four-trace expansion of
/// `-1/2 tr([rho^a, K][rho^(1-a), K^dag])`.
fn gwyd_term<T: Real>(
    rho: &DensityMatrix<T>,
    ra: &ComplexMatrix<T>,
    r1a: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
) -> Result<C<T>> {
    let kd = k.adjoint();
    let t1 = trace_prod(rho.matrix(), &(k * &kd))?;
    let t2 = trace_prod(rho.matrix(), &(&kd * k))?;
    let t3 = trace_prod(&(ra * k), &(r1a * &kd))?;
    let t4 = trace_prod(&(ra * &kd), &(r1a * k))?;
    Ok((t1 + t2 - t3 - t4) * crate::scalar::cre(T::of(0.5)))
}

/// Modified WYD skew information of a single operator,
/// `T_a(rho, K) = tr(rho K^dag K) - tr(rho^a K rho^(1-a) K^dag)`.
///
/// May be negative for non-Hermitian `K` (see module docs).
pub fn mwyd_skew<T: Real>(
    rho: &DensityMatrix<T>,
    k: &ComplexMatrix<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_operator_dim(rho, k)?;
    let (ra, r1a) = power_pair(rho, params)?;
    real_scalar(mwyd_term(rho, &ra, &r1a, k)?)
}

/// Generalized WYD skew information of a single operator,
/// `I_a(rho, K) = -1/2 tr([rho^a, K][rho^(1-a), K^dag])`.
///
/// Nonnegative for every operator; equals [`mwyd_skew`] for Hermitian `K`.
pub fn gwyd_skew<T: Real>(
    rho: &DensityMatrix<T>,
    k: &ComplexMatrix<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_operator_dim(rho, k)?;
    let (ra, r1a) = power_pair(rho, params)?;
    real_scalar(gwyd_term(rho, &ra, &r1a, k)?)
}

fn check_map_dim<T: Real>(rho: &DensityMatrix<T>, phi: &KrausMap<T>) -> Result<()> {
    if phi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "map vs state dimension",
            expected: rho.dim(),
            got: phi.dim(),
        });
    }
    Ok(())
}

/// MWYD skew information relative to a Kraus map,
/// `T_a(rho, Phi) = sum_i T_a(rho, K_i)`.
///
/// When `phi` is trace preserving (within the construction tolerance), the
/// closed form `1 - tr(rho^a Phi(rho^(1-a)))` is evaluated as well and the
/// two routes must agree within `1e-10`; disagreement signals an internal
/// inconsistency and is returned as [`Error::FormDisagreement`].
pub fn mwyd_channel<T: Real>(
    rho: &DensityMatrix<T>,
    phi: &KrausMap<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_map_dim(rho, phi)?;
    let (ra, r1a) = power_pair(rho, params)?;
    // Kraus-sum form; sum_i tr(rho K_i^dag K_i) collapses onto the cached
    // completeness sum.
    let first = trace_prod(rho.matrix(), phi.weight())?;
    let mut cross: C<T> = crate::scalar::czero();
    for k in phi.ops() {
        cross += trace_prod(&(&ra * k), &(&r1a * &k.adjoint()))?;
    }
    let kraus_value = real_scalar(first - cross)?;

    if phi.completeness_deviation() <= crate::scalar::strict_tol::<T>() {
        let closed = T::one() - real_scalar(trace_prod(&ra, &phi.apply(&r1a)?)?)?;
        let delta = (kraus_value - closed).abs();
        if delta > scaled_tol::<T>(FORM_TOL) {
            return Err(Error::FormDisagreement {
                delta: delta.as_f64(),
            });
        }
    }
    Ok(kraus_value)
}

/// GWYD skew information relative to a Kraus map,
/// `I_a(rho, Phi) = sum_i I_a(rho, K_i)`.
pub fn gwyd_channel<T: Real>(
    rho: &DensityMatrix<T>,
    phi: &KrausMap<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_map_dim(rho, phi)?;
    let (ra, r1a) = power_pair(rho, params)?;
    let mut acc: C<T> = crate::scalar::czero();
    for k in phi.ops() {
        acc += gwyd_term(rho, &ra, &r1a, k)?;
    }
    real_scalar(acc)
}

fn check_channel_matches_a<T: Real>(
    state: &BipartiteState<T>,
    phi_a: &QuantumChannel<T>,
) -> Result<()> {
    if phi_a.dim() != state.dim_a() {
        return Err(Error::DimensionMismatch {
            context: "channel vs subsystem A dimension",
            expected: state.dim_a(),
            got: phi_a.dim(),
        });
    }
    Ok(())
}

fn guard_nonnegative<T: Real>(value: T) -> Result<T> {
    if value < -scaled_tol::<T>(NEGATIVITY_TOL) {
        return Err(Error::NegativeCorrelation {
            value: value.as_f64(),
        });
    }
    Ok(value)
}

/// Correlation of a bipartite state relative to a channel on `A`, measured
/// by the MWYD skew information:
/// `corr_t = T_a(rho_AB, Phi_A (x) Id_B) - T_a(rho_A, Phi_A)`.
///
/// Nonnegative up to rounding; values below `-1e-9` are reported as
/// [`Error::NegativeCorrelation`] since they can only arise from a fault.
pub fn corr_t<T: Real>(
    state: &BipartiteState<T>,
    phi_a: &QuantumChannel<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_channel_matches_a(state, phi_a)?;
    let lifted = phi_a.lift_left(state.dim_b())?;
    let global = mwyd_channel(state.state(), &lifted, params)?;
    let local = mwyd_channel(&state.reduced_a()?, phi_a, params)?;
    guard_nonnegative(global - local)
}

/// Correlation measured by the GWYD skew information:
/// `corr_i = I_a(rho_AB, Phi_A (x) Id_B) - I_a(rho_A, Phi_A)`.
///
/// Coincides with [`corr_t`] identically at `alpha = 1/2`.
pub fn corr_i<T: Real>(
    state: &BipartiteState<T>,
    phi_a: &QuantumChannel<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    check_channel_matches_a(state, phi_a)?;
    let lifted = phi_a.lift_left(state.dim_b())?;
    let global = gwyd_channel(state.state(), &lifted, params)?;
    let local = gwyd_channel(&state.reduced_a()?, phi_a, params)?;
    guard_nonnegative(global - local)
}

/// MWYD skew information relative to a projective measurement, by the
/// diagonal formula
/// `T_a(rho, Pi) = 1 - sum_i <u_i|rho^(1-a)|u_i><u_i|rho^a|u_i>`.
///
/// Equals `mwyd_channel(rho, projective_channel(basis), params)` (and the
/// GWYD value, which coincides for projective families) within `1e-10`.
pub fn projective_skew<T: Real>(
    rho: &DensityMatrix<T>,
    basis: &MeasurementBasis<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    if basis.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "basis vs state dimension",
            expected: rho.dim(),
            got: basis.dim(),
        });
    }
    let (ra, r1a) = power_pair(rho, params)?;
    let u = basis.vectors();
    let n = rho.dim();
    let mut acc: C<T> = crate::scalar::czero();
    for i in 0..n {
        let col = u.column(i);
        // <u_i| M |u_i> for both powers.
        let mut da: C<T> = crate::scalar::czero();
        let mut d1a: C<T> = crate::scalar::czero();
        for r in 0..n {
            for c in 0..n {
                let w = col[r].conj() * col[c];
                da += w * ra[(r, c)];
                d1a += w * r1a[(r, c)];
            }
        }
        acc += da * d1a;
    }
    real_scalar(crate::scalar::cone::<T>() - acc)
}

/// Closed form of the correlation relative to the uniform (twirling) average
/// over unitary channels on `A`, which coincides with the correlation
/// relative to the completely depolarizing channel:
///
/// `(1/d_A) [ tr(rho_A^a) tr(rho_A^(1-a))
///            - tr( tr_A(rho_AB^a) tr_A(rho_AB^(1-a)) ) ]`.
pub fn twirl_corr_closed<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
) -> Result<T> {
    let a = params.alpha();
    let rho_a = state.reduced_a()?;
    // tr(rho_A^t) directly from the spectrum.
    let power_trace = |t: T| -> T {
        rho_a
            .eigenvalues()
            .iter()
            .map(|&lam| {
                if lam > T::zero() {
                    lam.powf(t)
                } else {
                    T::zero()
                }
            })
            .sum()
    };
    let term1 = power_trace(a) * power_trace(T::one() - a);

    let ga = frac_power(state.state(), a)?;
    let g1a = frac_power(state.state(), T::one() - a)?;
    let (da, db) = (state.dim_a(), state.dim_b());
    let ga_b = crate::linalg::density::partial_trace_op(&ga, da, db, Subsystem::B)?;
    let g1a_b = crate::linalg::density::partial_trace_op(&g1a, da, db, Subsystem::B)?;
    let term2 = real_scalar(trace_prod(&ga_b, &g1a_b)?)?;

    Ok((term1 - term2) / T::from_usize(da).unwrap())
}

/// The worked-example two-qubit state: the rank-one projector onto
/// `(|00> + |01> - |10>) / sqrt(3)`, written out with exact `+/-1/3` entries.
pub fn example1_state<T: Real>() -> BipartiteState<T> {
    let third = T::of(1.0 / 3.0);
    let signs: [[f64; 4]; 4] = [
        [1.0, 1.0, -1.0, 0.0],
        [1.0, 1.0, -1.0, 0.0],
        [-1.0, -1.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ];
    let m = ComplexMatrix::from_fn(4, 4, |i, j| crate::scalar::cre(T::of(signs[i][j]) * third));
    BipartiteState::from_matrix(2, 2, m).expect("fixed example state is valid")
}

/// Reference closed form for `corr_t` of [`example1_state`] under amplitude
/// damping, transcribed verbatim from its published source.
///
/// CAVEAT: the printed formula is inconsistent with the defining
/// computation. At `p = 0` (identity channel) it evaluates to `4/45`
/// although the measure is identically zero there, and across the `(p,
/// alpha)` plane it disagrees with [`corr_t`] evaluated directly. It is
/// provided for comparison output only and is never used as an oracle;
/// see `example1_closed_d` for the companion formula, which does match.
pub fn example1_closed_dt<T: Real>(p: T, alpha: T) -> T {
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let four = T::of(4.0);
    let six = T::of(6.0);
    let s5 = T::of(5.0).sqrt();
    let q = (one - p).sqrt();
    let a2 = two * alpha;
    let bracket = -four.powf(one + alpha) - six * (three - s5).powf(a2) * (three + s5) * (q - one)
        + six * (s5 - three) * (s5 + three).powf(a2) * (q - one)
        - four.powf(one + alpha) * q
        + p * (three * two.powf(one + a2) - three * (three - s5).powf(a2) * (one + s5)
            + three * (s5 - one) * (three + s5).powf(a2));
    -T::of(1.0 / 45.0) * two.powf(-one - a2) * bracket
}

/// Reference closed form for `corr_i` of [`example1_state`] under amplitude
/// damping, transcribed verbatim from its published source. Unlike
/// [`example1_closed_dt`], this one agrees with the direct computation
/// (within rounding) across the whole `(p, alpha)` plane.
pub fn example1_closed_d<T: Real>(p: T, alpha: T) -> T {
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let four = T::of(4.0);
    let twelve = T::of(12.0);
    let s5 = T::of(5.0).sqrt();
    let q = (one - p).sqrt();
    let a2 = two * alpha;
    let bracket = two.powf(three + a2) - twelve * (three - s5).powf(a2) * (three + s5) * (q - one)
        + twelve * (s5 - three) * (s5 + three).powf(a2) * (q - one)
        - two.powf(three + a2) * q
        + p * (T::of(6.0) * two.powf(one + a2) + three * (three - s5).powf(a2) * (three + s5)
            - three * (s5 - three) * (three + s5).powf(a2));
    T::of(1.0 / 45.0) * four.powf(-one - alpha) * bracket
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        amplitude_damping, depolarizing_channel, projective_channel, unitary_channel,
    };
    use crate::linalg::matrix::kron;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn mp(alpha: f64) -> MeasureParams<f64> {
        MeasureParams::new(alpha).unwrap()
    }

    fn diag_qubit() -> DensityMatrix<f64> {
        DensityMatrix::new(ComplexMatrix::real_diag(&[0.75, 0.25])).unwrap()
    }

    fn sigma_x() -> ComplexMatrix<f64> {
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn sigma_z() -> ComplexMatrix<f64> {
        ComplexMatrix::real_diag(&[1.0, -1.0])
    }

    /// |0><1|: the lowering-type operator of the single-operator negativity
    /// example.
    fn e01() -> ComplexMatrix<f64> {
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn params_require_open_interval() {
        assert!(MeasureParams::new(0.5).is_ok());
        for bad in [0.0, 1.0, -0.2, 1.7] {
            assert!(matches!(
                MeasureParams::new(bad),
                Err(Error::AlphaOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn variance_frozen_values() {
        let rho = diag_qubit();
        // Constants have no variance.
        assert!(variance(&rho, &ComplexMatrix::identity(2)).unwrap().abs() < 1e-15);
        // V(diag(3/4,1/4), sigma_z) = 1 - (1/2)^2 = 3/4.
        assert!((variance(&rho, &sigma_z()).unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn single_operator_frozen_values() {
        let rho = diag_qubit();
        // gwyd(diag(3/4,1/4), sigma_x, 1/2) = 1 - sqrt(3)/2.
        let want = 1.0 - 3.0f64.sqrt() / 2.0;
        assert!((gwyd_skew(&rho, &sigma_x(), mp(0.5)).unwrap() - want).abs() < 1e-12);
        // mwyd(diag(3/4,1/4), |0><1|, 1/2) = 1/4 - sqrt(3)/4 < 0.
        let want = 0.25 - 3.0f64.sqrt() / 4.0;
        assert!((mwyd_skew(&rho, &e01(), mp(0.5)).unwrap() - want).abs() < 1e-12);
        // Identity commutes with everything.
        assert!(
            mwyd_skew(&rho, &ComplexMatrix::identity(2), mp(0.3))
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(
            gwyd_skew(&rho, &ComplexMatrix::identity(2), mp(0.3))
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn hermitian_collapse_and_pure_collapse() {
        let rho = DensityMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![c(0.7, 0.0), c(0.2, 0.1)],
                vec![c(0.2, -0.1), c(0.3, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        for &a in &[0.2, 0.5, 0.8] {
            let g = gwyd_skew(&rho, &sigma_x(), mp(a)).unwrap();
            let m = mwyd_skew(&rho, &sigma_x(), mp(a)).unwrap();
            assert!((g - m).abs() < 1e-12);
        }
        // Pure state: mwyd = variance for arbitrary (non-Hermitian) k.
        let psi = DensityMatrix::from_pure(&[c(0.6, 0.3), c(0.5, -0.2)]).unwrap();
        let k = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.8), c(-0.2, 0.1)],
            vec![c(1.1, 0.0), c(0.4, -0.6)],
        ])
        .unwrap();
        for &a in &[0.15, 0.5, 0.9] {
            let v = variance(&psi, &k).unwrap();
            let t = mwyd_skew(&psi, &k, mp(a)).unwrap();
            assert!((v - t).abs() < 1e-12);
        }
    }

    #[test]
    fn mwyd_channel_frozen_value_and_dual_route() {
        // Independently derived before the build:
        // T_(1/2)(diag(3/4,1/4), AD(1/2)) = (1 - sqrt(3))/8 ~ -0.0915.
        let rho = diag_qubit();
        let ch = amplitude_damping(0.5).unwrap();
        let got = mwyd_channel(&rho, &ch, mp(0.5)).unwrap();
        let want = (1.0 - 3.0f64.sqrt()) / 8.0;
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
    }

    #[test]
    fn mwyd_channel_can_be_negative_for_nonunital_channels() {
        // Documented counterexample to naive nonnegativity at channel level:
        // amplitude damping is non-unital and produces a negative value.
        let got = mwyd_channel(&diag_qubit(), &amplitude_damping(0.5).unwrap(), mp(0.5)).unwrap();
        assert!(got < -0.09);
    }

    #[test]
    fn mwyd_channel_zero_cases() {
        // Identity channel fixes every state.
        let id = unitary_channel(ComplexMatrix::<f64>::identity(2)).unwrap();
        let rho = diag_qubit();
        assert!(mwyd_channel(&rho, &id, mp(0.42)).unwrap().abs() < 1e-12);
        // Maximally mixed input gives 0 for every trace-preserving channel.
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        let ch = amplitude_damping(0.77).unwrap();
        assert!(mwyd_channel(&mixed, &ch, mp(0.3)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gwyd_channel_frozen_value() {
        // gwyd_channel(reduced example-1 state, AD(1/4), 3/4), derived with
        // an independent eigendecomposition oracle before the build.
        let rho_a = example1_state::<f64>().reduced_a().unwrap();
        let ch = amplitude_damping(0.25).unwrap();
        let got = gwyd_channel(&rho_a, &ch, mp(0.75)).unwrap();
        assert!((got - 0.0200124314209158).abs() < 1e-12);
        // Companion MWYD value on the same inputs (negative: non-unital).
        let got = mwyd_channel(&rho_a, &ch, mp(0.75)).unwrap();
        assert!((got - (-0.0402881350582491)).abs() < 1e-12);
    }

    #[test]
    fn example1_state_structure() {
        let state = example1_state::<f64>();
        let rho = state.state();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let want = ComplexMatrix::from_rows(&[
            vec![c(2.0 / 3.0, 0.0), c(-1.0 / 3.0, 0.0)],
            vec![c(-1.0 / 3.0, 0.0), c(1.0 / 3.0, 0.0)],
        ])
        .unwrap();
        assert!(state.reduced_a().unwrap().matrix().max_abs_diff(&want) < 1e-12);
        // Eigenvalues of the reduced state: (3 +/- sqrt(5))/6.
        let eigs = state.reduced_a().unwrap().eigenvalues().to_vec();
        assert!((eigs[0] - (3.0 - 5.0f64.sqrt()) / 6.0).abs() < 1e-12);
        assert!((eigs[1] - (3.0 + 5.0f64.sqrt()) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn corr_frozen_values() {
        // Independent oracle values for the worked example at p=1/4, a=3/4.
        let state = example1_state::<f64>();
        let ch = amplitude_damping(0.25).unwrap();
        let t = corr_t(&state, &ch, mp(0.75)).unwrap();
        assert!((t - 0.0998324000429428).abs() < 1e-12, "corr_t = {t}");
        let i = corr_i(&state, &ch, mp(0.75)).unwrap();
        assert!((i - 0.0811985002304446).abs() < 1e-12, "corr_i = {i}");
    }

    #[test]
    fn corr_vanishes_on_product_states_and_identity_channel() {
        let rho_a = diag_qubit();
        let rho_b = DensityMatrix::from_pure(&[c(0.8, 0.0), c(0.0, 0.6)]).unwrap();
        let prod = BipartiteState::from_matrix(2, 2, kron(rho_a.matrix(), rho_b.matrix())).unwrap();
        let ch = amplitude_damping(0.3).unwrap();
        assert!(corr_t(&prod, &ch, mp(0.6)).unwrap().abs() < 1e-10);
        assert!(corr_i(&prod, &ch, mp(0.6)).unwrap().abs() < 1e-10);
        // AD(0) is the identity channel: zero correlation even on the
        // entangled example state.
        let state = example1_state::<f64>();
        let id = amplitude_damping(0.0).unwrap();
        assert!(corr_t(&state, &id, mp(0.75)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn corr_t_equals_corr_i_at_one_half() {
        let state = example1_state::<f64>();
        for p in [0.1, 0.25, 0.8] {
            let ch = amplitude_damping(p).unwrap();
            let t = corr_t(&state, &ch, mp(0.5)).unwrap();
            let i = corr_i(&state, &ch, mp(0.5)).unwrap();
            assert!((t - i).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_dimension_must_match_subsystem_a() {
        let state = example1_state::<f64>();
        let ch3 = depolarizing_channel::<f64>(3);
        assert!(matches!(
            corr_t(&state, &ch3, mp(0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projective_skew_frozen_values_and_identity() {
        // |+><+| against the computational basis: 1 - 2 (1/2)(1/2) = 1/2.
        let plus = DensityMatrix::from_pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let basis = MeasurementBasis::computational(2);
        for &a in &[0.2, 0.5, 0.77] {
            assert!((projective_skew(&plus, &basis, mp(a)).unwrap() - 0.5).abs() < 1e-12);
        }
        // Diagonal states are fixed points.
        assert!(
            projective_skew(&diag_qubit(), &basis, mp(0.4))
                .unwrap()
                .abs()
                < 1e-12
        );
        // Equality with both channel evaluations on a non-trivial state.
        let rho = DensityMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![c(0.55, 0.0), c(0.15, -0.25)],
                vec![c(0.15, 0.25), c(0.45, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let ch = projective_channel(&basis);
        for &a in &[0.3, 0.5, 0.9] {
            let direct = projective_skew(&rho, &basis, mp(a)).unwrap();
            let via_mwyd = mwyd_channel(&rho, &ch, mp(a)).unwrap();
            let via_gwyd = gwyd_channel(&rho, &ch, mp(a)).unwrap();
            assert!((direct - via_mwyd).abs() < 1e-10);
            assert!((direct - via_gwyd).abs() < 1e-10);
        }
    }

    #[test]
    fn twirl_closed_form_bell_constant() {
        // Bell state: 3/4 for every alpha.
        let s = 1.0 / 2.0f64.sqrt();
        let bell = BipartiteState::from_matrix(
            2,
            2,
            ComplexMatrix::outer(
                &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
                &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
            ),
        )
        .unwrap();
        for &a in &[0.1, 0.5, 0.9] {
            assert!((twirl_corr_closed(&bell, mp(a)).unwrap() - 0.75).abs() < 1e-12);
        }
        // Product states carry no correlation.
        let prod =
            BipartiteState::from_matrix(2, 2, kron(diag_qubit().matrix(), diag_qubit().matrix()))
                .unwrap();
        assert!(twirl_corr_closed(&prod, mp(0.37)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn twirl_matches_depolarizing_correlation() {
        let state = example1_state::<f64>();
        let dep = depolarizing_channel::<f64>(2);
        for &a in &[0.25, 0.5, 0.75] {
            let closed = twirl_corr_closed(&state, mp(a)).unwrap();
            let direct = corr_t(&state, &dep, mp(a)).unwrap();
            assert!((closed - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn reference_formulas_frozen_values() {
        // The corr_i closed form matches the engine...
        let d = example1_closed_d(0.25f64, 0.75);
        assert!((d - 0.0811985002304452).abs() < 1e-13);
        // ...while the corr_t closed form reproduces its printed value,
        // which disagrees with the defining computation (documented caveat):
        // at p = 0 it gives 4/45 instead of the forced 0,
        for a in [0.3f64, 0.5, 0.7] {
            assert!((example1_closed_dt(0.0, a) - 4.0 / 45.0).abs() < 1e-12);
        }
        // and at (p, a) = (1/4, 3/4) it sits nowhere near corr_t's 0.0998.
        assert!((example1_closed_dt(0.25f64, 0.75) - (-0.0109435111540545)).abs() < 1e-13);
    }

    #[test]
    fn reference_formula_d_tracks_engine_across_plane() {
        let state = example1_state::<f64>();
        for p in [0.0, 0.2, 0.5, 0.9] {
            let ch = amplitude_damping(p).unwrap();
            for a in [0.2, 0.5, 0.8] {
                let engine = corr_i(&state, &ch, mp(a)).unwrap();
                let formula = example1_closed_d(p, a);
                assert!(
                    (engine - formula).abs() < 1e-10,
                    "p={p} a={a}: engine {engine} vs formula {formula}"
                );
            }
        }
    }

    #[test]
    fn imaginary_residue_detection() {
        // Feeding real_scalar a visibly complex number trips the guard.
        assert!(matches!(
            real_scalar(c(1.0, 1e-3)),
            Err(Error::ImaginaryResidue { .. })
        ));
        assert!(real_scalar(c(1.0, 1e-12)).is_ok());
    }

    #[test]
    fn linearity_of_mwyd_channel_in_the_map() {
        use crate::channels::positive_mix;
        let rho = DensityMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![c(0.6, 0.0), c(0.1, 0.05)],
                vec![c(0.1, -0.05), c(0.4, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let p1 = amplitude_damping(0.3).unwrap();
        let p2 = amplitude_damping(0.8).unwrap();
        let mixed = positive_mix(&[0.4, 1.3], &[p1.as_map().clone(), p2.as_map().clone()]).unwrap();
        let a = mp(0.65);
        let lhs = mwyd_channel(&rho, &mixed, a).unwrap();
        let rhs =
            0.4 * mwyd_channel(&rho, &p1, a).unwrap() + 1.3 * mwyd_channel(&rho, &p2, a).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn unitary_covariance_of_mwyd_channel() {
        // mwyd(U rho U^dag, Phi) = mwyd(rho, U^dag Phi U).
        let rho = diag_qubit();
        let t = 0.9f64;
        let u = ComplexMatrix::from_rows(&[
            vec![c(t.cos(), 0.0), c(-t.sin(), 0.0)],
            vec![c(t.sin(), 0.0), c(t.cos(), 0.0)],
        ])
        .unwrap();
        let rotated = DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint()).unwrap();
        let ch = amplitude_damping(0.45).unwrap();
        let conj = ch.conjugated_by(&u).unwrap();
        let a = mp(0.33);
        let lhs = mwyd_channel(&rotated, &ch, a).unwrap();
        let rhs = mwyd_channel(&rho, &conj, a).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
