//! Optimization of the correlation measures over von Neumann measurements
//! and unitary channels on subsystem `A`.
//!
//! The search space is the unitary group, parameterized as `U = exp(iH(a))`
//! with `H` the Hermitian matrix assembled from `d^2` real parameters
//! (see [`UnitaryParams`]). Objectives are smooth but non-convex, so every
//! entry point runs a multi-start simplex (Nelder-Mead) search: the first
//! restart at `a = 0` (the computational basis, which is often the
//! classical optimum), the rest from seeded uniform draws on
//! `[-pi, pi]^(d^2)`. Results are labelled best-found: global optimality is
//! not certified, and callers that need certainty should cross-check
//! against grids or closed forms.

use crate::channels::{projective_channel, unitary_channel, MeasurementBasis};
use crate::error::{Error, Result};
use crate::linalg::density::BipartiteState;
use crate::linalg::eig::{eig_hermitian, exp_i_hermitian};
use crate::linalg::matrix::ComplexMatrix;
use crate::measures::{corr_t, mwyd_channel, MeasureParams};
use crate::sampling::SeededRng;
use crate::scalar::{cre, strict_tol, Real, C};
use rand::Rng;

/// Eigenvalues of the `A`-marginal closer than this are treated as one
/// degenerate block by [`min_nondisturbing_max`]; the admissible-measurement
/// set changes discontinuously at exact degeneracy, and the threshold makes
/// the behavior defined.
const DEGENERACY_TOL: f64 = 1e-8;

/// Residual above which a unitary logarithm attempt is rejected.
const LOG_RESIDUAL_TOL: f64 = 1e-8;

/// A point in the unitary-group search space: `d^2` real parameters
/// assembling the Hermitian generator `H` of `U = exp(iH)`.
///
/// Layout of `theta`: entries `0..d` are the diagonal of `H`; after that,
/// each strictly-upper pair `(j, k)` with `j < k` in lexicographic order
/// contributes `(re, im)` of `H[j][k]` (the lower triangle follows by
/// conjugation).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams<T: Real> {
    dim: usize,
    theta: Vec<T>,
}

impl<T: Real> UnitaryParams<T> {
    pub fn new(dim: usize, theta: Vec<T>) -> Result<Self> {
        if theta.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "unitary parameter count",
                expected: dim * dim,
                got: theta.len(),
            });
        }
        Ok(UnitaryParams { dim, theta })
    }

    /// The origin of the search space; reconstructs the identity.
    pub fn zeros(dim: usize) -> Self {
        UnitaryParams {
            dim,
            theta: vec![T::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }
}

/// Assembles the Hermitian generator from its parameter vector.
fn hermitian_from_theta<T: Real>(dim: usize, theta: &[T]) -> ComplexMatrix<T> {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = cre(theta[i]);
    }
    let mut idx = dim;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let z = C::new(theta[idx], theta[idx + 1]);
            idx += 2;
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
        }
    }
    h
}

/// Reconstructs `U = exp(iH(theta))`. Always unitary (up to eigensolver
/// accuracy) because the generator is Hermitian by construction.
pub fn unitary_from_params<T: Real>(p: &UnitaryParams<T>) -> ComplexMatrix<T> {
    let h = hermitian_from_theta(p.dim, &p.theta);
    exp_i_hermitian(&h, strict_tol::<T>()).expect("generator is Hermitian by construction")
}

/// The von Neumann measurement whose projectors are the columns of `u`.
pub fn basis_from_unitary<T: Real>(u: &ComplexMatrix<T>) -> Result<MeasurementBasis<T>> {
    MeasurementBasis::from_unitary(u.clone())
}

/// Inverts [`unitary_from_params`]: finds parameters whose reconstruction
/// matches `u` within `1e-8`.
///
/// The generator is recovered through the commuting Hermitian pair
/// `C = (U + U^dag)/2 = cos H` and `S = (U - U^dag)/(2i) = sin H`: a trial
/// combination `C + tS` is eigendecomposed, the phases `atan2(s_k, c_k)`
/// of the simultaneously diagonalized pair give the spectrum of `H`, and
/// the reconstruction residual certifies the result. Trials with degenerate
/// combinations fail the residual check and fall through to the next `t`;
/// if all trials fail, [`Error::UnitaryLogFailed`] reports the best
/// residual seen.
pub fn params_from_unitary<T: Real>(u: &ComplexMatrix<T>) -> Result<UnitaryParams<T>> {
    let dim = u.square_dim()?;
    let dev = u.unitarity_deviation()?;
    if dev > T::of(1e-8) {
        return Err(Error::NotUnitary {
            deviation: dev.as_f64(),
        });
    }
    let ud = u.adjoint();
    let c = (u + &ud).scale(cre(T::of(0.5)));
    let s = (u - &ud).scale(C::new(T::zero(), -T::of(0.5)));
    let mut best_residual = f64::INFINITY;
    // Irrational trial weights: a degenerate combination for every one of
    // them would require eigenvalue collisions on a measure-zero set.
    for &t in &[
        0.0,
        0.381_966,
        0.718_281_8,
        std::f64::consts::SQRT_2,
        2.236_068,
    ] {
        let m = &c + &s.scale(cre(T::of(t)));
        let eig = match eig_hermitian(&m.hermitize(), strict_tol::<T>()) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let v = &eig.eigenvectors;
        let n = dim;
        // Diagonal elements of C and S in the candidate common eigenbasis.
        let mut phases = vec![T::zero(); n];
        for (k, phase) in phases.iter_mut().enumerate() {
            let col = v.column(k);
            let mut ck: C<T> = crate::scalar::czero();
            let mut sk: C<T> = crate::scalar::czero();
            for r in 0..n {
                for q in 0..n {
                    let w = col[r].conj() * col[q];
                    ck += w * c[(r, q)];
                    sk += w * s[(r, q)];
                }
            }
            *phase = sk.re.atan2(ck.re);
        }
        let h = {
            let d = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    cre(phases[i])
                } else {
                    crate::scalar::czero()
                }
            });
            (&(v * &d) * &v.adjoint()).hermitize()
        };
        let rebuilt = exp_i_hermitian(&h, strict_tol::<T>())
            .expect("projected generator is Hermitian by construction");
        let residual = rebuilt.max_abs_diff(u).as_f64();
        if residual < best_residual {
            best_residual = residual;
        }
        if residual <= LOG_RESIDUAL_TOL {
            let mut theta = Vec::with_capacity(n * n);
            for i in 0..n {
                theta.push(h[(i, i)].re);
            }
            for j in 0..n {
                for k in (j + 1)..n {
                    theta.push(h[(j, k)].re);
                    theta.push(h[(j, k)].im);
                }
            }
            return UnitaryParams::new(n, theta);
        }
    }
    Err(Error::UnitaryLogFailed {
        residual: best_residual,
    })
}

/// Search budget for the multi-start optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptBudget<T> {
    /// Independent local searches; the first starts at the origin.
    pub restarts: usize,
    /// Objective-evaluation cap per restart.
    pub max_evals: usize,
    /// Local convergence: simplex diameter below this.
    pub tol: T,
    /// Seeds the restart starting points.
    pub seed: u64,
}

impl<T: Real> Default for OptBudget<T> {
    fn default() -> Self {
        OptBudget {
            restarts: 32,
            max_evals: 2000,
            tol: T::of(1e-9),
            seed: 0,
        }
    }
}

/// Outcome of an optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult<T: Real> {
    /// Best objective value found; re-evaluating at the reported parameters
    /// reproduces it within `1e-9`.
    pub value: T,
    pub argmin_or_argmax: UnitaryParams<T>,
    pub restarts_used: usize,
    /// Whether the restart that produced `value` met the simplex-diameter
    /// tolerance within its evaluation budget.
    pub converged: bool,
    /// Cumulative best value after each restart, for monotonicity checks.
    pub trace: Vec<(usize, T)>,
}

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    Minimize,
    Maximize,
}

/// One Nelder-Mead local search (reflection 1, expansion 2, contraction
/// 1/2, shrink 1/2), minimizing. Returns the best vertex, its value,
/// whether the simplex diameter fell below `tol`, and objective errors
/// verbatim.
fn nelder_mead<T: Real>(
    f: &mut dyn FnMut(&[T]) -> Result<T>,
    x0: &[T],
    step: T,
    max_evals: usize,
    tol: T,
) -> Result<(Vec<T>, T, bool)> {
    let n = x0.len();
    let mut verts: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    verts.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        verts.push(v);
    }
    let mut vals = Vec::with_capacity(n + 1);
    let mut evals = 0usize;
    for v in &verts {
        vals.push(f(v)?);
        evals += 1;
        if evals >= max_evals {
            break;
        }
    }
    // If the budget could not even seed the simplex, report the best corner.
    while vals.len() < verts.len() {
        verts.pop();
    }
    if verts.is_empty() {
        return Err(Error::OptimizerNoConvergence);
    }

    let diameter = |verts: &[Vec<T>], best: usize| -> T {
        let mut d = T::zero();
        for v in verts {
            for i in 0..n {
                d = d.max((v[i] - verts[best][i]).abs());
            }
        }
        d
    };

    let mut converged = false;
    while evals < max_evals && verts.len() == n + 1 {
        // Order: best, ..., worst.
        let mut order: Vec<usize> = (0..verts.len()).collect();
        order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).expect("objective is finite"));
        let (best, second_worst, worst) = (order[0], order[n - 1], order[n]);
        if diameter(&verts, best) < tol {
            converged = true;
            break;
        }
        // Centroid of all but the worst vertex.
        let mut centroid = vec![T::zero(); n];
        for &i in order.iter().take(n) {
            for (ck, &vk) in centroid.iter_mut().zip(&verts[i]) {
                *ck += vk;
            }
        }
        let inv = T::one() / T::from_usize(n).unwrap();
        for ck in &mut centroid {
            *ck *= inv;
        }

        let blend = |a: &[T], b: &[T], w: T| -> Vec<T> {
            (0..n).map(|k| a[k] + (a[k] - b[k]) * w).collect()
        };
        let reflected = blend(&centroid, &verts[worst], T::one());
        let fr = f(&reflected)?;
        evals += 1;
        if fr < vals[best] {
            // Try stretching further in the same direction.
            if evals < max_evals {
                let expanded = blend(&centroid, &verts[worst], T::of(2.0));
                let fe = f(&expanded)?;
                evals += 1;
                if fe < fr {
                    verts[worst] = expanded;
                    vals[worst] = fe;
                    continue;
                }
            }
            verts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        if fr < vals[second_worst] {
            verts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        if evals >= max_evals {
            break;
        }
        // Contract toward the centroid, outside or inside of it.
        let contracted = if fr < vals[worst] {
            blend(&centroid, &verts[worst], T::of(0.5))
        } else {
            blend(&centroid, &verts[worst], -T::of(0.5))
        };
        let fc = f(&contracted)?;
        evals += 1;
        if fc < vals[worst].min(fr) {
            verts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        // Shrink everything toward the best vertex. A vertex only moves if
        // the budget allows re-evaluating it, so reported values always
        // belong to reported positions.
        let anchor = verts[best].clone();
        for &i in order.iter().skip(1) {
            if evals >= max_evals {
                break;
            }
            for (vk, &bk) in verts[i].iter_mut().zip(&anchor) {
                *vk = bk + (*vk - bk) * T::of(0.5);
            }
            vals[i] = f(&verts[i])?;
            evals += 1;
        }
    }

    let mut best = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    Ok((verts[best].clone(), vals[best], converged))
}

/// What [`multi_start`] hands back: best parameters, best value, whether any
/// restart converged, and the per-restart `(index, value)` trace.
type MultiStartOutcome<T> = (Vec<T>, T, bool, Vec<(usize, T)>);

/// Multi-start driver shared by every optimization entry point. Restart
/// starting points are derived by index from the budget seed, so any
/// execution order (or parallel split) sees the same set; the winner is the
/// best value with ties broken by lowest restart index.
fn multi_start<T: Real>(
    n_params: usize,
    goal: Goal,
    budget: &OptBudget<T>,
    f: &mut dyn FnMut(&[T]) -> Result<T>,
) -> Result<MultiStartOutcome<T>> {
    if budget.restarts == 0 || budget.max_evals == 0 {
        return Err(Error::OptimizerNoConvergence);
    }
    let sign = match goal {
        Goal::Minimize => T::one(),
        Goal::Maximize => -T::one(),
    };
    let mut inner = |x: &[T]| -> Result<T> { Ok(sign * f(x)?) };

    let root = SeededRng::new(budget.seed);
    let mut best: Option<(T, Vec<T>, bool)> = None;
    let mut any_converged = false;
    let mut trace = Vec::with_capacity(budget.restarts);
    for i in 0..budget.restarts {
        let x0 = if i == 0 {
            vec![T::zero(); n_params]
        } else {
            let mut rng = root.fork(i as u64);
            (0..n_params)
                .map(|_| T::of(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)))
                .collect()
        };
        let (x, v, conv) = nelder_mead(&mut inner, &x0, T::of(0.5), budget.max_evals, budget.tol)?;
        any_converged |= conv;
        let better = match &best {
            None => true,
            Some((bv, _, _)) => v < *bv,
        };
        if better {
            best = Some((v, x, conv));
        }
        let (bv, _, _) = best.as_ref().expect("set above");
        trace.push((i, sign * *bv));
    }
    let (v, x, conv) = best.expect("restarts > 0");
    if !any_converged {
        return Err(Error::OptimizerNoConvergence);
    }
    Ok((x, sign * v, conv, trace))
}

/// Packages a multi-start outcome over full unitary parameters.
fn run_unitary_search<T: Real>(
    dim: usize,
    goal: Goal,
    budget: &OptBudget<T>,
    f: &mut dyn FnMut(&UnitaryParams<T>) -> Result<T>,
) -> Result<OptResult<T>> {
    let mut obj = |theta: &[T]| -> Result<T> { f(&UnitaryParams::new(dim, theta.to_vec())?) };
    let (theta, value, converged, trace) = multi_start(dim * dim, goal, budget, &mut obj)?;
    Ok(OptResult {
        value,
        argmin_or_argmax: UnitaryParams::new(dim, theta)?,
        restarts_used: budget.restarts,
        converged,
        trace,
    })
}

fn projective_corr_objective<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
) -> impl FnMut(&UnitaryParams<T>) -> Result<T> + '_ {
    move |p: &UnitaryParams<T>| {
        let basis = basis_from_unitary(&unitary_from_params(p))?;
        corr_t(state, &projective_channel(&basis), params)
    }
}

/// Maximal measurement-induced correlation: `max` over von Neumann
/// measurements on `A` of [`corr_t`] relative to the projective channel.
/// Zero exactly on product states.
pub fn max_corr_projective<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
    budget: &OptBudget<T>,
) -> Result<OptResult<T>> {
    let mut f = projective_corr_objective(state, params);
    run_unitary_search(state.dim_a(), Goal::Maximize, budget, &mut f)
}

/// Minimal measurement-induced correlation: `min` over von Neumann
/// measurements on `A`. Zero exactly on classical-quantum states.
pub fn min_corr_projective<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
    budget: &OptBudget<T>,
) -> Result<OptResult<T>> {
    let mut f = projective_corr_objective(state, params);
    run_unitary_search(state.dim_a(), Goal::Minimize, budget, &mut f)
}

/// Geometric discord: `min` over von Neumann measurements on `A` of the
/// GLOBAL skew information alone (no local subtraction), at `alpha = 1/2`.
pub fn geometric_discord<T: Real>(
    state: &BipartiteState<T>,
    budget: &OptBudget<T>,
) -> Result<OptResult<T>> {
    let params = MeasureParams::new(T::of(0.5))?;
    let mut f = |p: &UnitaryParams<T>| -> Result<T> {
        let basis = basis_from_unitary(&unitary_from_params(p))?;
        let lifted = projective_channel(&basis).lift_left(state.dim_b())?;
        mwyd_channel(state.state(), &lifted, params)
    };
    run_unitary_search(state.dim_a(), Goal::Minimize, budget, &mut f)
}

/// Maximal unitary-induced correlation: `max` over unitary channels on `A`
/// of [`corr_t`]. Zero exactly on product states; the minimum over
/// unitaries is always zero (attained at the identity), so only the
/// maximization is exposed.
pub fn max_corr_unitary<T: Real>(
    state: &BipartiteState<T>,
    params: MeasureParams<T>,
    budget: &OptBudget<T>,
) -> Result<OptResult<T>> {
    let mut f = |p: &UnitaryParams<T>| -> Result<T> {
        let ch = unitary_channel(unitary_from_params(p))?;
        corr_t(state, &ch, params)
    };
    run_unitary_search(state.dim_a(), Goal::Maximize, budget, &mut f)
}

/// Splits the ascending eigenvalue list into maximal runs closer than
/// [`DEGENERACY_TOL`]; returns `(start, len)` per block.
fn degenerate_blocks<T: Real>(eigs: &[T]) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=eigs.len() {
        if i == eigs.len() || (eigs[i] - eigs[i - 1]).abs() > T::of(DEGENERACY_TOL) {
            blocks.push((start, i - start));
            start = i;
        }
    }
    blocks
}

/// Maximal skew information over measurements that do NOT disturb the
/// `A`-marginal (`Pi_A(rho_A) = rho_A`), at `alpha = 1/2`: the
/// measurement-induced-nonlocality analog of [`geometric_discord`].
///
/// Non-disturbing measurements are exactly the eigenbases of `rho_A`. With
/// a nondegenerate marginal the eigenbasis is unique (up to phases and
/// relabeling, which do not affect the value), so the objective is
/// evaluated there directly with no search. Degenerate marginals leave
/// rotational freedom inside each eigenvalue block, and the search runs
/// over exactly those block rotations.
pub fn min_nondisturbing_max<T: Real>(
    state: &BipartiteState<T>,
    budget: &OptBudget<T>,
) -> Result<OptResult<T>> {
    let params = MeasureParams::new(T::of(0.5))?;
    let rho_a = state.reduced_a()?;
    let v0 = rho_a.eig().eigenvectors.clone();
    let blocks = degenerate_blocks(rho_a.eigenvalues());
    let global_term = |u: &ComplexMatrix<T>| -> Result<T> {
        let basis = basis_from_unitary(u)?;
        let lifted = projective_channel(&basis).lift_left(state.dim_b())?;
        mwyd_channel(state.state(), &lifted, params)
    };

    if blocks.iter().all(|&(_, len)| len == 1) {
        let value = global_term(&v0)?;
        return Ok(OptResult {
            value,
            argmin_or_argmax: params_from_unitary(&v0)?,
            restarts_used: 0,
            converged: true,
            trace: vec![(0, value)],
        });
    }

    // Parameterize the residual freedom: an independent exp(iH_b) inside
    // each degenerate block, applied on top of the reference eigenbasis.
    let n_params: usize = blocks.iter().map(|&(_, len)| len * len).sum();
    let dim = rho_a.dim();
    let assemble = |x: &[T]| -> ComplexMatrix<T> {
        let mut rot = ComplexMatrix::<T>::zeros(dim, dim);
        let mut offset = 0;
        for &(start, len) in &blocks {
            let h = hermitian_from_theta(len, &x[offset..offset + len * len]);
            offset += len * len;
            let u = exp_i_hermitian(&h, strict_tol::<T>())
                .expect("generator is Hermitian by construction");
            for r in 0..len {
                for c in 0..len {
                    rot[(start + r, start + c)] = u[(r, c)];
                }
            }
        }
        &v0 * &rot
    };
    let mut obj = |x: &[T]| global_term(&assemble(x));
    let (x, value, converged, trace) = multi_start(n_params, Goal::Maximize, budget, &mut obj)?;
    Ok(OptResult {
        value,
        argmin_or_argmax: params_from_unitary(&assemble(&x))?,
        restarts_used: budget.restarts,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::hermitian_operator_basis;
    use crate::linalg::density::DensityMatrix;
    use crate::linalg::matrix::kron;
    use crate::measures::example1_state;
    use crate::sampling::{random_bipartite, random_classical_quantum};

    fn mp(alpha: f64) -> MeasureParams<f64> {
        MeasureParams::new(alpha).unwrap()
    }

    fn bell() -> BipartiteState<f64> {
        let s = 1.0 / 2.0f64.sqrt();
        let v = [
            C::new(s, 0.0),
            C::new(0.0, 0.0),
            C::new(0.0, 0.0),
            C::new(s, 0.0),
        ];
        BipartiteState::from_matrix(2, 2, ComplexMatrix::outer(&v, &v)).unwrap()
    }

    /// Budget sized for unit tests: enough to locate two-qubit optima.
    fn small_budget() -> OptBudget<f64> {
        OptBudget {
            restarts: 8,
            max_evals: 1200,
            tol: 1e-9,
            seed: 7,
        }
    }

    #[test]
    fn params_roundtrip_through_generator() {
        let p = UnitaryParams::new(2, vec![0.3, -1.2, 0.7, 0.4]).unwrap();
        let u = unitary_from_params(&p);
        assert!(u.unitarity_deviation().unwrap() < 1e-12);
        // theta = 0 is the identity.
        let id = unitary_from_params(&UnitaryParams::<f64>::zeros(3));
        assert!(id.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        // Wrong parameter count is rejected.
        assert!(UnitaryParams::<f64>::new(2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn known_two_by_two_exponential() {
        // H = (pi/2) sigma_x: exp(iH) = i sigma_x.
        let p = UnitaryParams::new(2, vec![0.0, 0.0, std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
        let u = unitary_from_params(&p);
        let want = ComplexMatrix::from_rows(&[
            vec![C::new(0.0, 0.0), C::new(0.0, 1.0)],
            vec![C::new(0.0, 1.0), C::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(u.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn unitary_log_roundtrips() {
        let mut rng = SeededRng::new(5);
        for d in [2usize, 3, 4] {
            for _ in 0..10 {
                let u = crate::sampling::haar_unitary::<f64>(d, &mut rng);
                let p = params_from_unitary(&u).unwrap();
                assert!(unitary_from_params(&p).max_abs_diff(&u) < 1e-8, "d = {d}");
            }
        }
        // Identity and a diagonal-phase case.
        let p = params_from_unitary(&ComplexMatrix::<f64>::identity(3)).unwrap();
        assert!(unitary_from_params(&p).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
        // Non-unitary input is rejected.
        let bad = ComplexMatrix::<f64>::real_diag(&[1.0, 2.0]);
        assert!(matches!(
            params_from_unitary(&bad),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn basis_from_unitary_matches_columns() {
        let basis = basis_from_unitary(&ComplexMatrix::<f64>::identity(3)).unwrap();
        for i in 0..3 {
            let proj = basis.projector(i);
            assert!((proj[(i, i)].re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_state_constants() {
        // Every projective objective is constant 1/2 on the Bell state at
        // alpha = 1/2, and the unitary maximum is 1.
        let state = bell();
        let b = small_budget();
        let r = max_corr_projective(&state, mp(0.5), &b).unwrap();
        assert!((r.value - 0.5).abs() < 1e-7, "max proj {}", r.value);
        let r = min_corr_projective(&state, mp(0.5), &b).unwrap();
        assert!((r.value - 0.5).abs() < 1e-7, "min proj {}", r.value);
        let r = geometric_discord(&state, &b).unwrap();
        assert!((r.value - 0.5).abs() < 1e-7, "discord {}", r.value);
        let r = min_nondisturbing_max(&state, &b).unwrap();
        assert!((r.value - 0.5).abs() < 1e-7, "nondisturbing {}", r.value);
        let r = max_corr_unitary(&state, mp(0.5), &b).unwrap();
        assert!((r.value - 1.0).abs() < 1e-7, "max unitary {}", r.value);
    }

    #[test]
    fn example_state_grid_verified_optima() {
        // Frozen against an independent dense grid over 2x2 unitaries.
        let state = example1_state::<f64>();
        let b = small_budget();
        let r = max_corr_projective(&state, mp(0.5), &b).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-6, "max proj {}", r.value);
        let r = min_corr_projective(&state, mp(0.5), &b).unwrap();
        assert!((r.value - 2.0 / 9.0).abs() < 1e-6, "min proj {}", r.value);
        let r = geometric_discord(&state, &b).unwrap();
        assert!((r.value - 2.0 / 9.0).abs() < 1e-6, "discord {}", r.value);
        let r = max_corr_unitary(&state, mp(0.5), &b).unwrap();
        assert!(
            (r.value - 2.0 / 3.0).abs() < 1e-6,
            "max unitary {}",
            r.value
        );
    }

    #[test]
    fn nondegenerate_marginal_evaluates_directly() {
        // The example state's marginal spectrum (3 +/- sqrt(5))/6 is
        // nondegenerate, so no search runs.
        let state = example1_state::<f64>();
        let r = min_nondisturbing_max(&state, &small_budget()).unwrap();
        assert_eq!(r.restarts_used, 0);
        assert!(r.converged);
        assert_eq!(r.trace.len(), 1);
        assert!((r.value - 2.0 / 9.0).abs() < 1e-9, "value {}", r.value);
        // The reported parameters re-evaluate to the reported value.
        let basis = basis_from_unitary(&unitary_from_params(&r.argmin_or_argmax)).unwrap();
        let lifted = projective_channel(&basis).lift_left(2).unwrap();
        let again = mwyd_channel(state.state(), &lifted, mp(0.5)).unwrap();
        assert!((again - r.value).abs() < 1e-9);
    }

    #[test]
    fn classical_quantum_minima_vanish() {
        let mut rng = SeededRng::new(12);
        let state = random_classical_quantum::<f64>(2, 2, &mut rng);
        let b = small_budget();
        let r = min_corr_projective(&state, mp(0.5), &b).unwrap();
        assert!(r.value.abs() < 1e-6, "min proj {}", r.value);
        let r = geometric_discord(&state, &b).unwrap();
        assert!(r.value.abs() < 1e-6, "discord {}", r.value);
        // Its A-marginal is diagonal and (generically) nondegenerate: the
        // non-disturbing maximum is the classical basis, fixing the state.
        let r = min_nondisturbing_max(&state, &b).unwrap();
        assert!(r.value.abs() < 1e-9, "nondisturbing {}", r.value);
    }

    #[test]
    fn product_states_yield_zero_everywhere() {
        let rho_a = DensityMatrix::new(ComplexMatrix::real_diag(&[0.7, 0.3])).unwrap();
        let rho_b = DensityMatrix::new(ComplexMatrix::real_diag(&[0.6, 0.4])).unwrap();
        let prod = BipartiteState::from_matrix(2, 2, kron(rho_a.matrix(), rho_b.matrix())).unwrap();
        let b = small_budget();
        assert!(max_corr_projective(&prod, mp(0.4), &b).unwrap().value.abs() < 1e-6);
        assert!(max_corr_unitary(&prod, mp(0.4), &b).unwrap().value.abs() < 1e-6);
        assert!(min_nondisturbing_max(&prod, &b).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn results_reevaluate_and_traces_are_monotone() {
        let state = random_bipartite::<f64>(2, 2, 3, &mut SeededRng::new(3)).unwrap();
        let b = small_budget();
        let params = mp(0.5);
        let r = max_corr_projective(&state, params, &b).unwrap();
        // Re-evaluate the objective at the reported argmax.
        let basis = basis_from_unitary(&unitary_from_params(&r.argmin_or_argmax)).unwrap();
        let again = corr_t(&state, &projective_channel(&basis), params).unwrap();
        assert!((again - r.value).abs() < 1e-9);
        assert_eq!(r.restarts_used, b.restarts);
        // Maximization trace never decreases.
        for w in r.trace.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-15);
        }
        let r = min_corr_projective(&state, params, &b).unwrap();
        for w in r.trace.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-15);
        }
        // max >= min on the same instance.
        let hi = max_corr_projective(&state, params, &b).unwrap().value;
        let lo = min_corr_projective(&state, params, &b).unwrap().value;
        assert!(hi >= lo - 1e-9);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let state = random_bipartite::<f64>(2, 2, 4, &mut SeededRng::new(8)).unwrap();
        let b = small_budget();
        let r1 = max_corr_unitary(&state, mp(0.5), &b).unwrap();
        let r2 = max_corr_unitary(&state, mp(0.5), &b).unwrap();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.argmin_or_argmax, r2.argmin_or_argmax);
    }

    #[test]
    fn zero_budget_is_an_error() {
        let state = bell();
        let b = OptBudget {
            restarts: 0,
            ..small_budget()
        };
        assert!(matches!(
            geometric_discord(&state, &b),
            Err(Error::OptimizerNoConvergence)
        ));
    }

    #[test]
    fn hermitian_basis_dimension_sanity() {
        // The parameter count d^2 matches the real dimension of the
        // Hermitian generators used by the search.
        for d in [2usize, 3] {
            assert_eq!(hermitian_operator_basis::<f64>(d).len(), d * d);
        }
    }
}
