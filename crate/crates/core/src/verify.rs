//! Randomized property-verification suite: every structural claim about the
//! measures, channels, sampling, and optimizer layers, checked mechanically
//! on seeded random ensembles.
//!
//! The suite is fully deterministic: property `k` draws its instances from
//! `fork(seed, k)`, instance `j` from a further `fork(j)`, so a failure
//! report pinpoints a reproducible instance seed. [`SuiteReport::render`]
//! is byte-stable across runs with the same configuration.
//!
//! Two properties are EXPECTED to fail on the default ensemble, and the
//! suite reports them honestly rather than weakening the checks:
//!
//! * `channel-skew-in-unit-interval` asserts `0 <= mwyd_channel(rho, Phi) <= 1` for every
//!   trace-preserving channel. The lower bound is FALSE for non-unital
//!   channels: `mwyd_channel(diag(3/4, 1/4), amplitude_damping(1/2), 1/2)
//!   = (1 - sqrt(3))/8 ~ -0.0915`. Random channels are generically
//!   non-unital, so a few percent of instances violate the bound.
//! * `interpolation-convexity` asserts the interpolation map
//!   `F(a) = tr(rho^a Phi(rho^(1-a)))` is convex with `F(0) = 1` and
//!   `F(1) <= 1`. Convexity and `F(0) = 1` hold (full-rank states), but
//!   `F(1) = tr(rho Phi(I))` exceeds 1 whenever `Phi` is non-unital and
//!   `Phi(I)` weights the support of `rho` upward.
//!
//! The companion properties `channel-skew-in-unit-interval-unital` and `interpolation-convexity-unital`
//! restrict the same checks to unital channels (random mixtures of unitary
//! conjugations), where both statements are true, and pass.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::Exp1;

use crate::channels::{
    depolarizing_channel, positive_mix, projective_channel, unitary_channel, KrausMap,
    MeasurementBasis, QuantumChannel,
};
use crate::linalg::density::{
    frac_power, partial_trace_op, BipartiteState, DensityMatrix, Subsystem,
};
use crate::linalg::matrix::{kron, trace_prod, ComplexMatrix};
use crate::measures::{
    corr_i, corr_t, gwyd_channel, gwyd_skew, mwyd_channel, mwyd_skew, projective_skew,
    twirl_corr_closed, variance, MeasureParams,
};
use crate::optimize::{
    basis_from_unitary, geometric_discord, max_corr_projective, max_corr_unitary,
    min_corr_projective, unitary_from_params, OptBudget,
};
use crate::sampling::{
    ginibre, haar_unitary, mc_twirl_corr, random_bipartite, random_channel,
    random_classical_quantum, random_density, SeededRng,
};
use crate::scalar::{cre, C};

/// Suite configuration; the defaults match the documented reference run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Instances per property (some cheap/expensive properties cap or scale
    /// this; see the individual property comments).
    pub instances: usize,
    /// Largest subsystem dimension drawn for single-system ensembles;
    /// bipartite ensembles stay within 3 x 3.
    pub max_dim: usize,
    /// Root seed; every instance seed derives from it.
    pub seed: u64,
    /// Tolerance for the measure-level inequalities.
    pub tol: f64,
    /// Sample count for the Monte Carlo properties.
    pub mc_n: usize,
    /// Pins every drawn alpha to a fixed value instead of sampling it
    /// uniformly from [0.05, 0.95].
    pub alpha: Option<f64>,
    /// Appends a deliberately non-trace-preserving instance to
    /// `channel-skew-in-unit-interval` to demonstrate that corrupt input is flagged.
    pub inject_nontp: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            instances: 200,
            max_dim: 4,
            seed: 42,
            tol: 1e-8,
            mc_n: 20000,
            alpha: None,
            inject_nontp: false,
        }
    }
}

/// Outcome of one property over its instance ensemble.
#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Instance seed and violating values of the first failure, if any.
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Aggregate outcome of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: VerifyConfig,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.ok())
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Byte-stable plain-text summary: one line per property, the first
    /// failure in detail, and a final tally.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        writeln!(s, "property-verification suite").unwrap();
        writeln!(
            s,
            "config: instances={} max-dim={} seed={} tol={:e} mc-n={} alpha={} inject-nontp={}",
            c.instances,
            c.max_dim,
            c.seed,
            c.tol,
            c.mc_n,
            c.alpha.map_or("free".into(), |a| a.to_string()),
            c.inject_nontp
        )
        .unwrap();
        for (i, p) in self.properties.iter().enumerate() {
            writeln!(
                s,
                "{:>2}. {:<42} {:>5}/{:<5} {}",
                i + 1,
                p.name,
                p.passed,
                p.total,
                if p.ok() { "pass" } else { "FAIL" }
            )
            .unwrap();
        }
        if let Some(p) = self.properties.iter().find(|p| !p.ok()) {
            writeln!(
                s,
                "first failure: property={} {}",
                p.name,
                p.first_failure.as_deref().unwrap_or("(detail unavailable)")
            )
            .unwrap();
        }
        let ok = self.properties.iter().filter(|p| p.ok()).count();
        writeln!(
            s,
            "result: {}/{} properties passed",
            ok,
            self.properties.len()
        )
        .unwrap();
        s
    }
}

/// Per-instance verdict: `Err` carries the violating values, formatted.
type Check = std::result::Result<(), String>;

/// Adapts library errors into instance failures.
fn ck<V>(r: crate::error::Result<V>) -> std::result::Result<V, String> {
    r.map_err(|e| format!("error: {e}"))
}

fn fail(msg: String) -> Check {
    Err(msg)
}

/// Runs one property: `total` seeded instances through `body`, which
/// receives the instance index, the instance seed, and the instance rng.
fn run_property(
    results: &mut Vec<PropertyResult>,
    root: &SeededRng,
    name: &'static str,
    total: usize,
    mut body: impl FnMut(usize, u64, &mut SeededRng) -> Check,
) {
    let prop_rng = root.fork(results.len() as u64);
    let mut passed = 0;
    let mut first_failure = None;
    for j in 0..total {
        let mut rng = prop_rng.fork(j as u64);
        let instance_seed = rng.seed();
        match body(j, instance_seed, &mut rng) {
            Ok(()) => passed += 1,
            Err(msg) => {
                if first_failure.is_none() {
                    first_failure = Some(format!("instance_seed={instance_seed} {msg}"));
                }
            }
        }
    }
    results.push(PropertyResult {
        name,
        passed,
        total,
        first_failure,
    });
}

// ---- ensemble draws -------------------------------------------------------

fn draw_alpha(rng: &mut SeededRng, pin: Option<f64>) -> f64 {
    pin.unwrap_or_else(|| rng.random_range(0.05..=0.95))
}

fn params(alpha: f64) -> MeasureParams<f64> {
    MeasureParams::new(alpha).expect("drawn alpha is interior")
}

fn draw_dim(rng: &mut SeededRng, max_dim: usize) -> usize {
    rng.random_range(2..=max_dim)
}

/// Random state of random rank 1..=d.
fn draw_state(d: usize, rng: &mut SeededRng) -> DensityMatrix<f64> {
    let rank = rng.random_range(1..=d);
    random_density(d, rank, rng).expect("rank is in range")
}

/// Random bipartite state of random rank, with subsystem dims capped at 3.
fn draw_bipartite(rng: &mut SeededRng, max_dim: usize) -> BipartiteState<f64> {
    let cap = max_dim.min(3);
    let (da, db) = (rng.random_range(2..=cap), rng.random_range(2..=cap));
    let rank = rng.random_range(1..=da * db);
    random_bipartite(da, db, rank, rng).expect("rank is in range")
}

/// Random trace-preserving channel with 1..=d+1 Kraus operators.
fn draw_channel(d: usize, rng: &mut SeededRng) -> QuantumChannel<f64> {
    let kraus = rng.random_range(1..=d + 1);
    random_channel(d, kraus, rng)
}

/// Random UNITAL trace-preserving channel: a positive mixture of 2-3 unitary
/// conjugations (both completeness sums equal the identity exactly).
fn draw_unital_channel(d: usize, rng: &mut SeededRng) -> QuantumChannel<f64> {
    let m = rng.random_range(2..=3usize);
    let raw: Vec<f64> = (0..m).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let coeffs: Vec<f64> = raw.iter().map(|e| e / total).collect();
    let maps: Vec<KrausMap<f64>> = (0..m)
        .map(|_| {
            unitary_channel(haar_unitary::<f64>(d, rng))
                .expect("Haar samples are unitary")
                .as_map()
                .clone()
        })
        .collect();
    QuantumChannel::from_map(positive_mix(&coeffs, &maps).expect("coefficients are positive"))
        .expect("convex mixtures of channels are trace preserving")
}

/// Random probability vector via normalized exponentials.
fn draw_probabilities(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|e| e / total).collect()
}

fn product_state(a: &DensityMatrix<f64>, b: &DensityMatrix<f64>) -> BipartiteState<f64> {
    BipartiteState::from_matrix(a.dim(), b.dim(), kron(a.matrix(), b.matrix()))
        .expect("tensor products of states are states")
}

// ---- the suite ------------------------------------------------------------

/// Runs every property and returns the aggregated report.
pub fn run_suite(config: &VerifyConfig) -> SuiteReport {
    let root = SeededRng::new(config.seed);
    let mut props: Vec<PropertyResult> = Vec::new();
    let n = config.instances;
    let tol = config.tol;
    let max_dim = config.max_dim.max(2);
    let pin = config.alpha;
    // Identity-level checks use the fixed numerical agreement tolerance, not
    // the (looser) inequality tolerance.
    let exact = 1e-10;

    // -- linear algebra substrate -------------------------------------

    run_property(
        &mut props,
        &root,
        "frac-power-identities",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let a = draw_alpha(rng, pin);
            let ra = ck(frac_power(&rho, a))?;
            let r1a = ck(frac_power(&rho, 1.0 - a))?;
            let recombined = &ra * &r1a;
            let d1 = recombined.max_abs_diff(rho.matrix());
            if d1 > exact {
                return fail(format!("rho^a rho^(1-a) != rho: diff={d1:.12e}"));
            }
            let endpoint = ck(frac_power(&rho, 1.0))?.max_abs_diff(rho.matrix());
            if endpoint > exact {
                return fail(format!("rho^1 != rho: diff={endpoint:.12e}"));
            }
            let p = ck(frac_power(&rho, 0.0))?;
            let idem = (&p * &p).max_abs_diff(&p);
            let support = (&p * rho.matrix()).max_abs_diff(rho.matrix());
            if idem > exact || support > exact {
                return fail(format!(
                    "support projector defect: idempotency={idem:.12e} support={support:.12e}"
                ));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "eigensystem-roundtrip",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let h = ginibre::<f64>(d, d, rng).hermitize();
            let eig = ck(crate::linalg::eig::eig_hermitian(&h, 1e-9))?;
            let scale = h.max_abs().max(1.0);
            let recon = eig.reconstruct().max_abs_diff(&h);
            if recon > exact * scale {
                return fail(format!("V L V^dag != H: diff={recon:.12e}"));
            }
            let udev = ck(eig.eigenvectors.unitarity_deviation())?;
            if udev > exact {
                return fail(format!("eigenvector matrix not unitary: dev={udev:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "partial-trace-consistency",
        n,
        |_, _, rng| {
            let cap = max_dim.min(3);
            let (da, db) = (rng.random_range(2..=cap), rng.random_range(2..=cap));
            let rho_a = draw_state(da, rng);
            let rho_b = draw_state(db, rng);
            let prod = product_state(&rho_a, &rho_b);
            let ra = ck(prod.reduced_a())?;
            let rb = ck(prod.reduced_b())?;
            let d1 = ra.matrix().max_abs_diff(rho_a.matrix());
            let d2 = rb.matrix().max_abs_diff(rho_b.matrix());
            if d1 > exact || d2 > exact {
                return fail(format!("product reductions: A={d1:.12e} B={d2:.12e}"));
            }
            // Trace is preserved by reduction on an arbitrary correlated state.
            let state = draw_bipartite(rng, max_dim);
            let tr = ck(state.reduced_a())?.matrix().trace().re;
            if (tr - 1.0).abs() > exact {
                return fail(format!("reduction trace drift: {:.12e}", tr - 1.0));
            }
            Ok(())
        },
    );

    // -- channel layer --------------------------------------------------

    run_property(
        &mut props,
        &root,
        "channel-validity",
        n.min(100),
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let ch = draw_channel(d, rng);
            let dev = ch.completeness_deviation();
            if dev > exact {
                return fail(format!("completeness deviation={dev:.12e}"));
            }
            let rho = draw_state(d, rng);
            let out = ck(ch.apply(rho.matrix()))?;
            let tr = out.trace().re;
            if (tr - 1.0).abs() > exact {
                return fail(format!("output trace={tr:.12e}"));
            }
            ck(DensityMatrix::new(out)).map_err(|e| format!("output not a state: {e}"))?;
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "depolarizing-flattens",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let out = ck(depolarizing_channel::<f64>(d).apply(rho.matrix()))?;
            let want = ComplexMatrix::identity(d).scale(cre(1.0 / d as f64));
            let diff = out.max_abs_diff(&want);
            if diff > exact {
                return fail(format!("output differs from I/d by {diff:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "lift-reduction-commutes",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let (da, db) = (state.dim_a(), state.dim_b());
            let phi = draw_channel(da, rng);
            let lifted_out = ck(ck(phi.lift_left(db))?.apply(state.state().matrix()))?;
            let left = ck(partial_trace_op(&lifted_out, da, db, Subsystem::A))?;
            let right = ck(phi.apply(ck(state.reduced_a())?.matrix()))?;
            let diff = left.max_abs_diff(&right);
            if diff > exact {
                return fail(format!("tr_B (Phi (x) I) != Phi tr_B: diff={diff:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "positive-mix-linearity",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let (c1, c2) = (rng.random_range(0.2..1.5), rng.random_range(0.2..1.5));
            let p1 = draw_channel(d, rng);
            let p2 = draw_channel(d, rng);
            let mix = ck(positive_mix(
                &[c1, c2],
                &[p1.as_map().clone(), p2.as_map().clone()],
            ))?;
            let rho = draw_state(d, rng);
            let lhs = ck(mix.apply(rho.matrix()))?;
            let rhs = &ck(p1.apply(rho.matrix()))?.scale(cre(c1))
                + &ck(p2.apply(rho.matrix()))?.scale(cre(c2));
            let diff = lhs.max_abs_diff(&rhs);
            if diff > exact {
                return fail(format!("mix application nonlinear: diff={diff:.12e}"));
            }
            Ok(())
        },
    );

    // -- skew-information measures --------------------------------------

    // EXPECTED FAIL on generic (non-unital) channels; see module docs. The
    // check is implemented exactly as stated and reports violations
    // honestly.
    let inject = config.inject_nontp as usize;
    run_property(
        &mut props,
        &root,
        "channel-skew-in-unit-interval",
        n + inject,
        |j, _, rng| {
            if config.inject_nontp && j == n {
                // Final, deliberately corrupted instance: completeness off by
                // about 1e-3 must be flagged, not silently measured.
                let ch = crate::channels::amplitude_damping::<f64>(0.3)
                    .expect("valid damping parameter");
                let mut ops: Vec<ComplexMatrix<f64>> = ch.ops().to_vec();
                ops[0] = ops[0].scale(cre(1.0005));
                let bad = ck(KrausMap::new(ops))?;
                let dev = bad.completeness_deviation();
                return fail(format!(
                    "injected map is not trace preserving: completeness deviation={dev:.12e}"
                ));
            }
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let ch = draw_channel(d, rng);
            let a = draw_alpha(rng, pin);
            let v = ck(mwyd_channel(&rho, &ch, params(a)))?;
            if !(-tol..=1.0 + tol).contains(&v) {
                return fail(format!("value={v:.12e} outside [0,1] at alpha={a:.12e}"));
            }
            Ok(())
        },
    );

    // The same bound restricted to unital channels, where it is a theorem.
    run_property(
        &mut props,
        &root,
        "channel-skew-in-unit-interval-unital",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let ch = draw_unital_channel(d, rng);
            let a = draw_alpha(rng, pin);
            let v = ck(mwyd_channel(&rho, &ch, params(a)))?;
            if !(-tol..=1.0 + tol).contains(&v) {
                return fail(format!("value={v:.12e} outside [0,1] at alpha={a:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "channel-skew-ancilla-independent",
        n,
        |_, _, rng| {
            let cap = max_dim.min(3);
            let (da, db) = (rng.random_range(2..=cap), rng.random_range(2..=cap));
            let rho_a = draw_state(da, rng);
            let rho_b = draw_state(db, rng);
            let prod = product_state(&rho_a, &rho_b);
            let phi = draw_channel(da, rng);
            let a = params(draw_alpha(rng, pin));
            let lifted = ck(phi.lift_left(db))?;
            let global = ck(mwyd_channel(prod.state(), lifted.as_map(), a))?;
            let local = ck(mwyd_channel(&rho_a, &phi, a))?;
            if (global - local).abs() > tol {
                return fail(format!(
                    "lifted={global:.12e} local={local:.12e} diff={:.12e}",
                    global - local
                ));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "channel-skew-unitary-covariant",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let ch = draw_channel(d, rng);
            let u = haar_unitary::<f64>(d, rng);
            let a = params(draw_alpha(rng, pin));
            let rotated = ck(DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint()))?;
            let lhs = ck(mwyd_channel(&rotated, &ch, a))?;
            let conjugated = ck(ch.conjugated_by(&u))?;
            let rhs = ck(mwyd_channel(&rho, conjugated.as_map(), a))?;
            if (lhs - rhs).abs() > tol {
                return fail(format!("rotated={lhs:.12e} conjugated={rhs:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "channel-skew-linear-in-map",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let (c1, c2) = (rng.random_range(0.2..1.5), rng.random_range(0.2..1.5));
            let p1 = draw_channel(d, rng);
            let p2 = draw_channel(d, rng);
            let a = params(draw_alpha(rng, pin));
            let mix = ck(positive_mix(
                &[c1, c2],
                &[p1.as_map().clone(), p2.as_map().clone()],
            ))?;
            let lhs = ck(mwyd_channel(&rho, &mix, a))?;
            let rhs = c1 * ck(mwyd_channel(&rho, &p1, a))? + c2 * ck(mwyd_channel(&rho, &p2, a))?;
            if (lhs - rhs).abs() > tol {
                return fail(format!("mix={lhs:.12e} sum={rhs:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "channel-skew-reduction-monotone",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let phi = draw_channel(state.dim_a(), rng);
            let a = params(draw_alpha(rng, pin));
            let lifted = ck(phi.lift_left(state.dim_b()))?;
            let global = ck(mwyd_channel(state.state(), lifted.as_map(), a))?;
            let local = ck(mwyd_channel(&ck(state.reduced_a())?, &phi, a))?;
            if global < local - tol {
                return fail(format!("global={global:.12e} < local={local:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "channel-skew-convex-in-state",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let probs = draw_probabilities(3, rng);
            let states: Vec<DensityMatrix<f64>> = (0..3).map(|_| draw_state(d, rng)).collect();
            let ch = draw_channel(d, rng);
            let a = params(draw_alpha(rng, pin));
            let mut mix = ComplexMatrix::<f64>::zeros(d, d);
            let mut avg = 0.0;
            for (p, s) in probs.iter().zip(&states) {
                mix = &mix + &s.matrix().scale(cre(*p));
                avg += p * ck(mwyd_channel(s, &ch, a))?;
            }
            let mixed = ck(mwyd_channel(&ck(DensityMatrix::new(mix))?, &ch, a))?;
            if avg < mixed - tol {
                return fail(format!("avg={avg:.12e} < mixed={mixed:.12e}"));
            }
            Ok(())
        },
    );

    // EXPECTED FAIL: the F(1) clause is false for non-unital channels; see
    // module docs. Full-rank states keep the F(0) clause meaningful.
    run_property(
        &mut props,
        &root,
        "interpolation-convexity",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = random_density::<f64>(d, d, rng).expect("full rank in range");
            let ch = draw_channel(d, rng);
            f_convexity_check(&rho, &ch, tol)
        },
    );

    // The same three clauses over unital channels, where all of them hold.
    run_property(
        &mut props,
        &root,
        "interpolation-convexity-unital",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = random_density::<f64>(d, d, rng).expect("full rank in range");
            let ch = draw_unital_channel(d, rng);
            f_convexity_check(&rho, &ch, tol)
        },
    );

    // -- bipartite correlation measures ---------------------------------

    run_property(
        &mut props,
        &root,
        "corr-nonneg-and-product-zero",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let phi = draw_channel(state.dim_a(), rng);
            let a = params(draw_alpha(rng, pin));
            let v = ck(corr_t(&state, &phi, a))?;
            if v < -tol {
                return fail(format!("corr_t={v:.12e} negative"));
            }
            let prod = product_state(&ck(state.reduced_a())?, &ck(state.reduced_b())?);
            let z = ck(corr_t(&prod, &phi, a))?;
            if z.abs() > tol {
                return fail(format!("product-state corr_t={z:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "corr-local-unitary-covariant",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let (da, db) = (state.dim_a(), state.dim_b());
            let phi = draw_channel(da, rng);
            let a = params(draw_alpha(rng, pin));
            let va = haar_unitary::<f64>(da, rng);
            let vb = haar_unitary::<f64>(db, rng);
            let w = kron(&va, &vb);
            let rotated = ck(BipartiteState::from_matrix(
                da,
                db,
                &(&w * state.state().matrix()) * &w.adjoint(),
            ))?;
            let lhs = ck(corr_t(&rotated, &phi, a))?;
            let rhs = ck(corr_t(&state, &ck(phi.conjugated_by(&va))?, a))?;
            if (lhs - rhs).abs() > tol {
                return fail(format!("rotated={lhs:.12e} conjugated={rhs:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "corr-contracts-under-local-channel",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let (da, db) = (state.dim_a(), state.dim_b());
            let phi_a = draw_channel(da, rng);
            let phi_b = draw_channel(db, rng);
            let a = params(draw_alpha(rng, pin));
            let before = ck(corr_t(&state, &phi_a, a))?;
            let acted = ck(ck(phi_b.lift_right(da))?.apply(state.state().matrix()))?;
            let after_state = ck(BipartiteState::from_matrix(da, db, acted))?;
            let after = ck(corr_t(&after_state, &phi_a, a))?;
            if after > before + tol {
                return fail(format!("after={after:.12e} > before={before:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "hermitian-operator-collapse",
        n,
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let k = ginibre::<f64>(d, d, rng).hermitize();
            let a = params(draw_alpha(rng, pin));
            let t = ck(mwyd_skew(&rho, &k, a))?;
            let i = ck(gwyd_skew(&rho, &k, a))?;
            if (t - i).abs() > exact {
                return fail(format!("mwyd={t:.12e} gwyd={i:.12e}"));
            }
            Ok(())
        },
    );

    run_property(&mut props, &root, "pure-state-collapse", n, |_, _, rng| {
        let d = draw_dim(rng, max_dim);
        let rho = random_density::<f64>(d, 1, rng).expect("rank 1 in range");
        let k = ginibre::<f64>(d, d, rng);
        let a = params(draw_alpha(rng, pin));
        let t = ck(mwyd_skew(&rho, &k, a))?;
        let v = ck(variance(&rho, &k))?;
        if (t - v).abs() > exact {
            return fail(format!("mwyd={t:.12e} variance={v:.12e}"));
        }
        Ok(())
    });

    run_property(
        &mut props,
        &root,
        "alpha-half-coincidence",
        n,
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let phi = draw_channel(state.dim_a(), rng);
            let half = params(0.5);
            let t = ck(corr_t(&state, &phi, half))?;
            let i = ck(corr_i(&state, &phi, half))?;
            if (t - i).abs() > exact {
                return fail(format!("corr_t={t:.12e} corr_i={i:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "projective-identity",
        n.min(100),
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let rho = draw_state(d, rng);
            let basis = ck(MeasurementBasis::from_unitary(haar_unitary::<f64>(d, rng)))?;
            let a = params(draw_alpha(rng, pin));
            let direct = ck(projective_skew(&rho, &basis, a))?;
            let via_channel = ck(gwyd_channel(&rho, &projective_channel(&basis), a))?;
            if (direct - via_channel).abs() > exact {
                return fail(format!("diagonal={direct:.12e} channel={via_channel:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "twirl-closed-vs-depolarizing",
        n.min(100),
        |_, _, rng| {
            let state = draw_bipartite(rng, max_dim);
            let a = params(draw_alpha(rng, pin));
            let closed = ck(twirl_corr_closed(&state, a))?;
            let direct = ck(corr_t(
                &state,
                &depolarizing_channel::<f64>(state.dim_a()),
                a,
            ))?;
            if (closed - direct).abs() > exact {
                return fail(format!("closed={closed:.12e} depolarizing={direct:.12e}"));
            }
            Ok(())
        },
    );

    // Monte Carlo confirmation on a small panel: the estimator's 4-sigma
    // interval must cover the closed form.
    run_property(&mut props, &root, "twirl-monte-carlo", 10, |_, _, rng| {
        let state = draw_bipartite(rng, max_dim);
        let a = params(draw_alpha(rng, pin));
        let closed = ck(twirl_corr_closed(&state, a))?;
        let est = mc_twirl_corr(&state, a, config.mc_n, rng);
        let gap = (est.mean - closed).abs();
        if gap > 4.0 * est.stderr + 1e-12 {
            return fail(format!(
                "mc={:.12e} closed={closed:.12e} stderr={:.12e}",
                est.mean, est.stderr
            ));
        }
        Ok(())
    });

    // -- sampling layer --------------------------------------------------

    run_property(
        &mut props,
        &root,
        "sampling-determinism",
        n.min(20),
        |_, seed, rng| {
            let d = draw_dim(rng, max_dim);
            let a = ginibre::<f64>(d, d, &mut SeededRng::new(seed));
            let b = ginibre::<f64>(d, d, &mut SeededRng::new(seed));
            if a.max_abs_diff(&b) != 0.0 {
                return fail("identical seeds diverged".into());
            }
            let state = random_bipartite::<f64>(2, 2, 3, &mut SeededRng::new(seed ^ 1))
                .expect("rank in range");
            let e1 = mc_twirl_corr(&state, params(0.5), 64, &mut SeededRng::new(seed ^ 2));
            let e2 = mc_twirl_corr(&state, params(0.5), 64, &mut SeededRng::new(seed ^ 2));
            if e1 != e2 {
                return fail("identical seeds gave different Monte Carlo estimates".into());
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "haar-unitarity",
        n.min(100),
        |_, _, rng| {
            let d = draw_dim(rng, max_dim);
            let u = haar_unitary::<f64>(d, rng);
            let dev = ck(u.unitarity_deviation())?;
            if dev > exact {
                return fail(format!("unitarity deviation={dev:.12e}"));
            }
            Ok(())
        },
    );

    // First-moment identity: mean of U X U^dag -> tr(X) I / d, checked
    // entrywise against the empirical 4-sigma band.
    run_property(&mut props, &root, "haar-moment-operator", 3, |_, _, rng| {
        let d = 2;
        let x = ginibre::<f64>(d, d, rng);
        let want = ComplexMatrix::identity(d).scale(x.trace() / cre(d as f64));
        let sample = |rng: &mut SeededRng| {
            let u = haar_unitary::<f64>(d, rng);
            &(&u * &x) * &u.adjoint()
        };
        moment_check(config.mc_n, rng, sample, &want)
    });

    // Lifted first moment: mean of (U (x) I) T (U^dag (x) I) -> I/d (x) tr_A T.
    run_property(&mut props, &root, "haar-moment-lifted", 2, |_, _, rng| {
        let (da, db) = (2, 2);
        let t = ginibre::<f64>(da * db, da * db, rng);
        let t_b = ck(partial_trace_op(&t, da, db, Subsystem::B))?;
        let want = kron(
            &ComplexMatrix::identity(da).scale(cre(1.0 / da as f64)),
            &t_b,
        );
        let eye = ComplexMatrix::<f64>::identity(db);
        let sample = |rng: &mut SeededRng| {
            let u = kron(&haar_unitary::<f64>(da, rng), &eye);
            &(&u * &t) * &u.adjoint()
        };
        moment_check(config.mc_n, rng, sample, &want)
    });

    run_property(&mut props, &root, "mc-stderr-scaling", 3, |_, _, rng| {
        let state = draw_bipartite(rng, max_dim);
        let a = params(draw_alpha(rng, pin));
        let mut prev = f64::INFINITY;
        for k in 0..5u32 {
            let n_k = 250usize << k;
            let est = mc_twirl_corr(&state, a, n_k, rng);
            // Expected decay 1/sqrt(2) per doubling, 50% slack.
            let cap = prev * (1.5 / 2.0f64.sqrt());
            if est.stderr > cap {
                return fail(format!(
                    "n={n_k}: stderr={:.12e} exceeds {cap:.12e}",
                    est.stderr
                ));
            }
            prev = est.stderr;
        }
        Ok(())
    });

    // -- optimizer layer -------------------------------------------------
    // Budgets are reduced from the defaults to keep the suite fast; the
    // objectives here are two-qubit and converge well inside them.

    let opt_n = (n / 20).clamp(4, 10);
    let opt_budget = |seed: u64| OptBudget::<f64> {
        restarts: 8,
        max_evals: 600,
        tol: 1e-9,
        seed,
    };

    run_property(
        &mut props,
        &root,
        "optimizer-reevaluation",
        opt_n,
        |_, seed, rng| {
            let state =
                random_bipartite::<f64>(2, 2, rng.random_range(1..=4), rng).expect("rank in range");
            let a = params(0.5);
            let res = ck(max_corr_projective(&state, a, &opt_budget(seed)))?;
            let basis = ck(basis_from_unitary(&unitary_from_params(
                &res.argmin_or_argmax,
            )))?;
            let again = ck(corr_t(&state, &projective_channel(&basis), a))?;
            if (again - res.value).abs() > 1e-9 {
                return fail(format!(
                    "reported={:.12e} reevaluated={again:.12e}",
                    res.value
                ));
            }
            if res.restarts_used != opt_budget(seed).restarts {
                return fail(format!("restarts_used={}", res.restarts_used));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "optimizer-max-ge-min",
        opt_n,
        |_, seed, rng| {
            let state =
                random_bipartite::<f64>(2, 2, rng.random_range(1..=4), rng).expect("rank in range");
            let a = params(draw_alpha(rng, pin));
            let hi = ck(max_corr_projective(&state, a, &opt_budget(seed)))?.value;
            let lo = ck(min_corr_projective(&state, a, &opt_budget(seed)))?.value;
            if hi < lo - 1e-9 || hi < -1e-9 || lo < -1e-9 {
                return fail(format!("max={hi:.12e} min={lo:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "optimizer-local-rotation-invariant",
        opt_n,
        |_, seed, rng| {
            let state =
                random_bipartite::<f64>(2, 2, rng.random_range(2..=4), rng).expect("rank in range");
            let a = params(0.5);
            let va = haar_unitary::<f64>(2, rng);
            let vb = haar_unitary::<f64>(2, rng);
            let w = kron(&va, &vb);
            let rotated = ck(BipartiteState::from_matrix(
                2,
                2,
                &(&w * state.state().matrix()) * &w.adjoint(),
            ))?;
            // The optimal value is invariant; the optimizer reproduces it to
            // its own reproducibility tolerance.
            let v1 = ck(max_corr_projective(&state, a, &opt_budget(seed)))?.value;
            let v2 = ck(max_corr_projective(&rotated, a, &opt_budget(seed ^ 0x5bd1)))?.value;
            if (v1 - v2).abs() > 1e-5 {
                return fail(format!("original={v1:.12e} rotated={v2:.12e}"));
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "optimizer-channel-on-b-contracts",
        opt_n,
        |_, seed, rng| {
            let state =
                random_bipartite::<f64>(2, 2, rng.random_range(2..=4), rng).expect("rank in range");
            let a = params(0.5);
            let phi_b = draw_channel(2, rng);
            let acted = ck(ck(phi_b.lift_right(2))?.apply(state.state().matrix()))?;
            let after = ck(BipartiteState::from_matrix(2, 2, acted))?;
            let b1 = opt_budget(seed);
            let b2 = opt_budget(seed ^ 0x9e37);
            for (label, before_v, after_v) in [
                (
                    "max-proj",
                    ck(max_corr_projective(&state, a, &b1))?.value,
                    ck(max_corr_projective(&after, a, &b2))?.value,
                ),
                (
                    "min-proj",
                    ck(min_corr_projective(&state, a, &b1))?.value,
                    ck(min_corr_projective(&after, a, &b2))?.value,
                ),
                (
                    "max-unitary",
                    ck(max_corr_unitary(&state, a, &b1))?.value,
                    ck(max_corr_unitary(&after, a, &b2))?.value,
                ),
            ] {
                if after_v > before_v + 1e-5 {
                    return fail(format!(
                        "{label}: after={after_v:.12e} > before={before_v:.12e}"
                    ));
                }
            }
            Ok(())
        },
    );

    run_property(
        &mut props,
        &root,
        "optimizer-trace-monotone",
        opt_n,
        |_, seed, rng| {
            let state =
                random_bipartite::<f64>(2, 2, rng.random_range(1..=4), rng).expect("rank in range");
            let a = params(0.5);
            let res = ck(max_corr_projective(&state, a, &opt_budget(seed)))?;
            for w in res.trace.windows(2) {
                if w[1].1 < w[0].1 {
                    return fail(format!(
                        "max trace decreased: {:.12e} -> {:.12e}",
                        w[0].1, w[1].1
                    ));
                }
            }
            let res = ck(geometric_discord(&state, &opt_budget(seed ^ 1)))?;
            for w in res.trace.windows(2) {
                if w[1].1 > w[0].1 {
                    return fail(format!(
                        "min trace increased: {:.12e} -> {:.12e}",
                        w[0].1, w[1].1
                    ));
                }
            }
            Ok(())
        },
    );

    // Converse direction of the product-state characterization, certified
    // up to optimizer completeness: non-product states score visibly
    // positive.
    run_property(
        &mut props,
        &root,
        "nonproduct-states-detected",
        n.min(50),
        |_, seed, rng| {
            // Rank-1 draws are entangled almost surely; skip the measure-zero
            // near-product draws where the claim is vacuous at this tolerance.
            let mut state = random_bipartite::<f64>(2, 2, 1, rng).expect("rank in range");
            let mut marginal_purity = ck(state.reduced_a())?.purity();
            while marginal_purity > 1.0 - 1e-2 {
                state = random_bipartite::<f64>(2, 2, 1, rng).expect("rank in range");
                marginal_purity = ck(state.reduced_a())?.purity();
            }
            let budget = OptBudget::<f64> {
                restarts: 4,
                max_evals: 400,
                tol: 1e-9,
                seed,
            };
            let v = ck(max_corr_projective(&state, params(0.5), &budget))?.value;
            if v <= 1e-4 {
                return fail(format!("entangled state scored {v:.12e}"));
            }
            Ok(())
        },
    );

    // Classical-quantum states have vanishing minimal correlation at the
    // classical basis.
    run_property(
        &mut props,
        &root,
        "classical-quantum-min-zero",
        opt_n,
        |_, seed, rng| {
            let state = random_classical_quantum::<f64>(2, 2, rng);
            let res = ck(min_corr_projective(&state, params(0.5), &opt_budget(seed)))?;
            if res.value.abs() > 1e-6 {
                return fail(format!("min-proj={:.12e}", res.value));
            }
            Ok(())
        },
    );

    SuiteReport {
        config: *config,
        properties: props,
    }
}

/// Midpoint convexity of `F(a) = tr(rho^a Phi(rho^(1-a)))` on a 21-point
/// grid over [0, 1], plus the endpoint clauses `F(0) = 1` and `F(1) <= 1`.
fn f_convexity_check(rho: &DensityMatrix<f64>, ch: &QuantumChannel<f64>, tol: f64) -> Check {
    let mut f = [0.0; 21];
    for (k, slot) in f.iter_mut().enumerate() {
        let a = k as f64 / 20.0;
        let ra = ck(frac_power(rho, a))?;
        let r1a = ck(frac_power(rho, 1.0 - a))?;
        *slot = ck(trace_prod(&ra, &ck(ch.apply(&r1a))?))?.re;
    }
    for i in 0..21 {
        for j in (i + 2)..21 {
            if (j - i) % 2 != 0 {
                continue;
            }
            let mid = (i + j) / 2;
            if f[mid] > (f[i] + f[j]) / 2.0 + tol {
                return fail(format!(
                    "midpoint convexity broken at ({},{},{}): {:.12e} > {:.12e}",
                    i as f64 / 20.0,
                    mid as f64 / 20.0,
                    j as f64 / 20.0,
                    f[mid],
                    (f[i] + f[j]) / 2.0
                ));
            }
        }
    }
    if (f[0] - 1.0).abs() > tol {
        return fail(format!("F(0)={:.12e} != 1", f[0]));
    }
    if f[20] > 1.0 + tol {
        return fail(format!("F(1)={:.12e} > 1", f[20]));
    }
    Ok(())
}

/// Empirical-mean check with a per-entry 4-sigma band: draws `n` samples of
/// a random matrix and compares the mean to `want`.
fn moment_check(
    n: usize,
    rng: &mut SeededRng,
    mut sample: impl FnMut(&mut SeededRng) -> ComplexMatrix<f64>,
    want: &ComplexMatrix<f64>,
) -> Check {
    let (r, c) = (want.rows(), want.cols());
    let mut sum = ComplexMatrix::<f64>::zeros(r, c);
    let mut sq = vec![0.0; r * c];
    for _ in 0..n {
        let m = sample(rng);
        for i in 0..r {
            for j in 0..c {
                sum[(i, j)] += m[(i, j)];
                sq[i * c + j] += m[(i, j)].norm_sqr();
            }
        }
    }
    let nf = n as f64;
    for i in 0..r {
        for j in 0..c {
            let mean: C<f64> = sum[(i, j)] / cre(nf);
            let var = (sq[i * c + j] / nf - mean.norm_sqr()).max(0.0);
            let stderr = (var / nf).sqrt();
            let gap = (mean - want[(i, j)]).norm();
            if gap > 4.0 * stderr + 1e-12 {
                return fail(format!(
                    "entry ({i},{j}): mean gap={gap:.12e} exceeds 4*stderr={:.12e}",
                    4.0 * stderr
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A scaled-down configuration that still exercises every property.
    fn quick() -> VerifyConfig {
        VerifyConfig {
            instances: 25,
            max_dim: 3,
            seed: 42,
            tol: 1e-8,
            mc_n: 2000,
            alpha: None,
            inject_nontp: false,
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite(&quick());
        let b = run_suite(&quick());
        assert_eq!(a.render(), b.render());
        // A different seed changes at least the failure details where
        // failures occur, but the property list is fixed.
        let c = run_suite(&VerifyConfig {
            seed: 43,
            ..quick()
        });
        assert_eq!(
            a.properties.iter().map(|p| p.name).collect::<Vec<_>>(),
            c.properties.iter().map(|p| p.name).collect::<Vec<_>>()
        );
    }

    #[test]
    fn structurally_true_properties_pass() {
        let report = run_suite(&quick());
        // Everything except the two documented false claims must pass.
        for p in &report.properties {
            if p.name == "channel-skew-in-unit-interval" || p.name == "interpolation-convexity" {
                continue;
            }
            assert!(
                p.ok(),
                "{}: {}/{} first_failure={:?}",
                p.name,
                p.passed,
                p.total,
                p.first_failure
            );
        }
    }

    #[test]
    fn false_claims_fail_honestly() {
        // On a generic (non-unital) ensemble the lower bound of the unit-interval claim and the
        // F(1) clause are violated by a visible fraction of instances,
        // while the unital restrictions hold. The counterexample justifying
        // this expectation is in the measures tests
        // (mwyd_channel_can_be_negative_for_nonunital_channels). 50
        // instances at seed 42 hit one unit-interval violation and twenty
        // convexity violations; 25 can miss the ~3% violation rate.
        let report = run_suite(&VerifyConfig {
            instances: 50,
            ..quick()
        });
        let t1 = report.property("channel-skew-in-unit-interval").unwrap();
        assert!(
            !t1.ok(),
            "unit-interval bound unexpectedly passed: {}/{}",
            t1.passed,
            t1.total
        );
        assert!(t1.first_failure.is_some());
        let f = report.property("interpolation-convexity").unwrap();
        assert!(!f.ok(), "interpolation convexity unexpectedly passed");
        assert!(report
            .property("channel-skew-in-unit-interval-unital")
            .unwrap()
            .ok());
        assert!(report
            .property("interpolation-convexity-unital")
            .unwrap()
            .ok());
        assert!(!report.all_pass());
    }

    #[test]
    fn injection_is_flagged() {
        let report = run_suite(&VerifyConfig {
            instances: 4,
            mc_n: 500,
            inject_nontp: true,
            ..quick()
        });
        let t1 = report.property("channel-skew-in-unit-interval").unwrap();
        assert_eq!(t1.total, 5);
        let msg = t1.first_failure.as_deref().unwrap_or("");
        assert!(
            msg.contains("not trace preserving"),
            "unexpected failure detail: {msg}"
        );
    }

    #[test]
    fn pinned_alpha_is_honored() {
        let report = run_suite(&VerifyConfig {
            instances: 5,
            mc_n: 300,
            alpha: Some(0.5),
            ..quick()
        });
        assert!(report.render().contains("alpha=0.5"));
        let coincide = report.property("alpha-half-coincidence").unwrap();
        assert_eq!(coincide.passed, coincide.total);
    }

    #[test]
    fn render_shape() {
        let report = run_suite(&VerifyConfig {
            instances: 2,
            mc_n: 300,
            ..quick()
        });
        let text = report.render();
        assert!(text.starts_with("property-verification suite\n"));
        assert!(text.contains("config: instances=2 max-dim=3 seed=42"));
        assert!(text
            .trim_end()
            .lines()
            .last()
            .unwrap()
            .starts_with("result:"));
        for p in &report.properties {
            assert!(text.contains(p.name));
        }
    }
}
