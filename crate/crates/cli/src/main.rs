//! Command-line front end for the skew-information correlation measures:
//! evaluate them on states/channels from files, reproduce the worked-example
//! sweeps as CSV, extremize over channel families, cross-check the twirl
//! closed form by Monte Carlo, and run the property-verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use skewcorr_core::optimize::OptBudget;

mod commands;
mod error;
mod files;

#[derive(Parser)]
#[command(
    name = "skewcorr",
    about = "Skew-information measures of states relative to quantum channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the measures on a state/channel pair
    Measure {
        /// State file (JSON)
        state: PathBuf,
        /// Channel file (JSON)
        channel: PathBuf,
        /// Interpolation exponent, strictly between 0 and 1
        #[arg(long)]
        alpha: f64,
        /// Accept Kraus families that are not trace preserving
        #[arg(long)]
        allow_nontp: bool,
    },
    /// Sweep the worked two-qubit example against amplitude damping, as CSV
    SweepExample1 {
        /// Pin alpha to one value (otherwise swept over [0.05, 0.95])
        #[arg(long)]
        alpha: Option<f64>,
        /// Pin the damping parameter (otherwise swept over [0, 1])
        #[arg(long)]
        p: Option<f64>,
        /// Points per swept axis (defaults: 19 for alpha, 11 for p)
        #[arg(long)]
        steps: Option<usize>,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extremize a correlation measure over a channel family
    Optimize {
        /// State file (JSON)
        state: PathBuf,
        /// What to extremize
        objective: Objective,
        /// Interpolation exponent (required unless the objective fixes 1/2)
        #[arg(long)]
        alpha: Option<f64>,
        /// Multi-start restarts
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Objective-evaluation budget per restart
        #[arg(long, default_value_t = 2000)]
        max_evals: usize,
        /// Simplex-diameter convergence tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Restart-point seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the twirl closed form, the depolarizing channel, and a
    /// Monte Carlo estimate
    Twirl {
        /// State file (JSON)
        state: PathBuf,
        /// Interpolation exponent, strictly between 0 and 1
        #[arg(long)]
        alpha: f64,
        /// Monte Carlo sample count
        #[arg(long, default_value_t = 20000)]
        n: usize,
        /// Sampling seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the randomized property-verification suite
    Verify {
        /// Instances per property
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Largest subsystem dimension drawn
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Root seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance for the measure-level inequalities
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Pin every drawn alpha to a fixed value
        #[arg(long)]
        alpha: Option<f64>,
        /// Inject a non-trace-preserving channel instance (must be flagged)
        #[arg(long)]
        allow_nontp: bool,
    },
    /// Generate a state or channel file
    Gen {
        /// What to generate
        kind: GenKind,
        /// Dimensions (density: d [d_B]; channel: d; cq-state/bell: d_A d_B;
        /// example1: none)
        dims: Vec<usize>,
        /// Kraus operator count for `channel`
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        /// Sampling seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Objective {
    /// Maximal projective-measurement correlation
    MaxProj,
    /// Minimal projective-measurement correlation
    MinProj,
    /// Maximal unitary-conjugation correlation
    MaxUnitary,
    /// Geometric discord: minimal projective correlation at alpha = 1/2
    GeoDiscord,
    /// Maximal correlation over measurements that do not disturb the
    /// reduced state, at alpha = 1/2
    MinNondisturb,
}

impl Objective {
    fn name(&self) -> &'static str {
        match self {
            Objective::MaxProj => "max-proj",
            Objective::MinProj => "min-proj",
            Objective::MaxUnitary => "max-unitary",
            Objective::GeoDiscord => "geo-discord",
            Objective::MinNondisturb => "min-nondisturb",
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum GenKind {
    /// Random full-rank density matrix
    Density,
    /// Random trace-preserving channel
    Channel,
    /// Random classical-quantum state
    CqState,
    /// Maximally entangled state
    Bell,
    /// The worked-example two-qubit state with entries of magnitude 1/3
    Example1,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (`skewcorr sweep-example1 | head`)
    // instead of panicking on EPIPE, which is what Rust's default ignored
    // SIGPIPE turns into.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure {
            state,
            channel,
            alpha,
            allow_nontp,
        } => commands::cmd_measure(&state, &channel, alpha, allow_nontp).map(|()| true),
        Command::SweepExample1 {
            alpha,
            p,
            steps,
            out,
        } => commands::cmd_sweep_example1(alpha, p, steps, out.as_deref()).map(|()| true),
        Command::Optimize {
            state,
            objective,
            alpha,
            restarts,
            max_evals,
            tol,
            seed,
        } => {
            let budget = OptBudget {
                restarts,
                max_evals,
                tol,
                seed,
            };
            commands::cmd_optimize(&state, objective, alpha, budget).map(|()| true)
        }
        Command::Twirl {
            state,
            alpha,
            n,
            seed,
        } => commands::cmd_twirl(&state, alpha, n, seed),
        Command::Verify {
            n,
            max_dim,
            seed,
            tol,
            alpha,
            allow_nontp,
        } => commands::cmd_verify(n, max_dim, seed, tol, alpha, allow_nontp),
        Command::Gen {
            kind,
            dims,
            kraus,
            seed,
            out,
        } => commands::cmd_gen(kind, &dims, kraus, seed, &out).map(|()| true),
    };
    match outcome {
        // `false` is a clean run whose property check failed: exit 1.
        Ok(all_good) => ExitCode::from(u8::from(!all_good)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
