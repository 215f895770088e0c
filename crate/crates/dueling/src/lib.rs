//! Classical simulation toolkit for two-register amplitude-amplification
//! optimization ("quantum dueling"), together with Grover-search and
//! Grover-adaptive-search baselines and a reproducible experiment harness.
//!
//! The solver works on combinatorial minimization problems given by a measure
//! function `v` over a search space of size `N = 2^n` and a solution indicator
//! `f`. Two entangled registers repeatedly amplify each other's weight on
//! well-measured solutions; measuring both and keeping the better outcome
//! yields the optimum with high probability after a suitable gate sequence.
//!
//! Two interchangeable simulation engines are provided:
//!
//! - [`dense::DenseState`] evolves the full `N x N` amplitude grid in
//!   `O(N^2)` per gate;
//! - [`cluster::ClusterState`] evolves the exact contraction of that grid
//!   onto equivalence classes of indistinguishable elements in `O(q^2)` per
//!   gate, where `q` is the number of classes. For near-uniform solution
//!   distributions `q ~ 2M`, which makes search spaces of millions of
//!   elements cheap to simulate.
//!
//! On top of the engines sit a windowed exhaustive search for near-optimal
//! gate sequences ([`search`]), oracle-counted baselines ([`baselines`]),
//! and batch experiment runners with CSV/JSON emission ([`experiments`]).
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `duel` binary for the command-line harness.

// Indexed loops are deliberate in the amplitude kernels: most walk two or
// three grids in lockstep under one index.
#![allow(clippy::needless_range_loop)]

pub mod baselines;
pub mod cluster;
pub mod dense;
pub mod engine;
pub mod experiments;
pub mod problem;
pub mod search;

pub use engine::{EngineKind, Op};
pub use problem::{DistributionSpec, MeasureSpec, ProblemInstance};

use std::fmt;

/// Errors produced while building problems, running engines, or fitting data.
#[derive(Debug)]
pub enum Error {
    /// A distribution produced no solutions; the output contract of the
    /// dueling loop is unmeetable without at least one.
    NoSolutions,
    /// A distribution or measure specification violated its invariants.
    InvalidDistribution(String),
    /// A dense state was requested for a search space above the configured
    /// memory limit.
    DenseLimit { size: usize, limit: usize },
    /// A search or sampling run was started without any bound on the total
    /// number of oracle queries.
    UnboundedRun,
    /// A regression was requested on degenerate or insufficient data.
    BadFit(String),
    /// A configuration file could not be parsed or validated.
    InvalidConfig(String),
    /// Filesystem failure while emitting results.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoSolutions => write!(out, "distribution marks no element as a solution"),
            Error::InvalidDistribution(msg) => write!(out, "invalid distribution: {msg}"),
            Error::DenseLimit { size, limit } => write!(
                out,
                "dense state of size {size} exceeds the limit {limit}; use the cluster engine"
            ),
            Error::UnboundedRun => write!(out, "run requires a termination bound on oracle count"),
            Error::BadFit(msg) => write!(out, "cannot fit: {msg}"),
            Error::InvalidConfig(msg) => write!(out, "invalid configuration: {msg}"),
            Error::Io(err) => write!(out, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
