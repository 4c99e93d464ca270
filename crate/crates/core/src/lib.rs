//! Decoder library for the triangular color code.
//!
//! The code lattice lives in [`lattice`]; the three restricted lattices glued
//! into a single matching graph live in [`unified`]. Decoding is a single
//! minimum-weight perfect matching on that graph ([`decoder::decode_moebius`]),
//! optionally followed by a tear-and-dummy subroutine that produces a logically
//! inequivalent correction ([`decoder::alternative_matching`]) and a switching
//! rule that compares the two ([`decoder::decode_comparative`]).
//!
//! [`noise`] drives Monte Carlo and exhaustive sweeps over iid bit-flip noise,
//! and [`analysis`] fits the low-rate scaling ansatz and the finite-size
//! threshold crossing from the resulting data.

pub mod analysis;
pub mod decoder;
pub mod hex;
pub mod lattice;
pub mod matching;
pub mod noise;
mod par;
pub mod unified;

mod blossom;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("code distance must be an odd integer >= 3, got {0}")]
    InvalidDistance(u32),
    #[error("hex coordinate ({0}, {1}, {2}) violates x0 + x2 + x4 = 0")]
    InvalidHexCoord(i64, i64, i64),
    #[error("matching graph has no perfect matching of finite weight")]
    InfeasibleMatching,
    #[error("matching graph must have an even number of nodes, got {0}")]
    OddNodeCount(usize),
    #[error("brute-force matching is limited to n <= {limit} nodes, got {n}")]
    BruteForceTooLarge { n: usize, limit: usize },
    #[error("bit-flip probability must lie in [0, 0.5], got {0}")]
    InvalidProbability(f64),
    #[error("log-likelihood undefined for p in {{0, 1}}, got {0}")]
    DegenerateProbability(f64),
    #[error("upsilon must be >= 1, got {0}")]
    InvalidUpsilon(u32),
    #[error("tear along the {0:?} crease is not supported; the readout line is the green crease")]
    UnsupportedTear(lattice::Color),
    #[error("exhaustive sweep requires w_max <= (d-1)/2, got w_max={w_max} at d={d}")]
    SweepTooDeep { d: u32, w_max: u32 },
    #[error("chunk index {index} out of range for {of} chunks")]
    BadChunk { index: u64, of: u64 },
    #[error("distance {d}: only {points} usable data points after discarding, need at least {needed}")]
    InsufficientData { d: u32, points: usize, needed: usize },
    #[error("need at least {needed} distinct code distances, got {got}")]
    InsufficientDistances { got: usize, needed: usize },
    #[error("degenerate fit input: {0}")]
    DegenerateFit(&'static str),
    #[error("threshold fit did not converge after {iterations} iterations (residual {residual:.3e})")]
    FitDiverged { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
