//! Symbolic and numeric verification of the two braiding operators on the
//! formal Poisson group dual to sl2.
//!
//! The library computes, with exact rational arithmetic on truncated
//! multivariate power series:
//!
//! * the geometric braiding obtained from the matrix factorization of the
//!   dual group ([`braid_wx`]),
//! * the deformation braiding obtained by integrating Hamiltonian flows on
//!   the dual Poisson structure ([`braid_gh`]),
//! * the quantum-algebra side: a PBW normal-form engine for the quantized
//!   enveloping algebra of sl2, its R-matrix and the specialization map
//!   down to the series ring ([`quea`]),
//!
//! and machine-checks the braiding axioms, the quantum Yang-Baxter
//! equation, infinitesimal triviality, and the coincidence of the two
//! constructions, to a configurable truncation order.  A complex-numeric
//! sampler cross-checks the closed formulas as point maps.

pub mod braid_gh;
pub mod braid_wx;
pub mod hopf;
pub mod poisson;
pub mod quea;
pub mod report;
pub mod series;

use thiserror::Error;

/// Errors for operations with genuine domain preconditions.
///
/// Structural misuse (mixing ring signatures, mismatched tensor arities)
/// is a programming error and panics instead.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series is not a unit: constant term is zero")]
    NotAUnit,
    #[error("constant term must be 1, found {0}")]
    ConstantTermNotOne(String),
    #[error("constant term must be 0, found {0}")]
    ConstantTermNotZero(String),
    #[error("variable index {index} out of range for {vars} variables")]
    InvalidVariable { index: usize, vars: usize },
    #[error("substitution image for variable {0} has a nonzero constant term")]
    ImageNotPointed(usize),
    #[error("expected {expected} substitution images, got {got}")]
    MissingImage { expected: usize, got: usize },
    #[error("Hamiltonian generator must have valuation >= 2, found {0}")]
    HamiltonianValuation(usize),
    #[error("morphism has a singular linear part, cannot invert")]
    SingularLinearPart,
    #[error("theta divisor: the square-root factor vanishes at the sample point")]
    ThetaDivisor,
    #[error("element leaves the valuation-graded subalgebra: key {key} of degree {degree} has h-valuation {valuation}")]
    ValuationViolation {
        key: String,
        degree: usize,
        valuation: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
