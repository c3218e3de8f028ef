//! Core primitives for analysing self-embezzlement of entanglement.
//!
//! Two halves live here:
//!
//! * A numeric half ([`qstate`], [`embezzle`], [`chsh`]) working with bipartite
//!   pure states in Schmidt form. Local unitaries cannot change Schmidt
//!   coefficients, so every optimum over local operations reduces to sorting
//!   and aligning coefficient lists.
//! * A symbolic half ([`car`]) for the CAR algebra: finite-weight Pauli strings
//!   over integer-indexed sites, EPR-pairing states, and site permutations.
//!   All state evaluations there are exact integer arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`. IO, reports and the command
//! line runner live in the `embezzle` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod car;
pub mod chsh;
pub mod embezzle;
mod error;
pub mod linalg;
pub mod qstate;

pub use error::{CoreError, Result};
pub use qstate::{Limits, ProbDist, SchmidtVector};

/// Lower bound on the variation (and trace) distance for admissible catalysts.
pub const TWO_NINTHS: f64 = 2.0 / 9.0;

/// Slack used when comparing computed distances against [`TWO_NINTHS`].
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Published six-digit ceiling on the self-embezzlement fidelity. The exact
/// bound `sqrt(1 - (2/9)^2) = 0.97499604...` sits about 4e-8 above it.
pub const FIDELITY_CEILING: f64 = 0.974996;
