//! Exact symbolic engine for the CAR algebra over integer-indexed sites.
//!
//! Generators are finite-weight Pauli strings `X^a Z^b` with the composite
//! letter `XZ` kept atomic (it is never rewritten as `Y`), so products,
//! adjoints and every state evaluation stay in `{0, +-1}`. Four registers
//! `A1, A2, B1, B2` each carry a copy of `Z`; Alice owns `A1, A2` and Bob owns
//! `B1, B2`.
//!
//! States are [`PairingState`]s: some sites are matched into EPR pairs
//! `(|00> + |11>)/sqrt(2)` and every other site sits in `|0>`. Automorphisms are
//! induced by [`SitePermutation`]s applied identically to both parties. With the
//! evolution convention `final = initial . alpha`, [`verify_self_embezzlement`]
//! checks `psi_initial(alpha(g)) == psi_target(g)` generator by generator.

mod density;
mod element;
mod pauli;
mod perm;
mod site;
mod state;
mod verify;

pub use density::{purity_check, restrict_density, Purity, PURE_TOLERANCE, RESTRICT_MAX_SITES};
pub use element::{operator_norm, to_matrix, AlgebraElement, MATRIX_MAX_SITES};
pub use pauli::{adjoint, pauli_mul, Letter, PauliString, Phase};
pub use perm::{apply_automorphism, canonical_sigma, AffinePiece, IndexRange, SitePermutation, SlotMap};
pub use site::{Party, Register, Site, Slot};
pub use state::{eval_element, eval_state, PairRule, PairingState};
pub use verify::{
    check_generator, enumeration_shard_count, sample_chunk_count, verify_enumeration_shard, verify_sample_chunk,
    verify_self_embezzlement, window_sites, Mismatch, Tally, VerificationReport, VerifyConfig, SAMPLE_CHUNK,
};
