//! Self-embezzlement in finite dimension: the no-go side (unitary and channel
//! cases, rearrangement bound) and the van Dam-Hayden positive side.
//!
//! Every optimum over local operations here is taken over Schmidt spectra.
//! For pure bipartite states the best overlap reachable by local unitaries
//! lines up coefficients by magnitude, and the minimum L1 rearrangement
//! distance between two lists is reached by sorting both the same way. The
//! brute-force oracle [`brute_force_rearrangement_min`] checks the second fact
//! at small scale.

mod nogo;
mod purification;
mod vdh;

pub use nogo::{
    brute_force_rearrangement_min, channel_selfembezzlement_fidelity, grid_denominator, grid_distributions, lemma_entry,
    lemma_scan, min_rearrangement_distance, self_embezzlement_fidelity, LemmaEntry, LemmaScan, NoGoReport,
    RearrangementInstance, BRUTE_FORCE_MAX_SUPPORT, LEMMA_MAX_SUPPORT,
};
pub use purification::{nearest_product_extension, ProductExtension};
pub use vdh::{embezzlement_fidelity, vdh_catalyst, SparseFidelity, SumMode, VdhCatalyst, SPARSE_THRESHOLD};
