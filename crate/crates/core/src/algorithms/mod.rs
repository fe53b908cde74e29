//! Community detection: the two edge-driven hypergraph heuristics and a
//! Louvain baseline on weighted graphs.

mod cnm;
pub(crate) mod engine;
mod greedy;
mod louvain;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::modularity::Variant;
use crate::partition::Partition;

pub use cnm::simple_cnm;
pub use greedy::{greedy_random, permutation_seed};
pub use louvain::louvain;

/// One recorded step: the edge accepted (or, for Louvain, the level
/// number) and the modularity right after it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub q: f64,
}

/// Outcome of a detection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub partition: Partition,
    /// Modularity of `partition` re-scored from scratch under `variant`.
    pub q: f64,
    /// For the hypergraph heuristics, the canonical edge set of the
    /// returned partition; empty for Louvain.
    pub accepted_edges: FixedBitSet,
    pub variant: Variant,
    pub trace: Vec<TraceStep>,
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
