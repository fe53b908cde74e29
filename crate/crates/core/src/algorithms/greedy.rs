use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::engine::MergeEngine;
use super::{mix_seed, SearchResult, TraceStep};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::modularity::{modularity, Variant};
use crate::partition::Partition;

/// Seed of permutation `index` for a run with base seed `seed`:
/// `mix(seed ^ mix(index))` with the SplitMix64 finalizer as `mix`.
pub fn permutation_seed(seed: u64, index: u64) -> u64 {
    mix_seed(seed ^ mix_seed(index))
}

struct PermutationOutcome {
    partition: Partition,
    q: f64,
    trace: Vec<TraceStep>,
}

fn run_permutation(h: &Hypergraph, variant: Variant, seed: u64) -> Result<PermutationOutcome> {
    let mut engine = MergeEngine::new(h, variant)?;
    let mut order: Vec<usize> = (0..h.edge_count()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut q_best = engine.q();
    let mut best = engine.partition();
    let mut trace = Vec::new();
    for e in order {
        let q = engine.evaluate(e);
        if q > q_best {
            engine.apply(e);
            q_best = q;
            best = engine.partition();
            trace.push(TraceStep { index: e, q });
        }
    }
    Ok(PermutationOutcome {
        partition: best,
        q: q_best,
        trace,
    })
}

/// Best-of-`k` random-order greedy edge insertion.
///
/// Each permutation starts from singletons and walks the edges in a random
/// order, keeping an edge when the partition induced by the kept edges plus
/// that edge scores strictly higher. Permutations run in parallel with
/// seeds from [`permutation_seed`]; the highest score wins, the lowest
/// permutation index on ties.
pub fn greedy_random(h: &Hypergraph, k: usize, seed: u64, variant: Variant) -> Result<SearchResult> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    MergeEngine::new(h, variant)?;
    let outcomes: Vec<PermutationOutcome> = (0..k as u64)
        .into_par_iter()
        .map(|i| run_permutation(h, variant, permutation_seed(seed, i)))
        .collect::<Result<_>>()?;

    let mut q_opt = -1.0;
    let mut winner = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.q > q_opt {
            q_opt = o.q;
            winner = i;
        }
    }
    let best = outcomes.into_iter().nth(winner).expect("k >= 1");
    let q = modularity(h, &best.partition, variant)?.q;
    let mut accepted_edges = FixedBitSet::with_capacity(h.edge_count());
    for e in 0..h.edge_count() {
        if crate::modularity::is_internal(h, &best.partition, e) {
            accepted_edges.insert(e);
        }
    }
    Ok(SearchResult {
        partition: best.partition,
        q,
        accepted_edges,
        variant,
        trace: best.trace,
    })
}
