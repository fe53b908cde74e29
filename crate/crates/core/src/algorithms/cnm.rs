use fixedbitset::FixedBitSet;

use super::engine::MergeEngine;
use super::{SearchResult, TraceStep};
use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::modularity::{modularity, Variant};

/// Agglomerative search over canonical edge sets.
///
/// Each step scores every edge not yet inside a part, merges along the best
/// one (lowest index on ties) and takes the canonical edge set of the new
/// partition as the next state. The best partition seen is kept, with later
/// steps replacing it on equal score. With `early_stop`, the walk ends at
/// the first step that scores below the best so far; otherwise it runs
/// until every edge is internal.
pub fn simple_cnm(h: &Hypergraph, early_stop: bool, variant: Variant) -> Result<SearchResult> {
    let mut engine = MergeEngine::new(h, variant)?;
    let m = h.edge_count();

    let mut q_opt = engine.q();
    let mut best_partition = engine.partition();
    let mut best_edges: Vec<usize> = engine.internal_edges().collect();
    let mut trace = Vec::new();

    // Cached modularity deltas; a delta only changes when one of the parts
    // the edge touches is merged.
    let mut delta: Vec<Option<f64>> = vec![None; m];

    while engine.internal_count() < m {
        let q_now = engine.q();
        let mut chosen: Option<(usize, f64)> = None;
        let mut q_step = -1.0;
        for (e, cached) in delta.iter_mut().enumerate() {
            if engine.is_internal(e) {
                continue;
            }
            let d = *cached.get_or_insert_with(|| engine.delta(e));
            let q = q_now + d;
            if q > q_step {
                q_step = q;
                chosen = Some((e, q));
            }
        }
        let Some((e, q)) = chosen else { break };
        let root = engine.apply(e).expect("a non-internal edge spans two parts");
        for &f in engine.incident_edges(root) {
            delta[f] = None;
        }
        trace.push(TraceStep { index: e, q });

        #[cfg(debug_assertions)]
        {
            let p = engine.partition();
            for f in 0..m {
                debug_assert_eq!(
                    engine.is_internal(f),
                    crate::modularity::is_internal(h, &p, f),
                    "state must stay a canonical edge set"
                );
            }
        }

        if q >= q_opt {
            q_opt = q;
            best_partition = engine.partition();
            best_edges = engine.internal_edges().collect();
        }
        if early_stop && q < q_opt {
            break;
        }
    }

    let q = modularity(h, &best_partition, variant)?.q;
    let mut accepted_edges = FixedBitSet::with_capacity(m);
    for e in best_edges {
        accepted_edges.insert(e);
    }
    Ok(SearchResult {
        partition: best_partition,
        q,
        accepted_edges,
        variant,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::search_space::enumerate_all_partitions;

    fn fig1() -> Hypergraph {
        Hypergraph::build(5, &[vec![0, 1, 2], vec![2, 3, 4], vec![0, 3]]).unwrap()
    }

    #[test]
    fn fig1_first_step_picks_pair_edge() {
        let r = simple_cnm(&fig1(), false, Variant::Strict).unwrap();
        assert!((r.q - 47.0 / 384.0).abs() < 1e-12);
        assert_eq!(
            r.partition,
            Partition::from_parts(5, &[vec![0, 3], vec![1], vec![2], vec![4]]).unwrap()
        );
        assert_eq!(r.trace[0].index, 2);
        assert!((r.trace[0].q - 47.0 / 384.0).abs() < 1e-12);
        // without early stop the walk ends with every edge internal
        assert!(r.trace.last().unwrap().q.abs() < 1e-12);
    }

    #[test]
    fn early_stop_ends_at_first_drop() {
        let r = simple_cnm(&fig1(), true, Variant::Strict).unwrap();
        assert_eq!(r.trace.len(), 2);
        assert!(r.trace[1].q < r.trace[0].q);
        assert!((r.q - 47.0 / 384.0).abs() < 1e-12);
    }

    #[test]
    fn path_graph_matches_enumeration() {
        let h = Hypergraph::build(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let r = simple_cnm(&h, false, Variant::Strict).unwrap();
        assert!(r.trace.len() <= 2);
        let (_, best) = enumerate_all_partitions(&h, 10).unwrap();
        assert!(r.q <= best + 1e-12);
        assert!((r.q - best).abs() < 1e-12);
    }

    #[test]
    fn variants_rescore_consistently() {
        let h = fig1();
        for v in [Variant::Strict, Variant::Majority, Variant::DegreeIndependent] {
            let r = simple_cnm(&h, false, v).unwrap();
            assert_eq!(r.variant, v);
            assert!((r.q - modularity(&h, &r.partition, v).unwrap().q).abs() < 1e-12);
        }
    }
}
