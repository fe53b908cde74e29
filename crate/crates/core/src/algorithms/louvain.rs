use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mix_seed, SearchResult, TraceStep};
use crate::hypergraph::WeightedGraph;
use crate::modularity::{graph_modularity, Variant};
use crate::partition::Partition;

// Minimum modularity gain (in units of W * q) for a local move.
const MOVE_EPSILON: f64 = 1e-12;

/// Working graph for one Louvain level: adjacency without loops, plus the
/// loop weight and strength of each node.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_graph(g: &WeightedGraph) -> Self {
        let n = g.vertex_count();
        let mut adjacency = vec![Vec::new(); n];
        let mut loops = vec![0.0; n];
        for (&(u, v), &w) in g.pair_weights() {
            if u == v {
                loops[u] += w;
            } else {
                adjacency[u].push((v, w));
                adjacency[v].push((u, w));
            }
        }
        Self::with_parts(adjacency, loops)
    }

    fn with_parts(adjacency: Vec<Vec<(usize, f64)>>, loops: Vec<f64>) -> Self {
        let strength = adjacency
            .iter()
            .zip(&loops)
            .map(|(adj, &l)| adj.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l)
            .collect();
        Level {
            adjacency,
            loops,
            strength,
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Local moving phase. Returns each node's community (canonical ids)
    /// and whether any node moved.
    fn local_moves(&self, total: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut tot = self.strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut links = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let k = self.strength[i];
                if k == 0.0 {
                    continue;
                }
                let current = community[i];
                for &(j, w) in &self.adjacency[i] {
                    let c = community[j];
                    if links[c] == 0.0 {
                        touched.push(c);
                    }
                    links[c] += w;
                }
                tot[current] -= k;
                let gain = |c: usize, links: &[f64], tot: &[f64]| links[c] - tot[c] * k / (2.0 * total);
                let mut best = current;
                let mut best_gain = gain(current, &links, &tot);
                for &c in &touched {
                    let g = gain(c, &links, &tot);
                    if c != current && g > best_gain + MOVE_EPSILON {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += k;
                if best != current {
                    community[i] = best;
                    moved = true;
                    moved_any = true;
                }
                for &c in &touched {
                    links[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        let canonical = Partition::from_labels(&community);
        (canonical.assignment().to_vec(), moved_any)
    }

    fn aggregate(&self, community: &[usize]) -> Level {
        let parts = community.iter().max().map_or(0, |&c| c + 1);
        let mut loops = vec![0.0; parts];
        let mut between: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![std::collections::BTreeMap::new(); parts];
        for i in 0..self.len() {
            let ci = community[i];
            loops[ci] += self.loops[i];
            for &(j, w) in &self.adjacency[i] {
                // each undirected pair is visited from both ends
                if j < i {
                    continue;
                }
                let cj = community[j];
                if ci == cj {
                    loops[ci] += w;
                } else {
                    *between[ci].entry(cj).or_insert(0.0) += w;
                    *between[cj].entry(ci).or_insert(0.0) += w;
                }
            }
        }
        let adjacency = between.into_iter().map(|m| m.into_iter().collect()).collect();
        Level::with_parts(adjacency, loops)
    }
}

/// Two-phase Louvain modularity optimization on a weighted graph.
///
/// Vertex visit order is shuffled per level from `seed`. Levels repeat
/// until local moving changes nothing; the trace holds the modularity of
/// the original graph after each level. Isolated vertices stay singletons,
/// and an edgeless graph yields the singleton partition with q = 0.
pub fn louvain(g: &WeightedGraph, seed: u64) -> SearchResult {
    let n = g.vertex_count();
    let total = g.total_weight();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();

    if total > 0.0 {
        let mut level = Level::from_graph(g);
        let mut depth = 0u64;
        loop {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed ^ mix_seed(depth)));
            let (community, moved) = level.local_moves(total, &mut rng);
            if !moved {
                break;
            }
            for m in membership.iter_mut() {
                *m = community[*m];
            }
            let q = graph_modularity(g, &Partition::from_labels(&membership)).q;
            trace.push(TraceStep {
                index: depth as usize,
                q,
            });
            level = level.aggregate(&community);
            depth += 1;
        }
    }

    let partition = Partition::from_labels(&membership);
    let q = graph_modularity(g, &partition).q;
    SearchResult {
        partition,
        q,
        accepted_edges: FixedBitSet::new(),
        variant: Variant::Graph2Section,
        trace,
    }
}
