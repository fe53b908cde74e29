//! Sub-hypergraphs, the partitions their components induce, and canonical
//! representatives of the resulting equivalence classes.
//!
//! Two edge subsets are equivalent when their connected components induce
//! the same vertex partition. The canonical representative of a class is
//! its largest member: every edge lying inside one part of the class
//! partition. The strict modularity optimum always sits on one of these
//! partitions, so exhaustive search over `2^|E|` subsets suffices; the
//! Bell-number enumeration here exists as an independent check of that.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::modularity::{is_internal, strict_modularity, ModularityReport};
use crate::partition::Partition;
use crate::union_find::UnionFind;

pub const DEFAULT_EDGE_CAP: usize = 20;
pub const DEFAULT_VERTEX_CAP: usize = 10;

/// An edge subset of `h` together with the components it induces.
#[derive(Debug, Clone)]
pub struct SubHypergraphState<'a> {
    h: &'a Hypergraph,
    included: FixedBitSet,
    dsu: UnionFind,
}

impl<'a> SubHypergraphState<'a> {
    /// The empty sub-hypergraph: every vertex is its own component.
    pub fn new(h: &'a Hypergraph) -> Self {
        SubHypergraphState {
            h,
            included: FixedBitSet::with_capacity(h.edge_count()),
            dsu: UnionFind::new(h.vertex_count()),
        }
    }

    pub fn from_edges(h: &'a Hypergraph, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut state = Self::new(h);
        for e in edges {
            state.insert_edge(e);
        }
        state
    }

    /// Adds edge `e`, merging the components it touches. Returns true when
    /// the component count dropped.
    pub fn insert_edge(&mut self, e: usize) -> bool {
        self.included.insert(e);
        let mut support = self.h.edge(e).support();
        let first = support.next().expect("edges are non-empty");
        let mut merged = false;
        for v in support {
            merged |= self.dsu.union(first, v).is_some();
        }
        merged
    }

    pub fn included(&self) -> &FixedBitSet {
        &self.included
    }

    pub fn component_count(&self) -> usize {
        self.dsu.component_count()
    }

    /// The partition induced by the connected components.
    pub fn components_partition(&mut self) -> Partition {
        Partition::from_labels(&self.dsu.roots())
    }
}

/// The largest edge subset of an equivalence class and its partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRepresentative {
    pub edge_set: FixedBitSet,
    pub partition: Partition,
}

impl CanonicalRepresentative {
    pub fn edges(&self) -> Vec<usize> {
        self.edge_set.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.edge_set.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Edges lying inside one part of `a`, and the partition their components
/// induce (a refinement of `a`, equal to it when `a` is itself induced by
/// some edge subset).
pub fn canonical_representative(h: &Hypergraph, a: &Partition) -> CanonicalRepresentative {
    let mut edge_set = FixedBitSet::with_capacity(h.edge_count());
    let mut state = SubHypergraphState::new(h);
    for e in 0..h.edge_count() {
        if is_internal(h, a, e) {
            edge_set.insert(e);
            state.insert_edge(e);
        }
    }
    CanonicalRepresentative {
        edge_set,
        partition: state.components_partition(),
    }
}

/// One equivalence class found by subset enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeClass {
    pub representative: CanonicalRepresentative,
    pub report: ModularityReport,
    /// Number of edge subsets in the class.
    pub class_size: u64,
}

/// One row of the subset table: an edge subset and its induced partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRow {
    pub edges: Vec<usize>,
    pub partition: Partition,
}

fn check_edge_cap(h: &Hypergraph, cap: usize) -> Result<()> {
    let cap = cap.min(63);
    if h.edge_count() > cap {
        return Err(Error::CapExceeded {
            what: "edge count",
            got: h.edge_count(),
            cap,
        });
    }
    Ok(())
}

fn mask_partition(h: &Hypergraph, mask: u64) -> Partition {
    let mut state = SubHypergraphState::new(h);
    for e in 0..h.edge_count() {
        if mask >> e & 1 == 1 {
            state.insert_edge(e);
        }
    }
    state.components_partition()
}

/// Every edge subset in order of size, then lexicographically, with the
/// partition it induces.
pub fn enumerate_subsets(h: &Hypergraph, cap: usize) -> Result<Vec<SubsetRow>> {
    check_edge_cap(h, cap)?;
    let m = h.edge_count();
    let mut masks: Vec<u64> = (0..1u64 << m).collect();
    masks.sort_by_key(|&mask| {
        let members: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        (members.len(), members)
    });
    Ok(masks
        .into_par_iter()
        .map(|mask| SubsetRow {
            edges: (0..m).filter(|&e| mask >> e & 1 == 1).collect(),
            partition: mask_partition(h, mask),
        })
        .collect())
}

/// Enumerates all `2^|E|` edge subsets, groups them by induced partition,
/// keeps the largest subset per class and scores it with strict modularity.
///
/// Classes come back sorted by `q` descending, ties by partition.
pub fn enumerate_representatives(h: &Hypergraph, cap: usize) -> Result<Vec<RepresentativeClass>> {
    check_edge_cap(h, cap)?;
    let m = h.edge_count();
    type Classes = HashMap<Partition, (u64, u64)>;
    let merge = |mut acc: Classes, other: Classes| {
        for (p, (mask, count)) in other {
            acc.entry(p)
                .and_modify(|(best, c)| {
                    if mask.count_ones() > best.count_ones() {
                        *best = mask;
                    }
                    *c += count;
                })
                .or_insert((mask, count));
        }
        acc
    };
    let classes: Classes = (0..1u64 << m)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: Classes, mask| {
            let p = mask_partition(h, mask);
            acc.entry(p)
                .and_modify(|(best, c)| {
                    if mask.count_ones() > best.count_ones() {
                        *best = mask;
                    }
                    *c += 1;
                })
                .or_insert((mask, 1));
            acc
        })
        .reduce(HashMap::new, merge);

    let mut out: Vec<RepresentativeClass> = classes
        .into_iter()
        .map(|(partition, (mask, class_size))| {
            let mut edge_set = FixedBitSet::with_capacity(m);
            for e in 0..m {
                if mask >> e & 1 == 1 {
                    edge_set.insert(e);
                }
            }
            debug_assert_eq!(
                canonical_representative(h, &partition).edge_set,
                edge_set,
                "largest class member must be the set of internal edges"
            );
            let report = strict_modularity(h, &partition);
            RepresentativeClass {
                representative: CanonicalRepresentative {
                    edge_set,
                    partition,
                },
                report,
                class_size,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.report
            .q
            .total_cmp(&a.report.q)
            .then_with(|| a.representative.partition.cmp(&b.representative.partition))
    });
    Ok(out)
}

/// Calls `f` on every set partition of `0..n`, as restricted growth strings
/// in lexicographic order.
pub fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut rgs = vec![0usize; n];
    // prefix_max[i] = max(rgs[0..=i])
    let mut prefix_max = vec![0usize; n];
    loop {
        f(&rgs);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if rgs[i] <= prefix_max[i - 1] {
                break;
            }
            i -= 1;
        }
        rgs[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// Exhaustive strict-modularity maximization over all Bell-many
/// partitions of the vertex set. The first maximizer in lexicographic
/// restricted-growth order wins ties.
pub fn enumerate_all_partitions(h: &Hypergraph, cap: usize) -> Result<(Partition, f64)> {
    let n = h.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "vertex count",
            got: n,
            cap,
        });
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for_each_set_partition(n, |rgs| {
        let q = strict_modularity(h, &Partition::from_labels(rgs)).q;
        if best.as_ref().is_none_or(|(_, b)| q > *b) {
            best = Some((rgs.to_vec(), q));
        }
    });
    let (rgs, q) = best.expect("n >= 1 yields at least one partition");
    Ok((Partition::from_labels(&rgs), q))
}
