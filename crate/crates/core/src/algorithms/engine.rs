//! Incremental modularity bookkeeping for edge-driven part merges.
//!
//! Both hypergraph heuristics grow a sub-hypergraph one edge at a time, and
//! each insertion merges the parts its support touches. The engine keeps
//! per-part volumes (overall and per edge size), a per-part list of incident
//! edges, and the set of edges that currently count towards the edge
//! contribution, so that scoring a candidate merge costs time proportional
//! to the touched parts rather than the whole hypergraph.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::modularity::Variant;
use crate::null_model::binomial_upper_tail;
use crate::partition::Partition;
use crate::union_find::UnionFind;

pub(crate) struct MergeEngine<'a> {
    h: &'a Hypergraph,
    variant: Variant,
    dsu: UnionFind,
    // (size d, |E_d|) in ascending size order
    layers: Vec<(usize, usize)>,
    // indexed by root
    volume: Vec<u64>,
    // indexed by root, then layer
    layer_volume: Vec<Vec<u64>>,
    incident: Vec<Vec<usize>>,
    counted: Vec<bool>,
    counted_total: usize,
    internal: Vec<bool>,
    internal_total: usize,
    tax: f64,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'a> MergeEngine<'a> {
    pub fn new(h: &'a Hypergraph, variant: Variant) -> Result<Self> {
        if variant == Variant::Graph2Section {
            return Err(Error::UnsupportedVariant(
                "graph2s cannot drive a hypergraph search; use louvain".into(),
            ));
        }
        let n = h.vertex_count();
        let m = h.edge_count();
        let layers: Vec<(usize, usize)> =
            h.edge_size_counts().iter().map(|(&d, &c)| (d, c)).collect();
        let volume = h.degrees().to_vec();
        let layer_volume = (0..n)
            .map(|v| layers.iter().map(|&(d, _)| h.d_degree(v, d)).collect())
            .collect();
        let mut incident = vec![Vec::new(); n];
        for (e, edge) in h.edges().iter().enumerate() {
            for v in edge.support() {
                incident[v].push(e);
            }
        }
        let mut engine = MergeEngine {
            h,
            variant,
            dsu: UnionFind::new(n),
            layers,
            volume,
            layer_volume,
            incident,
            counted: vec![false; m],
            counted_total: 0,
            internal: vec![false; m],
            internal_total: 0,
            tax: 0.0,
            stamp: vec![0; m],
            epoch: 0,
        };
        // Singletons: loop-only multiset edges are already internal.
        for e in 0..m {
            if engine.edge_internal_now(e) {
                engine.internal[e] = true;
                engine.internal_total += 1;
            }
            if engine.edge_counts_now(e) {
                engine.counted[e] = true;
                engine.counted_total += 1;
            }
        }
        engine.tax = engine.full_tax();
        Ok(engine)
    }

    fn m(&self) -> f64 {
        self.h.edge_count() as f64
    }

    fn ratio(&self, vol: u64) -> f64 {
        vol as f64 / self.h.total_volume() as f64
    }

    fn part_tax(&self, root: usize) -> f64 {
        let m = self.m();
        match self.variant {
            Variant::Strict => {
                let r = self.ratio(self.volume[root]);
                self.layers
                    .iter()
                    .map(|&(d, c)| c as f64 * r.powi(d as i32))
                    .sum::<f64>()
                    / m
            }
            Variant::Majority => {
                let r = self.ratio(self.volume[root]);
                self.layers
                    .iter()
                    .map(|&(d, c)| c as f64 * binomial_upper_tail(d, r))
                    .sum::<f64>()
                    / m
            }
            Variant::DegreeIndependent => {
                self.layers
                    .iter()
                    .zip(&self.layer_volume[root])
                    .map(|(&(d, c), &lv)| {
                        let r = lv as f64 / (d * c) as f64;
                        c as f64 * r.powi(d as i32)
                    })
                    .sum::<f64>()
                    / m
            }
            Variant::Graph2Section => unreachable!(),
        }
    }

    // Tax of the part obtained by merging `roots`.
    fn merged_tax(&self, roots: &[usize]) -> f64 {
        let m = self.m();
        match self.variant {
            Variant::Strict | Variant::Majority => {
                let vol: u64 = roots.iter().map(|&r| self.volume[r]).sum();
                let r = self.ratio(vol);
                self.layers
                    .iter()
                    .map(|&(d, c)| {
                        let p = if self.variant == Variant::Strict {
                            r.powi(d as i32)
                        } else {
                            binomial_upper_tail(d, r)
                        };
                        c as f64 * p
                    })
                    .sum::<f64>()
                    / m
            }
            Variant::DegreeIndependent => {
                self.layers
                    .iter()
                    .enumerate()
                    .map(|(l, &(d, c))| {
                        let lv: u64 = roots.iter().map(|&r| self.layer_volume[r][l]).sum();
                        let r = lv as f64 / (d * c) as f64;
                        c as f64 * r.powi(d as i32)
                    })
                    .sum::<f64>()
                    / m
            }
            Variant::Graph2Section => unreachable!(),
        }
    }

    fn full_tax(&mut self) -> f64 {
        if self.h.edge_count() == 0 {
            return 0.0;
        }
        let roots: Vec<usize> = (0..self.h.vertex_count())
            .filter(|&v| self.dsu.find(v) == v)
            .collect();
        roots.iter().map(|&r| self.part_tax(r)).sum()
    }

    fn edge_internal_now(&mut self, e: usize) -> bool {
        let mut support = self.h.edge(e).support();
        let first = support.next().expect("edges are non-empty");
        let root = self.dsu.find(first);
        support.all(|v| self.dsu.find(v) == root)
    }

    fn edge_counts_now(&mut self, e: usize) -> bool {
        match self.variant {
            Variant::Majority => {
                let edge = self.h.edge(e);
                let mut counts: Vec<(usize, usize)> = Vec::new();
                for &(v, mult) in edge.members() {
                    let r = self.dsu.find(v);
                    match counts.iter_mut().find(|(q, _)| *q == r) {
                        Some((_, c)) => *c += mult as usize,
                        None => counts.push((r, mult as usize)),
                    }
                }
                2 * counts.iter().map(|&(_, c)| c).max().unwrap_or(0) > edge.size()
            }
            _ => self.edge_internal_now(e),
        }
    }

    // Whether `e` would count if all parts in `roots` were merged.
    fn edge_counts_after(&mut self, e: usize, roots: &[usize]) -> bool {
        let edge = self.h.edge(e);
        match self.variant {
            Variant::Majority => {
                let merged = usize::MAX;
                let mut counts: Vec<(usize, usize)> = Vec::new();
                for &(v, mult) in edge.members() {
                    let mut r = self.dsu.find(v);
                    if roots.contains(&r) {
                        r = merged;
                    }
                    match counts.iter_mut().find(|(q, _)| *q == r) {
                        Some((_, c)) => *c += mult as usize,
                        None => counts.push((r, mult as usize)),
                    }
                }
                2 * counts.iter().map(|&(_, c)| c).max().unwrap_or(0) > edge.size()
            }
            _ => edge.support().all(|v| {
                let r = self.dsu.find(v);
                roots.contains(&r)
            }),
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Distinct part roots touched by edge `e`.
    pub fn touched_roots(&mut self, e: usize) -> Vec<usize> {
        let mut roots: Vec<usize> = Vec::with_capacity(4);
        let edge = self.h.edge(e);
        for v in edge.support() {
            let r = self.dsu.find(v);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        roots
    }

    /// Current modularity under the engine's variant.
    pub fn q(&self) -> f64 {
        if self.h.edge_count() == 0 {
            return 0.0;
        }
        self.counted_total as f64 / self.m() - self.tax
    }

    /// Change in modularity if edge `e` were added.
    pub fn delta(&mut self, e: usize) -> f64 {
        let roots = self.touched_roots(e);
        if roots.len() < 2 {
            return 0.0;
        }
        let old_tax: f64 = roots.iter().map(|&r| self.part_tax(r)).sum();
        let new_tax = self.merged_tax(&roots);
        let epoch = self.next_epoch();
        let mut gained = 0usize;
        for &r in &roots {
            for i in 0..self.incident[r].len() {
                let f = self.incident[r][i];
                if self.stamp[f] == epoch {
                    continue;
                }
                self.stamp[f] = epoch;
                if !self.counted[f] && self.edge_counts_after(f, &roots) {
                    gained += 1;
                }
            }
        }
        gained as f64 / self.m() - (new_tax - old_tax)
    }

    /// Modularity after adding edge `e`, without changing state.
    pub fn evaluate(&mut self, e: usize) -> f64 {
        self.q() + self.delta(e)
    }

    /// Adds edge `e` and merges the parts it touches. Returns the new root
    /// when a merge happened.
    pub fn apply(&mut self, e: usize) -> Option<usize> {
        let roots = self.touched_roots(e);
        if roots.len() < 2 {
            return None;
        }
        let old_tax: f64 = roots.iter().map(|&r| self.part_tax(r)).sum();
        let new_tax = self.merged_tax(&roots);

        let mut root = roots[0];
        for &r in &roots[1..] {
            root = self.dsu.union(root, r).expect("distinct roots");
        }
        let volume: u64 = roots.iter().map(|&r| self.volume[r]).sum();
        let layer_volume: Vec<u64> = (0..self.layers.len())
            .map(|l| roots.iter().map(|&r| self.layer_volume[r][l]).sum())
            .collect();
        let mut incident = std::mem::take(&mut self.incident[root]);
        for &r in &roots {
            if r != root {
                incident.append(&mut self.incident[r]);
            }
        }
        incident.sort_unstable();
        incident.dedup();
        self.volume[root] = volume;
        self.layer_volume[root] = layer_volume;
        self.tax += new_tax - old_tax;

        for &f in &incident {
            if !self.internal[f] && self.edge_internal_now(f) {
                self.internal[f] = true;
                self.internal_total += 1;
            }
            if !self.counted[f] && self.edge_counts_now(f) {
                self.counted[f] = true;
                self.counted_total += 1;
            }
        }
        self.incident[root] = incident;
        Some(root)
    }

    /// Edges incident to the part rooted at `root`.
    pub fn incident_edges(&self, root: usize) -> &[usize] {
        &self.incident[root]
    }

    /// Whether the support of `e` lies inside one part.
    pub fn is_internal(&self, e: usize) -> bool {
        self.internal[e]
    }

    pub fn internal_count(&self) -> usize {
        self.internal_total
    }

    /// Indices of edges inside one part (the canonical edge set).
    pub fn internal_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.internal
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| e)
    }

    pub fn partition(&mut self) -> Partition {
        Partition::from_labels(&self.dsu.roots())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modularity::modularity;

    #[test]
    fn incremental_matches_scratch() {
        let h = Hypergraph::build(
            7,
            &[
                vec![0, 1, 2],
                vec![2, 3, 4],
                vec![0, 3],
                vec![4, 5, 6, 6],
                vec![5, 6],
                vec![1, 1],
            ],
        )
        .unwrap();
        for variant in [Variant::Strict, Variant::Majority, Variant::DegreeIndependent] {
            let mut engine = MergeEngine::new(&h, variant).unwrap();
            let p = engine.partition();
            assert!((engine.q() - modularity(&h, &p, variant).unwrap().q).abs() < 1e-12);
            for e in [2, 4, 0, 3, 1, 5] {
                let predicted = engine.evaluate(e);
                engine.apply(e);
                let p = engine.partition();
                let scratch = modularity(&h, &p, variant).unwrap().q;
                assert!((predicted - scratch).abs() < 1e-12, "{variant} edge {e}");
                assert!((engine.q() - scratch).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_graph_variant() {
        let h = Hypergraph::build(2, &[vec![0, 1]]).unwrap();
        assert!(MergeEngine::new(&h, Variant::Graph2Section).is_err());
    }
}
