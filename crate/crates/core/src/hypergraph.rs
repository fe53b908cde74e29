//! Immutable hypergraph with multiset hyperedges and cached degree/volume
//! aggregates, plus the weighted 2-section projection.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A hyperedge stored as `(vertex, multiplicity)` pairs sorted by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperedge {
    members: Vec<(usize, u32)>,
    size: usize,
}

impl Hyperedge {
    /// Builds a hyperedge from a list of vertex occurrences; repeated ids
    /// raise the multiplicity.
    pub fn from_occurrences(vertices: &[usize]) -> Self {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for &v in vertices {
            *counts.entry(v).or_insert(0) += 1;
        }
        Hyperedge {
            members: counts.into_iter().collect(),
            size: vertices.len(),
        }
    }

    /// `|e|`, the number of vertex occurrences.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `(vertex, multiplicity)` pairs in ascending vertex order.
    pub fn members(&self) -> &[(usize, u32)] {
        &self.members
    }

    /// Distinct vertices of the edge in ascending order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&(v, _)| v)
    }

    pub fn multiplicity(&self, v: usize) -> u32 {
        self.members
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|i| self.members[i].1)
            .unwrap_or(0)
    }

    /// Expands the multiset back to occurrences, sorted.
    pub fn occurrences(&self) -> Vec<usize> {
        self.members
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
            .collect()
    }
}

/// A hypergraph on dense vertex ids `0..n` with an ordered multiset of edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    degree: Vec<u64>,
    d_degree: Vec<BTreeMap<usize, u64>>,
    edge_size_counts: BTreeMap<usize, usize>,
    total_volume: u64,
    labels: Option<Vec<String>>,
}

impl Hypergraph {
    /// Validates the raw edges and computes every cached aggregate.
    pub fn build(n: usize, raw_edges: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (index, raw) in raw_edges.iter().enumerate() {
            if raw.len() < 2 {
                return Err(Error::EdgeTooSmall {
                    index,
                    size: raw.len(),
                });
            }
            if let Some(&vertex) = raw.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { index, vertex, n });
            }
            edges.push(Hyperedge::from_occurrences(raw));
        }
        Ok(Self::from_edges(n, edges))
    }

    /// Like [`Hypergraph::build`] but attaches external vertex names.
    pub fn build_labeled(labels: Vec<String>, raw_edges: &[Vec<usize>]) -> Result<Self> {
        let mut h = Self::build(labels.len(), raw_edges)?;
        h.labels = Some(labels);
        Ok(h)
    }

    fn from_edges(n: usize, edges: Vec<Hyperedge>) -> Self {
        let mut degree = vec![0u64; n];
        let mut d_degree = vec![BTreeMap::new(); n];
        let mut edge_size_counts = BTreeMap::new();
        for e in &edges {
            *edge_size_counts.entry(e.size()).or_insert(0) += 1;
            for &(v, m) in e.members() {
                degree[v] += u64::from(m);
                *d_degree[v].entry(e.size()).or_insert(0) += u64::from(m);
            }
        }
        let total_volume = degree.iter().sum();
        let h = Hypergraph {
            n,
            edges,
            degree,
            d_degree,
            edge_size_counts,
            total_volume,
            labels: None,
        };
        debug_assert_eq!(
            h.total_volume,
            h.edge_size_counts
                .iter()
                .map(|(&d, &c)| (d * c) as u64)
                .sum::<u64>()
        );
        h
    }

    /// Sub-hypergraph on the same vertex set keeping the listed edges.
    pub fn with_edges(&self, indices: &[usize]) -> Hypergraph {
        let edges = indices.iter().map(|&i| self.edges[i].clone()).collect();
        let mut h = Self::from_edges(self.n, edges);
        h.labels = self.labels.clone();
        h
    }

    /// Same hypergraph with replaced vertex names.
    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(Error::PartitionSize {
                    expected: self.n,
                    got: l.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Hyperedge {
        &self.edges[i]
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    /// Degree of `v` counting only edges of size `d`.
    pub fn d_degree(&self, v: usize, d: usize) -> u64 {
        self.d_degree[v].get(&d).copied().unwrap_or(0)
    }

    /// Map `d -> |E_d|`, only for sizes that occur.
    pub fn edge_size_counts(&self) -> &BTreeMap<usize, usize> {
        &self.edge_size_counts
    }

    pub fn edges_of_size(&self, d: usize) -> usize {
        self.edge_size_counts.get(&d).copied().unwrap_or(0)
    }

    /// `vol(V)`.
    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    /// Sum of degrees over `vertices`.
    pub fn volume(&self, vertices: &[usize]) -> u64 {
        vertices.iter().map(|&v| self.degree[v]).sum()
    }

    /// Sum of size-`d` degrees over `vertices`.
    pub fn d_volume(&self, vertices: &[usize], d: usize) -> u64 {
        vertices.iter().map(|&v| self.d_degree(v, d)).sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of `v`; the decimal id when no label table is attached.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Projects every hyperedge onto a clique.
    ///
    /// A vertex pair `{u, v}` inside edge `e` gets `m_e(u) * m_e(v)` pair
    /// slots and a vertex with multiplicity `m` gets `C(m, 2)` loop slots;
    /// each slot is weighted 1 ([`TwoSectionWeighting::Uniform`]) or
    /// `1 / (|e| - 1)` ([`TwoSectionWeighting::DegreePreserving`]).
    pub fn two_section(&self, weighting: TwoSectionWeighting) -> WeightedGraph {
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for e in &self.edges {
            let factor = match weighting {
                TwoSectionWeighting::Uniform => 1.0,
                TwoSectionWeighting::DegreePreserving => 1.0 / (e.size() - 1) as f64,
            };
            let members = e.members();
            for (i, &(u, mu)) in members.iter().enumerate() {
                if mu >= 2 {
                    let slots = f64::from(mu) * f64::from(mu - 1) / 2.0;
                    *pairs.entry((u, u)).or_insert(0.0) += slots * factor;
                }
                for &(v, mv) in &members[i + 1..] {
                    *pairs.entry((u, v)).or_insert(0.0) += f64::from(mu) * f64::from(mv) * factor;
                }
            }
        }
        WeightedGraph::from_pairs(self.n, pairs)
    }
}

/// Weighting scheme for the 2-section projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TwoSectionWeighting {
    /// Every clique pair weighs 1.
    Uniform,
    /// Every clique pair weighs `1/(|e|-1)`, so weighted degrees equal
    /// hypergraph degrees.
    #[default]
    DegreePreserving,
}

/// Undirected weighted graph with optional loops, keyed by `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    pair_weights: BTreeMap<(usize, usize), f64>,
    total_weight: f64,
}

impl WeightedGraph {
    /// Builds a graph from unordered pairs; duplicate pairs accumulate and
    /// zero weights are dropped.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut pairs = BTreeMap::new();
        for (index, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    index,
                    vertex: u.max(v),
                    n,
                });
            }
            *pairs.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        Ok(Self::from_pairs(n, pairs))
    }

    fn from_pairs(n: usize, mut pair_weights: BTreeMap<(usize, usize), f64>) -> Self {
        pair_weights.retain(|_, w| *w != 0.0);
        let total_weight = pair_weights.values().sum();
        WeightedGraph {
            n,
            pair_weights,
            total_weight,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn pair_weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.pair_weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.pair_weights
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Weighted degree per vertex; a loop counts twice.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for (&(u, v), &w) in &self.pair_weights {
            deg[u] += w;
            deg[v] += w;
        }
        deg
    }
}
