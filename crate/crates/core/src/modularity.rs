//! Modularity functionals: strict, majority, degree-independent and general
//! independent hypergraph modularity, and weighted graph modularity for the
//! 2-section baseline.
//!
//! Every variant is `edge contribution - degree tax`, both normalized by the
//! number of edges (or total weight for graphs). A hypergraph without edges
//! scores 0 for every partition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, TwoSectionWeighting, WeightedGraph};
use crate::null_model::binomial_upper_tail;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "strict")]
    Strict,
    #[serde(rename = "majority")]
    Majority,
    #[serde(rename = "di")]
    DegreeIndependent,
    #[serde(rename = "graph2s")]
    Graph2Section,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Strict,
        Variant::Majority,
        Variant::DegreeIndependent,
        Variant::Graph2Section,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Strict => "strict",
            Variant::Majority => "majority",
            Variant::DegreeIndependent => "di",
            Variant::Graph2Section => "graph2s",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnsupportedVariant(s.to_string()))
    }
}

/// Edge contribution, degree tax and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub edge_contribution: f64,
    pub degree_tax: f64,
    pub q: f64,
    pub variant: Variant,
}

impl ModularityReport {
    pub fn new(edge_contribution: f64, degree_tax: f64, variant: Variant) -> Self {
        ModularityReport {
            edge_contribution,
            degree_tax,
            q: edge_contribution - degree_tax,
            variant,
        }
    }
}

/// True when the support of edge `e` lies inside one part.
pub(crate) fn is_internal(h: &Hypergraph, a: &Partition, e: usize) -> bool {
    let mut support = h.edge(e).support();
    let first = a.part_of(support.next().expect("edges are non-empty"));
    support.all(|v| a.part_of(v) == first)
}

/// True when some part holds more than half of the edge's occurrences.
pub(crate) fn has_majority(h: &Hypergraph, a: &Partition, e: usize) -> bool {
    let edge = h.edge(e);
    let mut counts: Vec<(usize, u32)> = Vec::with_capacity(edge.members().len());
    for &(v, m) in edge.members() {
        let p = a.part_of(v);
        match counts.iter_mut().find(|(q, _)| *q == p) {
            Some((_, c)) => *c += m,
            None => counts.push((p, m)),
        }
    }
    let best = counts.iter().map(|&(_, c)| c as usize).max().unwrap_or(0);
    2 * best > edge.size()
}

fn part_volumes(h: &Hypergraph, a: &Partition) -> Vec<u64> {
    let mut vols = vec![0u64; a.part_count()];
    for v in 0..h.vertex_count() {
        vols[a.part_of(v)] += h.degree(v);
    }
    vols
}

fn part_d_volumes(h: &Hypergraph, a: &Partition, d: usize) -> Vec<u64> {
    let mut vols = vec![0u64; a.part_count()];
    for v in 0..h.vertex_count() {
        vols[a.part_of(v)] += h.d_degree(v, d);
    }
    vols
}

/// Fraction of edges whose support lies inside one part.
pub fn strict_edge_contribution(h: &Hypergraph, a: &Partition) -> f64 {
    debug_assert_eq!(h.vertex_count(), a.vertex_count());
    let m = h.edge_count();
    if m == 0 {
        return 0.0;
    }
    let internal = (0..m).filter(|&e| is_internal(h, a, e)).count();
    internal as f64 / m as f64
}

/// `(1/|E|) sum_d |E_d| sum_i (vol(A_i)/vol(V))^d`.
pub fn strict_degree_tax(h: &Hypergraph, a: &Partition) -> f64 {
    debug_assert_eq!(h.vertex_count(), a.vertex_count());
    let m = h.edge_count();
    if m == 0 {
        return 0.0;
    }
    let total = h.total_volume() as f64;
    let ratios: Vec<f64> = part_volumes(h, a)
        .into_iter()
        .map(|v| v as f64 / total)
        .collect();
    let mut tax = 0.0;
    for (&d, &count) in h.edge_size_counts() {
        let s: f64 = ratios.iter().map(|r| r.powi(d as i32)).sum();
        tax += count as f64 * s;
    }
    tax / m as f64
}

pub fn strict_modularity(h: &Hypergraph, a: &Partition) -> ModularityReport {
    ModularityReport::new(
        strict_edge_contribution(h, a),
        strict_degree_tax(h, a),
        Variant::Strict,
    )
}

/// Size-weighted sum of per-layer strict modularities, each layer `H_d`
/// using its own volumes.
pub fn degree_independent_modularity(h: &Hypergraph, a: &Partition) -> ModularityReport {
    let m = h.edge_count();
    if m == 0 {
        return ModularityReport::new(0.0, 0.0, Variant::DegreeIndependent);
    }
    let mut tax = 0.0;
    for (&d, &count) in h.edge_size_counts() {
        let layer_total = (d * count) as f64;
        let s: f64 = part_d_volumes(h, a, d)
            .into_iter()
            .filter(|&v| v > 0)
            .map(|v| (v as f64 / layer_total).powi(d as i32))
            .sum();
        tax += count as f64 * s;
    }
    ModularityReport::new(
        strict_edge_contribution(h, a),
        tax / m as f64,
        Variant::DegreeIndependent,
    )
}

/// `sum_i w_i q_{H_i}(A)` over a grouping of the edge indices.
///
/// `weights` defaults to `|E_i| / |E|`. Each group is scored as its own
/// hypergraph on the full vertex set.
pub fn independent_modularity(
    h: &Hypergraph,
    a: &Partition,
    grouping: &[Vec<usize>],
    weights: Option<&[f64]>,
) -> Result<f64> {
    let m = h.edge_count();
    let mut seen = vec![false; m];
    for (g, group) in grouping.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::InvalidGrouping(format!("group {g} is empty")));
        }
        for &e in group {
            if e >= m || seen[e] {
                return Err(Error::InvalidGrouping(format!(
                    "edge {e} is out of range or listed twice"
                )));
            }
            seen[e] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidGrouping(
            "groups do not cover every edge".into(),
        ));
    }
    let natural: Vec<f64>;
    let weights = match weights {
        Some(w) => {
            if w.len() != grouping.len() {
                return Err(Error::InvalidGrouping(format!(
                    "{} weights for {} groups",
                    w.len(),
                    grouping.len()
                )));
            }
            if w.iter().any(|&x| x < 0.0) {
                return Err(Error::InvalidGrouping("negative weight".into()));
            }
            let s: f64 = w.iter().sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidGrouping(format!(
                    "weights sum to {s}, not 1"
                )));
            }
            w
        }
        None => {
            natural = grouping
                .iter()
                .map(|g| g.len() as f64 / m as f64)
                .collect();
            &natural
        }
    };
    Ok(grouping
        .iter()
        .zip(weights)
        .map(|(group, &w)| w * strict_modularity(&h.with_edges(group), a).q)
        .sum())
}

/// Fraction of edges with more than half their occurrences in one part.
pub fn majority_edge_contribution(h: &Hypergraph, a: &Partition) -> f64 {
    let m = h.edge_count();
    if m == 0 {
        return 0.0;
    }
    let counted = (0..m).filter(|&e| has_majority(h, a, e)).count();
    counted as f64 / m as f64
}

/// `(1/|E|) sum_d |E_d| sum_i P(Bin(d, vol(A_i)/vol(V)) > d/2)`.
pub fn majority_degree_tax(h: &Hypergraph, a: &Partition) -> f64 {
    let m = h.edge_count();
    if m == 0 {
        return 0.0;
    }
    let total = h.total_volume() as f64;
    let ratios: Vec<f64> = part_volumes(h, a)
        .into_iter()
        .map(|v| v as f64 / total)
        .collect();
    let mut tax = 0.0;
    for (&d, &count) in h.edge_size_counts() {
        let s: f64 = ratios.iter().map(|&r| binomial_upper_tail(d, r)).sum();
        tax += count as f64 * s;
    }
    tax / m as f64
}

pub fn majority_modularity(h: &Hypergraph, a: &Partition) -> ModularityReport {
    ModularityReport::new(
        majority_edge_contribution(h, a),
        majority_degree_tax(h, a),
        Variant::Majority,
    )
}

/// Weighted graph modularity `sum_i w_in(A_i)/W - sum_i vol_w(A_i)^2/(4W^2)`.
pub fn graph_modularity(g: &WeightedGraph, a: &Partition) -> ModularityReport {
    debug_assert_eq!(g.vertex_count(), a.vertex_count());
    let total = g.total_weight();
    if total == 0.0 {
        return ModularityReport::new(0.0, 0.0, Variant::Graph2Section);
    }
    let mut inside = vec![0.0; a.part_count()];
    let mut vols = vec![0.0; a.part_count()];
    for (&(u, v), &w) in g.pair_weights() {
        let (pu, pv) = (a.part_of(u), a.part_of(v));
        if pu == pv {
            inside[pu] += w;
        }
        vols[pu] += w;
        vols[pv] += w;
    }
    let ec = inside.iter().sum::<f64>() / total;
    let tax = vols.iter().map(|v| v * v).sum::<f64>() / (4.0 * total * total);
    ModularityReport::new(ec, tax, Variant::Graph2Section)
}

/// Scores `a` with any variant; the graph variant uses the
/// degree-preserving 2-section.
pub fn modularity(h: &Hypergraph, a: &Partition, variant: Variant) -> Result<ModularityReport> {
    a.check_size(h.vertex_count())?;
    Ok(match variant {
        Variant::Strict => strict_modularity(h, a),
        Variant::Majority => majority_modularity(h, a),
        Variant::DegreeIndependent => degree_independent_modularity(h, a),
        Variant::Graph2Section => graph_modularity(
            &h.two_section(TwoSectionWeighting::DegreePreserving),
            a,
        ),
    })
}
