//! Chung-Lu style random hypergraph model that preserves expected degrees.
//!
//! For each size `d` with `|E_d| > 0`, a multiset `e` of size `d` appears
//! with probability `|E_d| * multinomial(d; m) * prod p(i)^m_i` where
//! `p(i) = deg(v_i) / vol(V)`.

use std::collections::BTreeMap;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph};

/// Degree sequence and per-size edge counts that define the model.
#[derive(Debug, Clone, PartialEq)]
pub struct NullModelParams {
    degrees: Vec<u64>,
    total_volume: u64,
    p: Vec<f64>,
    edge_size_counts: BTreeMap<usize, usize>,
}

impl NullModelParams {
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        let total_volume = h.total_volume();
        let p = h
            .degrees()
            .iter()
            .map(|&d| {
                if total_volume == 0 {
                    0.0
                } else {
                    d as f64 / total_volume as f64
                }
            })
            .collect();
        NullModelParams {
            degrees: h.degrees().to_vec(),
            total_volume,
            p,
            edge_size_counts: h.edge_size_counts().clone(),
        }
    }

    /// `p(i) = deg(v_i) / vol(V)`.
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn edge_size_counts(&self) -> &BTreeMap<usize, usize> {
        &self.edge_size_counts
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_size_counts.values().sum()
    }

    /// `vol(A) / vol(V)`, computed from integer volumes.
    pub fn volume_ratio(&self, vertices: &[usize]) -> f64 {
        if self.total_volume == 0 {
            return 0.0;
        }
        let vol: u64 = vertices.iter().map(|&v| self.degrees[v]).sum();
        vol as f64 / self.total_volume as f64
    }

    /// Probability that the model generates the multiset `e`.
    ///
    /// Values above 1 are returned as computed, with a logged warning.
    pub fn edge_probability(&self, e: &Hyperedge) -> Result<f64> {
        let d = e.size();
        let count = self.edge_size_counts.get(&d).copied().unwrap_or(0);
        if count == 0 {
            return Err(Error::NoEdgesOfSize(d));
        }
        let mut coefficient = 1.0;
        let mut placed = 0u32;
        let mut product = 1.0;
        for &(v, m) in e.members() {
            for j in 1..=m {
                placed += 1;
                coefficient *= f64::from(placed) / f64::from(j);
            }
            product *= self.p[v].powi(m as i32);
        }
        let prob = count as f64 * coefficient * product;
        if prob > 1.0 {
            warn!("edge probability {prob} exceeds 1 for a size-{d} edge");
        }
        Ok(prob)
    }

    /// Expected number of model edges lying entirely inside `vertices`:
    /// `sum_d |E_d| (vol(A)/vol(V))^d`.
    pub fn expected_edge_contribution(&self, vertices: &[usize]) -> f64 {
        self.strict_expectation(self.volume_ratio(vertices))
    }

    /// [`Self::expected_edge_contribution`] for a precomputed volume ratio.
    pub fn strict_expectation(&self, ratio: f64) -> f64 {
        self.edge_size_counts
            .iter()
            .map(|(&d, &c)| c as f64 * ratio.powi(d as i32))
            .sum()
    }

    /// Expected number of model edges with more than half of their
    /// occurrences inside `vertices`.
    pub fn majority_expected_contribution(&self, vertices: &[usize]) -> f64 {
        self.majority_expectation(self.volume_ratio(vertices))
    }

    /// [`Self::majority_expected_contribution`] for a precomputed ratio.
    pub fn majority_expectation(&self, ratio: f64) -> f64 {
        self.edge_size_counts
            .iter()
            .map(|(&d, &c)| c as f64 * binomial_upper_tail(d, ratio))
            .sum()
    }

    /// Draws one hypergraph: exactly `|E_d|` edges per size `d`, each made
    /// of `d` independent degree-proportional vertex draws.
    pub fn sample(&self, seed: u64) -> Result<Hypergraph> {
        if self.total_volume == 0 {
            return Err(Error::Empty("the model has no edges to sample".into()));
        }
        let mut cumulative = Vec::with_capacity(self.degrees.len());
        let mut acc = 0u64;
        for &d in &self.degrees {
            acc += d;
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::with_capacity(self.edge_count());
        for (&d, &count) in &self.edge_size_counts {
            for _ in 0..count {
                let edge = (0..d)
                    .map(|_| {
                        let ticket = rng.random_range(0..self.total_volume);
                        cumulative.partition_point(|&c| c <= ticket)
                    })
                    .collect();
                edges.push(edge);
            }
        }
        Hypergraph::build(self.degrees.len(), &edges)
    }
}

/// Convenience wrapper around [`NullModelParams::sample`].
pub fn sample_null_model(params: &NullModelParams, seed: u64) -> Result<Hypergraph> {
    params.sample(seed)
}

/// `P(Binomial(d, r) > d/2)`, i.e. at least `floor(d/2) + 1` successes.
pub fn binomial_upper_tail(d: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r >= 1.0 {
        return 1.0;
    }
    let mut total = 0.0;
    let mut coefficient = 1.0;
    for k in 0..=d {
        if k > 0 {
            coefficient *= (d - k + 1) as f64 / k as f64;
        }
        if 2 * k > d {
            total += coefficient * r.powi(k as i32) * (1.0 - r).powi((d - k) as i32);
        }
    }
    total
}
