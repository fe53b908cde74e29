//! Partition quality and comparison: hyperedge cut profile, adjusted Rand
//! index, and least-squares regression for modularity-vs-cut analyses.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::modularity::is_internal;
use crate::partition::Partition;

/// How a partition cuts the hyperedges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutProfile {
    /// Fraction of edges whose support spans two or more parts.
    pub hcut: f64,
    /// Per edge size `d` (only sizes present), fraction of size-`d` edges cut.
    pub cut_by_size: BTreeMap<usize, f64>,
    pub part_count: usize,
    pub singleton_count: usize,
}

impl CutProfile {
    /// Cut proportions with sizes from `bucket_from` upward pooled into one
    /// bucket keyed by `bucket_from`.
    pub fn bucketed(&self, h: &Hypergraph, bucket_from: usize) -> BTreeMap<usize, f64> {
        let mut cut: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for (&d, &p) in &self.cut_by_size {
            let count = h.edges_of_size(d);
            let entry = cut.entry(d.min(bucket_from)).or_insert((0.0, 0));
            entry.0 += p * count as f64;
            entry.1 += count;
        }
        cut.into_iter()
            .map(|(d, (c, total))| (d, c / total as f64))
            .collect()
    }
}

/// Edges whose support spans at least two parts count as cut.
pub fn cut_profile(h: &Hypergraph, a: &Partition) -> CutProfile {
    let mut cut_counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cut_total = 0usize;
    for (e, edge) in h.edges().iter().enumerate() {
        let entry = cut_counts.entry(edge.size()).or_insert(0);
        if !is_internal(h, a, e) {
            *entry += 1;
            cut_total += 1;
        }
    }
    let cut_by_size = cut_counts
        .into_iter()
        .map(|(d, c)| (d, c as f64 / h.edges_of_size(d) as f64))
        .collect();
    let hcut = if h.edge_count() == 0 {
        0.0
    } else {
        cut_total as f64 / h.edge_count() as f64
    };
    CutProfile {
        hcut,
        cut_by_size,
        part_count: a.part_count(),
        singleton_count: a.part_sizes().iter().filter(|&&s| s == 1).count(),
    }
}

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Hubert-Arabie adjusted Rand index; 1 when the chance-corrected
/// denominator vanishes (identical trivial partitions).
pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    if a.vertex_count() != b.vertex_count() {
        return Err(Error::PartitionSize {
            expected: a.vertex_count(),
            got: b.vertex_count(),
        });
    }
    let n = a.vertex_count() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    for v in 0..a.vertex_count() {
        *table.entry((a.part_of(v), b.part_of(v))).or_insert(0) += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let rows: f64 = a.part_sizes().iter().map(|&s| choose2(s as u64)).sum();
    let cols: f64 = b.part_sizes().iter().map(|&s| choose2(s as u64)).sum();
    let pairs = choose2(n);
    if pairs == 0.0 {
        return Ok(1.0);
    }
    let expected = rows * cols / pairs;
    let max = (rows + cols) / 2.0;
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Ordinary least squares of `y` on `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub pearson_r: f64,
    pub samples: usize,
}

/// Regresses the second coordinate (Hcut) on the first (modularity).
pub fn correlation_report(samples: &[(f64, f64)]) -> Result<Regression> {
    if samples.len() < 3 {
        return Err(Error::DegenerateRegression(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in samples {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression(
            "the predictor is constant".into(),
        ));
    }
    let slope = sxy / sxx;
    let (r_squared, pearson_r) = if syy == 0.0 {
        (0.0, 0.0)
    } else {
        let r = sxy / (sxx.sqrt() * syy.sqrt());
        (r * r, r)
    };
    Ok(Regression {
        slope,
        intercept: mean_y - slope * mean_x,
        r_squared,
        pearson_r,
        samples: samples.len(),
    })
}
