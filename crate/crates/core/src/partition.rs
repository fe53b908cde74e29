//! Vertex partitions with canonical part numbering.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// A partition of `0..n` into non-empty parts.
///
/// Parts are numbered by their smallest member, ascending, so two
/// partitions are equal iff their assignment vectors are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    assignment: Vec<usize>,
    #[serde(skip)]
    part_count: usize,
}

impl Partition {
    /// Canonicalizes arbitrary per-vertex labels.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::with_capacity(labels.len());
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            part_count: ids.len(),
        }
    }

    /// Builds a partition from explicit parts; they must be disjoint and cover `0..n`.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (p, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::PartitionCoverage(format!("part {p} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::PartitionCoverage(format!(
                        "vertex {v} is outside 0..{n}"
                    )));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::PartitionCoverage(format!(
                        "vertex {v} appears in more than one part"
                    )));
                }
                labels[v] = p;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::PartitionCoverage(format!(
                "vertex {v} is not in any part"
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            part_count: n,
        }
    }

    pub fn whole(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            part_count: usize::from(n > 0),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn part_count(&self) -> usize {
        self.part_count
    }

    /// Canonical part id of `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Parts as sorted vertex lists, in canonical order.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.part_count];
        for (v, &p) in self.assignment.iter().enumerate() {
            parts[p].push(v);
        }
        parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.part_count];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }

    /// True when every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.vertex_count() != coarser.vertex_count() {
            return false;
        }
        let mut image = vec![usize::MAX; self.part_count];
        for (v, &p) in self.assignment.iter().enumerate() {
            let q = coarser.assignment[v];
            if image[p] == usize::MAX {
                image[p] = q;
            } else if image[p] != q {
                return false;
            }
        }
        true
    }

    /// Ensures `self` is a partition of exactly `n` vertices.
    pub fn check_size(&self, n: usize) -> Result<()> {
        if self.vertex_count() != n {
            return Err(Error::PartitionSize {
                expected: n,
                got: self.vertex_count(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .parts()
            .iter()
            .map(|p| {
                let inner: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
