#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hypermod::{Hypergraph, Partition};
use num_rational::Ratio;
use proptest::prelude::*;

pub type Q = Ratio<i128>;

pub fn fig1() -> Hypergraph {
    Hypergraph::build(5, &[vec![0, 1, 2], vec![2, 3, 4], vec![0, 3]]).unwrap()
}

pub fn parts(n: usize, p: &[&[usize]]) -> Partition {
    let p: Vec<Vec<usize>> = p.iter().map(|x| x.to_vec()).collect();
    Partition::from_parts(n, &p).unwrap()
}

/// Relabels vertices so that every id in `0..n` occurs in some edge.
pub fn compact(raw: &[Vec<usize>]) -> Hypergraph {
    let used: BTreeSet<usize> = raw.iter().flatten().copied().collect();
    let id: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<Vec<usize>> = raw.iter().map(|e| e.iter().map(|v| id[v]).collect()).collect();
    Hypergraph::build(used.len(), &edges).unwrap()
}

/// Random hypergraphs on at most `max_n` vertices without isolated vertices.
/// Edges are multisets of 2 to 4 occurrences.
pub fn hypergraphs(max_n: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..n, 2..=4), 1..=max_m))
        .prop_map(|raw| compact(&raw))
}

/// Like [`hypergraphs`] but every edge has distinct members.
pub fn simple_hypergraphs(max_n: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (4..=max_n)
        .prop_flat_map(move |n| {
            prop::collection::vec(
                (2..=4usize).prop_flat_map(move |d| prop::sample::subsequence((0..n).collect::<Vec<_>>(), d)),
                1..=max_m,
            )
        })
        .prop_map(|raw| compact(&raw))
}

pub fn labels(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n.max(1), n)
}

/// Strict modularity in exact arithmetic, straight from the definition.
pub fn exact_strict(h: &Hypergraph, a: &Partition) -> (Q, Q) {
    let m = h.edge_count() as i128;
    if m == 0 {
        return (Q::from_integer(0), Q::from_integer(0));
    }
    let internal = h
        .edges()
        .iter()
        .filter(|e| {
            let parts: BTreeSet<usize> = e.support().map(|v| a.part_of(v)).collect();
            parts.len() == 1
        })
        .count() as i128;
    let ec = Q::new(internal, m);
    let total = h.total_volume() as i128;
    let mut vols = vec![0i128; a.part_count()];
    for v in 0..h.vertex_count() {
        vols[a.part_of(v)] += h.degree(v) as i128;
    }
    let mut tax = Q::from_integer(0);
    for (&d, &count) in h.edge_size_counts() {
        for &vol in &vols {
            tax += Q::new(vol, total).pow(d as i32) * Q::from_integer(count as i128);
        }
    }
    (ec, tax / Q::from_integer(m))
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Every set partition of `0..n`, by brute-force recursion.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn go(v: usize, n: usize, cur: &mut Vec<usize>, k: usize, out: &mut Vec<Partition>) {
        if v == n {
            out.push(Partition::from_labels(cur));
            return;
        }
        for p in 0..=k {
            cur.push(p);
            go(v + 1, n, cur, k.max(p + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Partition induced by the connected components of an edge subset, by
/// breadth-first search.
pub fn components(h: &Hypergraph, edges: &[usize]) -> Partition {
    let n = h.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &e in edges {
        let s: Vec<usize> = h.edge(e).support().collect();
        for &u in &s {
            for &v in &s {
                adj[u].push(v);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &v in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = start;
                    queue.push(v);
                }
            }
        }
    }
    Partition::from_labels(&label)
}

/// Pair-counting adjusted Rand index over all vertex pairs.
pub fn pair_counting_ari(a: &Partition, b: &Partition) -> f64 {
    let n = a.vertex_count();
    let (mut both, mut in_a, mut in_b, mut pairs) = (0f64, 0f64, 0f64, 0f64);
    for u in 0..n {
        for v in u + 1..n {
            let sa = a.part_of(u) == a.part_of(v);
            let sb = b.part_of(u) == b.part_of(v);
            both += (sa && sb) as u8 as f64;
            in_a += sa as u8 as f64;
            in_b += sb as u8 as f64;
            pairs += 1.0;
        }
    }
    if pairs == 0.0 {
        return 1.0;
    }
    let expected = in_a * in_b / pairs;
    let max = (in_a + in_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}
