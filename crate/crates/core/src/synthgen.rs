//! Synthetic "noisy lines" hypergraphs with planted ground truth.
//!
//! Points are scattered along a few lines in the unit square, plus uniform
//! noise points. Hyperedges are well-aligned sets of 3 or 4 points: signal
//! edges take all their points from one line, noise edges mix lines or
//! include noise points. Edge counts per stream and per size are fixed
//! quotas, so the realized signal fraction and size mixture are exact up
//! to rounding.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::Partition;

/// Cap on candidate draws per generated instance.
pub const MAX_CANDIDATE_DRAWS: usize = 1_000_000;

/// Mixture of hyperedge sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Mostly3,
    Mostly4,
    Balanced,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Mostly3, Regime::Mostly4, Regime::Balanced];

    /// Probability that an edge has size 3 (the rest have size 4).
    pub fn size3_share(self) -> f64 {
        match self {
            Regime::Mostly3 => 0.9,
            Regime::Mostly4 => 0.1,
            Regime::Balanced => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Mostly3 => "mostly3",
            Regime::Mostly4 => "mostly4",
            Regime::Balanced => "balanced",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown regime '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSceneConfig {
    pub num_lines: usize,
    pub points_per_line: usize,
    pub noise_points: usize,
    /// Standard deviation of the perpendicular jitter of line points.
    pub line_noise_sigma: f64,
    /// Largest allowed perpendicular residual to the best-fit line of a
    /// candidate edge.
    pub alignment_tolerance: f64,
    pub regime: Regime,
    /// Target share of signal edges; 2:1 signal to noise is 2/3.
    pub signal_fraction: f64,
    pub num_hyperedges: usize,
    pub seed: u64,
}

impl Default for LineSceneConfig {
    fn default() -> Self {
        LineSceneConfig {
            num_lines: 3,
            points_per_line: 30,
            noise_points: 60,
            line_noise_sigma: 0.01,
            alignment_tolerance: 0.02,
            regime: Regime::Balanced,
            signal_fraction: 2.0 / 3.0,
            num_hyperedges: 300,
            seed: 0,
        }
    }
}

impl LineSceneConfig {
    pub fn total_points(&self) -> usize {
        self.num_lines * self.points_per_line + self.noise_points
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.num_lines == 0 || self.points_per_line < 4 {
            return bad("need at least one line with at least 4 points");
        }
        if self.num_hyperedges == 0 {
            return bad("num_hyperedges must be positive");
        }
        if !(0.0..=1.0).contains(&self.signal_fraction) {
            return bad("signal_fraction must lie in [0, 1]");
        }
        if self.line_noise_sigma < 0.0 || self.alignment_tolerance <= 0.0 {
            return bad("sigma must be non-negative and the alignment tolerance positive");
        }
        if self.signal_fraction < 1.0 && self.total_points() < 4 {
            return bad("noise edges need at least 4 points");
        }
        Ok(())
    }
}

/// A generated hypergraph with its planted structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledHypergraph {
    pub hypergraph: Hypergraph,
    /// Line id per vertex; every noise point is its own part.
    pub ground_truth: Partition,
    /// Per edge: all members come from one line.
    pub signal_flags: Vec<bool>,
}

impl LabeledHypergraph {
    pub fn signal_fraction(&self) -> f64 {
        self.signal_flags.iter().filter(|&&s| s).count() as f64 / self.signal_flags.len() as f64
    }
}

#[derive(Clone, Copy)]
struct Point {
    x: f64,
    y: f64,
    line: Option<usize>,
}

/// Largest perpendicular distance from the points to their total
/// least-squares line.
pub fn alignment_residual(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    // principal axis angle of the scatter matrix
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (nx, ny) = (-theta.sin(), theta.cos());
    points
        .iter()
        .map(|&(x, y)| ((x - mx) * nx + (y - my) * ny).abs())
        .fold(0.0, f64::max)
}

fn scatter_points(config: &LineSceneConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let jitter = Normal::new(0.0, config.line_noise_sigma.max(0.0))
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let spacing = std::f64::consts::PI / config.num_lines as f64;
    let offset = rng.random::<f64>() * spacing;
    let mut points = Vec::with_capacity(config.total_points());
    for line in 0..config.num_lines {
        let angle = offset + spacing * line as f64;
        let (dx, dy) = (angle.cos(), angle.sin());
        let cx = 0.35 + 0.3 * rng.random::<f64>();
        let cy = 0.35 + 0.3 * rng.random::<f64>();
        for _ in 0..config.points_per_line {
            let t = (rng.random::<f64>() - 0.5) * 0.7;
            let j = if config.line_noise_sigma > 0.0 {
                jitter.sample(rng)
            } else {
                0.0
            };
            points.push(Point {
                x: cx + t * dx - j * dy,
                y: cy + t * dy + j * dx,
                line: Some(line),
            });
        }
    }
    for _ in 0..config.noise_points {
        points.push(Point {
            x: rng.random(),
            y: rng.random(),
            line: None,
        });
    }
    Ok(points)
}

fn is_signal(points: &[Point], members: &[usize]) -> bool {
    let first = points[members[0]].line;
    first.is_some() && members.iter().all(|&i| points[i].line == first)
}

/// Generates one instance; deterministic in the whole config.
pub fn generate(config: &LineSceneConfig) -> Result<LabeledHypergraph> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = scatter_points(config, &mut rng)?;

    let signal_total = (config.num_hyperedges as f64 * config.signal_fraction).round() as usize;
    let noise_total = config.num_hyperedges - signal_total;
    let mut slots: Vec<(bool, usize)> = Vec::with_capacity(config.num_hyperedges);
    for (signal, count) in [(true, signal_total), (false, noise_total)] {
        let threes = (count as f64 * config.regime.size3_share()).round() as usize;
        slots.extend(std::iter::repeat_n((signal, 3), threes));
        slots.extend(std::iter::repeat_n((signal, 4), count - threes));
    }
    slots.shuffle(&mut rng);

    let line_members: Vec<Vec<usize>> = (0..config.num_lines)
        .map(|l| (0..points.len()).filter(|&i| points[i].line == Some(l)).collect())
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(slots.len());
    let mut draws = 0usize;
    for (signal, size) in slots {
        loop {
            draws += 1;
            if draws > MAX_CANDIDATE_DRAWS {
                return Err(Error::GenerationFailed(format!(
                    "{} candidate draws produced only {} of {} hyperedges; loosen the alignment tolerance",
                    MAX_CANDIDATE_DRAWS,
                    edges.len(),
                    config.num_hyperedges
                )));
            }
            let mut members: Vec<usize> = if signal {
                let line = &line_members[rng.random_range(0..config.num_lines)];
                index::sample(&mut rng, line.len(), size)
                    .into_iter()
                    .map(|i| line[i])
                    .collect()
            } else {
                index::sample(&mut rng, points.len(), size).into_vec()
            };
            members.sort_unstable();
            if !signal && is_signal(&points, &members) {
                continue;
            }
            let coords: Vec<(f64, f64)> = members.iter().map(|&i| (points[i].x, points[i].y)).collect();
            if alignment_residual(&coords) > config.alignment_tolerance {
                continue;
            }
            if seen.insert(members.clone()) {
                edges.push(members);
                break;
            }
        }
    }

    // Keep only points used by some edge.
    let mut id = vec![usize::MAX; points.len()];
    let mut used: Vec<usize> = edges.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    for (new, &old) in used.iter().enumerate() {
        id[old] = new;
    }
    let raw: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| e.iter().map(|&p| id[p]).collect())
        .collect();
    let labels: Vec<String> = used.iter().map(|p| format!("p{p}")).collect();
    let hypergraph = Hypergraph::build_labeled(labels, &raw)?;
    let truth: Vec<usize> = used
        .iter()
        .map(|&p| points[p].line.unwrap_or(config.num_lines + p))
        .collect();
    let signal_flags: Vec<bool> = edges.iter().map(|e| is_signal(&points, e)).collect();
    let out = LabeledHypergraph {
        hypergraph,
        ground_truth: Partition::from_labels(&truth),
        signal_flags,
    };
    let realized = out.signal_fraction();
    if (realized - config.signal_fraction).abs() > 0.1 * config.signal_fraction + 1e-12 {
        return Err(Error::GenerationFailed(format!(
            "realized signal fraction {realized:.3} misses target {:.3}",
            config.signal_fraction
        )));
    }
    Ok(out)
}
