//! Batch driver comparing 2-section Louvain with the hypergraph heuristics
//! on synthetic line scenes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{greedy_random, louvain, mix_seed, simple_cnm, SearchResult};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, TwoSectionWeighting};
use crate::metrics::{adjusted_rand_index, correlation_report, cut_profile, Regression};
use crate::modularity::{
    degree_independent_modularity, graph_modularity, strict_modularity, Variant,
};
use crate::synthgen::{generate, LineSceneConfig, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Random,
    Cnm,
    Louvain,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Cnm => "cnm",
            Algorithm::Louvain => "louvain",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Algorithm::Random),
            "cnm" => Ok(Algorithm::Cnm),
            "louvain" => Ok(Algorithm::Louvain),
            other => Err(Error::InvalidConfig(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Parameters shared by all algorithm runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectParams {
    pub variant: Variant,
    /// Permutations for the random heuristic.
    pub k: usize,
    pub early_stop: bool,
    pub seed: u64,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            variant: Variant::Strict,
            k: 100,
            early_stop: false,
            seed: 0,
        }
    }
}

/// Runs one algorithm on `h`. Louvain always works on the
/// degree-preserving 2-section and reports graph modularity.
pub fn run_algorithm(h: &Hypergraph, algorithm: Algorithm, params: &DetectParams) -> Result<SearchResult> {
    match algorithm {
        Algorithm::Random => greedy_random(h, params.k, params.seed, params.variant),
        Algorithm::Cnm => simple_cnm(h, params.early_stop, params.variant),
        Algorithm::Louvain => Ok(louvain(
            &h.two_section(TwoSectionWeighting::DegreePreserving),
            params.seed,
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub regimes: Vec<Regime>,
    pub instances_per_regime: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Permutations for the random heuristic.
    pub k: usize,
    /// Scene template; its regime and seed are overridden per instance.
    pub scene: LineSceneConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            regimes: Regime::ALL.to_vec(),
            instances_per_regime: 100,
            algorithms: vec![Algorithm::Louvain, Algorithm::Cnm],
            seed: 0,
            k: 100,
            scene: LineSceneConfig::default(),
        }
    }
}

/// Seed of instance `instance` of regime `regime_index`.
pub fn instance_seed(seed: u64, regime_index: usize, instance: usize) -> u64 {
    mix_seed(seed ^ mix_seed(((regime_index as u64) << 32) | instance as u64))
}

/// One (instance, algorithm) measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub regime: Regime,
    pub instance: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub vertices: usize,
    pub edges: usize,
    pub q_graph: f64,
    pub q_strict: f64,
    pub q_di: f64,
    pub hcut: f64,
    pub parts: usize,
    pub cut_size3: Option<f64>,
    pub cut_size4: Option<f64>,
    pub ari_truth: f64,
}

/// Regressions of Hcut on graph and on strict hypergraph modularity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeSummary {
    pub regime: Regime,
    /// Algorithm whose partitions feed the regressions.
    pub partitions_from: String,
    pub graph_vs_hcut: Regression,
    pub strict_vs_hcut: Regression,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<RegimeSummary>,
}

fn run_instance(
    config: &ExperimentConfig,
    regime_index: usize,
    regime: Regime,
    instance: usize,
) -> Result<Vec<ExperimentRow>> {
    let seed = instance_seed(config.seed, regime_index, instance);
    let scene = generate(&LineSceneConfig {
        regime,
        seed,
        ..config.scene.clone()
    })?;
    let h = &scene.hypergraph;
    let graph = h.two_section(TwoSectionWeighting::DegreePreserving);
    let params = DetectParams {
        k: config.k,
        seed,
        ..DetectParams::default()
    };
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let result = run_algorithm(h, algorithm, &params)?;
            let p = &result.partition;
            let cut = cut_profile(h, p);
            Ok(ExperimentRow {
                regime,
                instance,
                seed,
                algorithm,
                vertices: h.vertex_count(),
                edges: h.edge_count(),
                q_graph: graph_modularity(&graph, p).q,
                q_strict: strict_modularity(h, p).q,
                q_di: degree_independent_modularity(h, p).q,
                hcut: cut.hcut,
                parts: cut.part_count,
                cut_size3: cut.cut_by_size.get(&3).copied(),
                cut_size4: cut.cut_by_size.get(&4).copied(),
                ari_truth: adjusted_rand_index(p, &scene.ground_truth)?,
            })
        })
        .collect()
}

/// Generates every instance, runs every algorithm, and regresses Hcut on
/// modularity per regime.
///
/// Regressions use the Louvain partitions when Louvain is among the
/// algorithms, and all rows of the regime otherwise.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.regimes.is_empty() || config.algorithms.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one regime and one algorithm".into(),
        ));
    }
    let jobs: Vec<(usize, Regime, usize)> = config
        .regimes
        .iter()
        .enumerate()
        .flat_map(|(ri, &r)| (0..config.instances_per_regime).map(move |i| (ri, r, i)))
        .collect();
    let rows: Vec<ExperimentRow> = jobs
        .par_iter()
        .map(|&(ri, r, i)| {
            run_instance(config, ri, r, i).map_err(|e| {
                Error::GenerationFailed(format!("regime {r}, instance {i}: {e}"))
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let source = if config.algorithms.contains(&Algorithm::Louvain) {
        Some(Algorithm::Louvain)
    } else {
        None
    };
    let mut summaries = Vec::new();
    for &regime in &config.regimes {
        let selected: Vec<&ExperimentRow> = rows
            .iter()
            .filter(|r| r.regime == regime && source.is_none_or(|a| r.algorithm == a))
            .collect();
        if selected.len() < 3 {
            continue;
        }
        let graph: Vec<(f64, f64)> = selected.iter().map(|r| (r.q_graph, r.hcut)).collect();
        let strict: Vec<(f64, f64)> = selected.iter().map(|r| (r.q_strict, r.hcut)).collect();
        summaries.push(RegimeSummary {
            regime,
            partitions_from: source.map_or("all".to_string(), |a| a.name().to_string()),
            graph_vs_hcut: correlation_report(&graph)?,
            strict_vs_hcut: correlation_report(&strict)?,
        });
    }
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        summaries,
    })
}
