//! Community detection on hypergraphs with strict hypergraph modularity.
//!
//! The crate covers the degree-preserving random hypergraph model behind the
//! modularity's degree tax, the modularity variants themselves, the
//! reduction of the search space to canonical edge sets, two greedy
//! heuristics built on that reduction, a 2-section Louvain baseline,
//! partition metrics and a synthetic benchmark generator.
//!
//! ```
//! use hypermod::{Hypergraph, Partition, strict_modularity};
//!
//! let h = Hypergraph::build(5, &[vec![0, 1, 2], vec![2, 3, 4], vec![0, 3]]).unwrap();
//! let a = Partition::from_parts(5, &[vec![0, 3], vec![1], vec![2], vec![4]]).unwrap();
//! let q = strict_modularity(&h, &a).q;
//! assert!((q - 47.0 / 384.0).abs() < 1e-12);
//! ```

pub mod algorithms;
pub mod error;
pub mod experiment;
pub mod hypergraph;
pub mod io;
pub mod metrics;
pub mod modularity;
pub mod null_model;
pub mod partition;
pub mod search_space;
pub mod synthgen;
pub mod union_find;

pub use algorithms::{greedy_random, louvain, simple_cnm, SearchResult};
pub use error::{Error, Result};
pub use hypergraph::{Hyperedge, Hypergraph, TwoSectionWeighting, WeightedGraph};
pub use metrics::{adjusted_rand_index, correlation_report, cut_profile, CutProfile, Regression};
pub use modularity::{
    degree_independent_modularity, graph_modularity, independent_modularity, majority_modularity,
    modularity, strict_degree_tax, strict_edge_contribution, strict_modularity, ModularityReport,
    Variant,
};
pub use null_model::{sample_null_model, NullModelParams};
pub use partition::Partition;
pub use search_space::{
    canonical_representative, enumerate_all_partitions, enumerate_representatives,
    enumerate_subsets, CanonicalRepresentative, SubHypergraphState,
};
pub use synthgen::{generate, LabeledHypergraph, LineSceneConfig, Regime};
