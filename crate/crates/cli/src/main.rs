//! `hypermod` command-line tool.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermod::synthgen::Regime;
use hypermod::{LineSceneConfig, TwoSectionWeighting, Variant};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "hypermod", version, about = "Hypergraph modularity: scoring, community detection and experiments")]
struct Cli {
    /// Worker threads (default: HYPERMOD_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a partition of a hypergraph.
    Score(ScoreArgs),
    /// Find communities and write the partition.
    Detect(DetectArgs),
    /// Enumerate edge subsets and their induced partitions.
    Enumerate(EnumerateArgs),
    /// Compare two partitions of one hypergraph.
    Compare(CompareArgs),
    /// Generate a synthetic noisy-lines hypergraph with ground truth.
    Generate(GenerateArgs),
    /// Draw hypergraphs from the degree-preserving random model.
    SampleNull(SampleNullArgs),
    /// Run the modularity-vs-cut experiment on synthetic scenes.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Strict,
    Majority,
    Di,
    Graph2s,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Strict => Variant::Strict,
            VariantArg::Majority => Variant::Majority,
            VariantArg::Di => Variant::DegreeIndependent,
            VariantArg::Graph2s => Variant::Graph2Section,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WeightingArg {
    DegreePreserving,
    Uniform,
}

impl From<WeightingArg> for TwoSectionWeighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::DegreePreserving => TwoSectionWeighting::DegreePreserving,
            WeightingArg::Uniform => TwoSectionWeighting::Uniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Random,
    Cnm,
    Louvain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Mostly3,
    Mostly4,
    Balanced,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Mostly3 => Regime::Mostly3,
            RegimeArg::Mostly4 => Regime::Mostly4,
            RegimeArg::Balanced => Regime::Balanced,
        }
    }
}

#[derive(Args)]
pub struct ScoreArgs {
    /// Hypergraph in hgr-txt format.
    pub hypergraph: PathBuf,
    /// Partition file, one `label<TAB>part` line per vertex.
    pub partition: PathBuf,
    #[arg(long, value_enum, default_value = "strict")]
    pub variant: VariantArg,
    /// 2-section weighting for the graph2s variant.
    #[arg(long, value_enum, default_value = "degree-preserving")]
    pub weighting: WeightingArg,
    /// Report every variant as a JSON array.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args)]
pub struct DetectArgs {
    pub hypergraph: PathBuf,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Permutations for the random heuristic.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Objective of the hypergraph heuristics (strict, majority or di).
    #[arg(long, value_enum, default_value = "strict")]
    pub variant: VariantArg,
    /// Stop CNM at the first step that does not reach the best value so far.
    #[arg(long)]
    pub early_stop: bool,
    /// 2-section weighting for Louvain.
    #[arg(long, value_enum, default_value = "degree-preserving")]
    pub weighting: WeightingArg,
    /// Partition output (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run report (default: stderr summary only).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Record wall time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args)]
pub struct EnumerateArgs {
    pub hypergraph: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TableFormat,
    /// Largest edge count accepted.
    #[arg(long, default_value_t = hypermod::search_space::DEFAULT_EDGE_CAP)]
    pub cap: usize,
    /// List every edge subset instead of one row per class.
    #[arg(long)]
    pub subsets: bool,
    /// Also maximize over all vertex partitions (vertex count capped).
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = hypermod::search_space::DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    pub hypergraph: PathBuf,
    pub first: PathBuf,
    pub second: PathBuf,
    /// Print one aligned row per partition: q_H, q_H^DI, q_G, Hcut, parts
    /// and per-size cut proportions.
    #[arg(long)]
    pub table2_style: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct SceneArgs {
    #[arg(long, default_value_t = 3)]
    pub lines: usize,
    #[arg(long, default_value_t = 30)]
    pub points_per_line: usize,
    #[arg(long, default_value_t = 60)]
    pub noise_points: usize,
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub signal_fraction: f64,
    #[arg(long, default_value_t = 300)]
    pub edges: usize,
}

impl SceneArgs {
    pub fn config(&self, regime: Regime, seed: u64) -> LineSceneConfig {
        LineSceneConfig {
            num_lines: self.lines,
            points_per_line: self.points_per_line,
            noise_points: self.noise_points,
            line_noise_sigma: self.sigma,
            alignment_tolerance: self.tolerance,
            regime,
            signal_fraction: self.signal_fraction,
            num_hyperedges: self.edges,
            seed,
        }
    }
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "balanced")]
    pub regime: RegimeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub scene: SceneArgs,
}

#[derive(Args)]
pub struct SampleNullArgs {
    pub hypergraph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `sample_<i>.hgr` files.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["mostly3", "mostly4", "balanced"])]
    pub regimes: Vec<RegimeArg>,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["louvain", "cnm"])]
    pub algos: Vec<AlgoArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Permutations for the random heuristic.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub scene: SceneArgs,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<hypermod::Error>() {
            return match e {
                hypermod::Error::CapExceeded { .. } => EXIT_CAP,
                hypermod::Error::UnsupportedVariant(_) | hypermod::Error::InvalidConfig(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_DATA,
            };
        }
    }
    EXIT_DATA
}

fn init_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let from_env = std::env::var("HYPERMOD_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok());
    if let Some(n) = flag.or(from_env).filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = init_threads(cli.threads).and_then(|_| match cli.command {
        Command::Score(a) => commands::score(a),
        Command::Detect(a) => commands::detect(a),
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Compare(a) => commands::compare(a),
        Command::Generate(a) => commands::generate(a),
        Command::SampleNull(a) => commands::sample_null(a),
        Command::Experiment(a) => commands::experiment(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
