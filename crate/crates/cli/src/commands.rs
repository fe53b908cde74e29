use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use hypermod::algorithms::mix_seed;
use hypermod::experiment::{run_experiment, Algorithm, ExperimentConfig, ExperimentRow};
use hypermod::io::{parse_hgr, parse_partition, write_hgr, write_partition};
use hypermod::synthgen::Regime;
use hypermod::{
    cut_profile, enumerate_all_partitions, enumerate_representatives, enumerate_subsets,
    graph_modularity, greedy_random, louvain, modularity, simple_cnm, strict_modularity,
    adjusted_rand_index, generate as generate_scene, Hypergraph, ModularityReport, NullModelParams,
    Partition, TwoSectionWeighting, Variant,
};

use crate::output::{emit, fmt_num, to_json, write_atomic};
use crate::{
    AlgoArg, CompareArgs, DetectArgs, EnumerateArgs, ExperimentArgs, GenerateArgs,
    SampleNullArgs, ScoreArgs, TableFormat,
};

fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hgr(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_partition(h: &Hypergraph, path: &Path) -> Result<Partition> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_partition(h, &text).with_context(|| format!("parsing {}", path.display()))
}

fn weighting_name(w: TwoSectionWeighting) -> &'static str {
    match w {
        TwoSectionWeighting::DegreePreserving => "degree-preserving",
        TwoSectionWeighting::Uniform => "uniform",
    }
}

fn score_variant(
    h: &Hypergraph,
    a: &Partition,
    variant: Variant,
    weighting: TwoSectionWeighting,
) -> Result<ModularityReport> {
    Ok(match variant {
        Variant::Graph2Section => graph_modularity(&h.two_section(weighting), a),
        v => modularity(h, a, v)?,
    })
}

fn all_reports(h: &Hypergraph, a: &Partition, weighting: TwoSectionWeighting) -> Result<Vec<ModularityReport>> {
    Variant::ALL
        .into_iter()
        .map(|v| score_variant(h, a, v, weighting))
        .collect()
}

/// `{{a,b},{c}}` with vertex labels.
fn fmt_partition(h: &Hypergraph, a: &Partition) -> String {
    let parts: Vec<String> = a
        .parts()
        .iter()
        .map(|p| {
            let names: Vec<String> = p.iter().map(|&v| h.label(v)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn fmt_edges(edges: &[usize]) -> String {
    let names: Vec<String> = edges.iter().map(|e| format!("e{}", e + 1)).collect();
    format!("{{{}}}", names.join(","))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_table(format: TableFormat, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        _ => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in rows {
                for (w, f) in widths.iter_mut().zip(row) {
                    *w = (*w).max(f.chars().count());
                }
            }
            let line = |fields: Vec<&str>| {
                let cells: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, &w)| format!("{f:<w$}"))
                    .collect();
                cells.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(header.to_vec()));
            for row in rows {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

pub fn score(args: ScoreArgs) -> Result<()> {
    let h = load_hypergraph(&args.hypergraph)?;
    let a = load_partition(&h, &args.partition)?;
    let weighting = args.weighting.into();
    let json = if args.all {
        to_json(&all_reports(&h, &a, weighting)?)?
    } else {
        to_json(&score_variant(&h, &a, args.variant.into(), weighting)?)?
    };
    emit(None, &json)
}

#[derive(Serialize)]
struct InputInfo {
    hypergraph: String,
    vertices: usize,
    edges: usize,
}

impl InputInfo {
    fn new(path: &Path, h: &Hypergraph) -> Self {
        InputInfo {
            hypergraph: path.display().to_string(),
            vertices: h.vertex_count(),
            edges: h.edge_count(),
        }
    }
}

#[derive(Serialize)]
struct AlgorithmInfo {
    name: &'static str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    early_stop: Option<bool>,
    weighting: &'static str,
}

#[derive(Serialize)]
struct CutSummary {
    hcut: f64,
    /// Fraction of cut edges per size, sizes from 5 up pooled as "5+".
    cut_by_size: BTreeMap<String, f64>,
    part_count: usize,
    singleton_count: usize,
}

impl CutSummary {
    fn new(h: &Hypergraph, a: &Partition) -> Self {
        let profile = cut_profile(h, a);
        let cut_by_size = profile
            .bucketed(h, 5)
            .into_iter()
            .map(|(d, c)| (if d >= 5 { "5+".to_string() } else { d.to_string() }, c))
            .collect();
        CutSummary {
            hcut: profile.hcut,
            cut_by_size,
            part_count: profile.part_count,
            singleton_count: profile.singleton_count,
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    input: InputInfo,
    algorithm: AlgorithmInfo,
    /// Function the algorithm maximized; `q` is its value.
    objective: Variant,
    q: f64,
    modularity: Vec<ModularityReport>,
    cut: CutSummary,
    part_count: usize,
    steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

pub fn detect(args: DetectArgs) -> Result<()> {
    let h = load_hypergraph(&args.hypergraph)?;
    let variant: Variant = args.variant.into();
    let weighting: TwoSectionWeighting = args.weighting.into();
    let start = Instant::now();
    let (result, name) = match args.algo {
        AlgoArg::Random => (greedy_random(&h, args.k, args.seed, variant)?, "random"),
        AlgoArg::Cnm => (simple_cnm(&h, args.early_stop, variant)?, "cnm"),
        AlgoArg::Louvain => (louvain(&h.two_section(weighting), args.seed), "louvain"),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let a = &result.partition;
    let report = RunReport {
        input: InputInfo::new(&args.hypergraph, &h),
        algorithm: AlgorithmInfo {
            name,
            seed: args.seed,
            k: (args.algo == AlgoArg::Random).then_some(args.k),
            early_stop: (args.algo == AlgoArg::Cnm).then_some(args.early_stop),
            weighting: weighting_name(weighting),
        },
        objective: result.variant,
        q: result.q,
        modularity: all_reports(&h, a, weighting)?,
        cut: CutSummary::new(&h, a),
        part_count: a.part_count(),
        steps: result.trace.len(),
        wall_time_ms: args.timing.then_some(elapsed),
    };
    let json = to_json(&report)?;
    let parts = write_partition(&h, a);
    emit(args.out.as_deref(), &parts)?;
    match &args.report {
        Some(path) => write_atomic(path, &json)?,
        None => eprintln!(
            "{name}: {} = {}, {} parts, Hcut {}",
            result.variant,
            fmt_num(result.q),
            a.part_count(),
            fmt_num(report.cut.hcut)
        ),
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassRow {
    representative: String,
    partition: String,
    class_size: u64,
    edge_contribution: f64,
    degree_tax: f64,
    q: f64,
}

#[derive(Serialize)]
struct SubsetRowOut {
    i: usize,
    subset: String,
    partition: String,
    q: f64,
}

#[derive(Serialize)]
struct Optimum {
    partition: String,
    q: f64,
    partitions_scored: u64,
}

pub fn enumerate(args: EnumerateArgs) -> Result<()> {
    let h = load_hypergraph(&args.hypergraph)?;
    let optimum = if args.exhaustive {
        let (best, q) = enumerate_all_partitions(&h, args.vertex_cap)?;
        Some(Optimum {
            partition: fmt_partition(&h, &best),
            q,
            partitions_scored: bell(h.vertex_count()),
        })
    } else {
        None
    };
    let (header, rows, json_rows): (Vec<&str>, Vec<Vec<String>>, serde_json::Value) = if args.subsets {
        let rows: Vec<SubsetRowOut> = enumerate_subsets(&h, args.cap)?
            .into_iter()
            .enumerate()
            .map(|(i, r)| SubsetRowOut {
                i,
                subset: fmt_edges(&r.edges),
                q: strict_modularity(&h, &r.partition).q,
                partition: fmt_partition(&h, &r.partition),
            })
            .collect();
        let table = rows
            .iter()
            .map(|r| vec![r.i.to_string(), r.subset.clone(), r.partition.clone(), fmt_num(r.q)])
            .collect();
        (vec!["i", "subset", "partition", "q"], table, serde_json::to_value(&rows)?)
    } else {
        let rows: Vec<ClassRow> = enumerate_representatives(&h, args.cap)?
            .into_iter()
            .map(|c| ClassRow {
                representative: fmt_edges(&c.representative.edges()),
                partition: fmt_partition(&h, &c.representative.partition),
                class_size: c.class_size,
                edge_contribution: c.report.edge_contribution,
                degree_tax: c.report.degree_tax,
                q: c.report.q,
            })
            .collect();
        let table = rows
            .iter()
            .map(|r| {
                vec![
                    r.representative.clone(),
                    r.partition.clone(),
                    r.class_size.to_string(),
                    fmt_num(r.edge_contribution),
                    fmt_num(r.degree_tax),
                    fmt_num(r.q),
                ]
            })
            .collect();
        (
            vec!["representative", "partition", "class_size", "edge_contribution", "degree_tax", "q"],
            table,
            serde_json::to_value(&rows)?,
        )
    };
    let text = match args.format {
        TableFormat::Json => to_json(&serde_json::json!({
            "rows": json_rows,
            "optimum": optimum,
        }))?,
        format => {
            let mut t = render_table(format, &header, &rows);
            if let Some(o) = &optimum {
                let line = format!(
                    "optimum over {} partitions: {} q = {}",
                    o.partitions_scored,
                    o.partition,
                    fmt_num(o.q)
                );
                if format == TableFormat::Text {
                    t.push_str(&line);
                    t.push('\n');
                } else {
                    eprintln!("{line}");
                }
            }
            t
        }
    };
    emit(args.out.as_deref(), &text)
}

fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    *row.last().unwrap()
}

#[derive(Serialize)]
struct PartitionSummary {
    partition: String,
    modularity: Vec<ModularityReport>,
    cut: CutSummary,
}

#[derive(Serialize)]
struct CompareReport {
    input: InputInfo,
    adjusted_rand_index: f64,
    first: PartitionSummary,
    second: PartitionSummary,
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let h = load_hypergraph(&args.hypergraph)?;
    let a = load_partition(&h, &args.first)?;
    let b = load_partition(&h, &args.second)?;
    let weighting = TwoSectionWeighting::DegreePreserving;
    let summary = |path: &Path, p: &Partition| -> Result<PartitionSummary> {
        Ok(PartitionSummary {
            partition: path.display().to_string(),
            modularity: all_reports(&h, p, weighting)?,
            cut: CutSummary::new(&h, p),
        })
    };
    let report = CompareReport {
        input: InputInfo::new(&args.hypergraph, &h),
        adjusted_rand_index: adjusted_rand_index(&a, &b)?,
        first: summary(&args.first, &a)?,
        second: summary(&args.second, &b)?,
    };
    let text = if args.table2_style {
        let sizes: Vec<String> = report.first.cut.cut_by_size.keys().cloned().collect();
        let mut header = vec!["partition", "q_H", "q_H^DI", "q_G", "Hcut", "parts"];
        let size_cols: Vec<String> = sizes.iter().map(|s| format!("cut_{s}")).collect();
        header.extend(size_cols.iter().map(String::as_str));
        let row = |s: &PartitionSummary| {
            let q = |v: Variant| {
                s.modularity
                    .iter()
                    .find(|r| r.variant == v)
                    .map_or(f64::NAN, |r| r.q)
            };
            let mut r = vec![
                s.partition.clone(),
                format!("{:.4}", q(Variant::Strict)),
                format!("{:.4}", q(Variant::DegreeIndependent)),
                format!("{:.4}", q(Variant::Graph2Section)),
                format!("{:.4}", s.cut.hcut),
                s.cut.part_count.to_string(),
            ];
            r.extend(sizes.iter().map(|k| format!("{:.4}", s.cut.cut_by_size[k])));
            r
        };
        let mut t = render_table(TableFormat::Text, &header, &[row(&report.first), row(&report.second)]);
        t.push_str(&format!("adjusted Rand index: {:.4}\n", report.adjusted_rand_index));
        t
    } else {
        to_json(&report)?
    };
    emit(args.out.as_deref(), &text)
}

#[derive(Serialize)]
struct GenerateSummary {
    config: hypermod::LineSceneConfig,
    vertices: usize,
    edges: usize,
    edges_by_size: BTreeMap<usize, usize>,
    signal_fraction: f64,
    truth_parts: usize,
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let config = args.scene.config(args.regime.into(), args.seed);
    let scene = generate_scene(&config)?;
    let h = &scene.hypergraph;
    let hgr = write_hgr(h);
    let truth = write_partition(h, &scene.ground_truth);
    let summary = GenerateSummary {
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        edges_by_size: h.edge_size_counts().clone(),
        signal_fraction: scene.signal_fraction(),
        truth_parts: scene.ground_truth.part_count(),
        config,
    };
    write_atomic(&args.out, &hgr)?;
    if let Some(path) = &args.truth {
        write_atomic(path, &truth)?;
    }
    emit(None, &to_json(&summary)?)
}

#[derive(Serialize)]
struct SampleInfo {
    file: String,
    seed: u64,
}

pub fn sample_null(args: SampleNullArgs) -> Result<()> {
    let h = load_hypergraph(&args.hypergraph)?;
    let params = NullModelParams::from_hypergraph(&h);
    let labels: Vec<String> = (0..h.vertex_count()).map(|v| h.label(v)).collect();
    let width = args.samples.saturating_sub(1).to_string().len();
    let mut files = Vec::with_capacity(args.samples);
    for i in 0..args.samples {
        let seed = mix_seed(args.seed ^ mix_seed(i as u64));
        let sample = params.sample(seed)?.with_labels(Some(labels.clone()))?;
        let name = format!("sample_{i:0width$}.hgr");
        files.push((SampleInfo { file: name, seed }, write_hgr(&sample)));
    }
    for (info, text) in &files {
        write_atomic(&args.out_dir.join(&info.file), text)?;
    }
    let infos: Vec<&SampleInfo> = files.iter().map(|(i, _)| i).collect();
    emit(None, &to_json(&infos)?)
}

fn algorithm(a: AlgoArg) -> Algorithm {
    match a {
        AlgoArg::Random => Algorithm::Random,
        AlgoArg::Cnm => Algorithm::Cnm,
        AlgoArg::Louvain => Algorithm::Louvain,
    }
}

const CSV_HEADER: &str = "regime,instance,seed,algorithm,vertices,edges,q_graph,q_strict,q_di,hcut,parts,cut_size3,cut_size4,ari_truth";

fn csv_row(r: &ExperimentRow) -> String {
    let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.regime,
        r.instance,
        r.seed,
        r.algorithm,
        r.vertices,
        r.edges,
        fmt_num(r.q_graph),
        fmt_num(r.q_strict),
        fmt_num(r.q_di),
        fmt_num(r.hcut),
        r.parts,
        opt(r.cut_size3),
        opt(r.cut_size4),
        fmt_num(r.ari_truth)
    )
}

#[derive(Serialize)]
struct ExperimentSummary<'a> {
    config: &'a ExperimentConfig,
    summaries: &'a [hypermod::experiment::RegimeSummary],
    files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

pub fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut regimes: Vec<Regime> = Vec::new();
    for r in &args.regimes {
        let r: Regime = (*r).into();
        if !regimes.contains(&r) {
            regimes.push(r);
        }
    }
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for &a in &args.algos {
        if !algorithms.contains(&algorithm(a)) {
            algorithms.push(algorithm(a));
        }
    }
    let config = ExperimentConfig {
        regimes,
        instances_per_regime: args.instances,
        algorithms,
        seed: args.seed,
        k: args.k,
        scene: args.scene.config(Regime::Balanced, 0),
    };
    let start = Instant::now();
    let report = run_experiment(&config)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let mut outputs: Vec<(String, String)> = Vec::new();
    for &regime in &config.regimes {
        let mut csv = String::from(CSV_HEADER);
        csv.push('\n');
        for row in report.rows.iter().filter(|r| r.regime == regime) {
            csv.push_str(&csv_row(row));
        }
        outputs.push((format!("{regime}.csv"), csv));
    }
    let summary = ExperimentSummary {
        config: &config,
        summaries: &report.summaries,
        files: outputs.iter().map(|(f, _)| f.clone()).collect(),
        wall_time_ms: args.timing.then_some(elapsed),
    };
    outputs.push(("summary.json".to_string(), to_json(&summary)?));
    for (name, text) in &outputs {
        write_atomic(&args.out_dir.join(name), text)?;
    }
    for s in &report.summaries {
        eprintln!(
            "{}: Hcut ~ q_G slope {} R2 {}; Hcut ~ q_H slope {} R2 {}",
            s.regime,
            fmt_num(s.graph_vs_hcut.slope),
            fmt_num(s.graph_vs_hcut.r_squared),
            fmt_num(s.strict_vs_hcut.slope),
            fmt_num(s.strict_vs_hcut.r_squared)
        );
    }
    Ok(())
}
