//! Command-line front end: `detect`, `baseline`, `stats`, `bench`,
//! `modularity` and `generate`.
//!
//! Exit status is 0 on success, 1 on any pipeline error and 2 on bad flags.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::community::CommunityAssignment;
use crate::compose::{apply_composition, initialize_result, KCommunityResult, LayerStore};
use crate::error::{Error, Result};
use crate::eval::{baseline_modularity, hemln_modularity};
use crate::expr::parse_expression;
use crate::meta::{HubRule, LayerAnalysis, Metric};
use crate::mln::{dump_mln, load_mln_from_path, MultilayerNetwork};
use crate::pairing::Algorithm;
use crate::par::{self, ExecMode};
use crate::synth::{gen_planted_mln, PlantedParams};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "hemln", version, about = "Community detection for heterogeneous multilayer networks")]
pub struct Cli {
    /// Worker threads for per-layer detection (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a k-community expression and write the tuple table.
    Detect(DetectArgs),
    /// Louvain modularity of the type-independent aggregate graph.
    Baseline(BaselineArgs),
    /// Per-layer node, edge and community counts.
    Stats(BaselineArgs),
    /// One-time versus recurring cost, median over repeats.
    Bench(BenchArgs),
    /// Modularity of every pairing algorithm next to the baseline.
    Modularity(ModularityArgs),
    /// Write a planted-partition network in the standard file formats.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value = "we")]
    pub metric: Metric,
    #[arg(long, default_value = "mwm")]
    pub algo: Algorithm,
    /// Tuple table path.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `<out>.edges` listing every tuple's inter-layer links.
    #[arg(long)]
    pub emit_edges: bool,
    /// Directory for reusable 1-community dumps.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Hub threshold as a multiple of the mean intra-community degree.
    #[arg(long, default_value_t = 1.0)]
    pub hub_factor: f64,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value = "we")]
    pub metric: Metric,
    #[arg(long, default_value = "mwm")]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
}

#[derive(Debug, Args)]
pub struct ModularityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value = "we")]
    pub metric: Metric,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    #[arg(long, default_value_t = 25)]
    pub block_size: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    #[arg(long, default_value_t = 0.2)]
    pub coupling: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `out`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    let result = par::with_threads(threads, || {
        let mut buf = Vec::new();
        let r = dispatch(&cli, &mut buf);
        (r, buf)
    });
    let (r, buf) = result;
    let _ = out.write_all(&buf);
    match r {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<()> {
    match &cli.command {
        Command::Detect(a) => run_detect(a, cli.threads, out),
        Command::Baseline(a) => run_baseline(a, out),
        Command::Stats(a) => run_stats(a, out),
        Command::Bench(a) => run_bench(a, out),
        Command::Modularity(a) => run_modularity(a, out),
        Command::Generate(a) => run_generate(a, out),
    }
}

fn load(config: &Path) -> Result<MultilayerNetwork> {
    let (mln, warnings) = load_mln_from_path(config)?;
    if warnings.total() > 0 {
        log::warn!("{} input lines dropped while loading", warnings.total());
    }
    Ok(mln)
}

fn cache_path(dir: &Path, layer: &str, seed: u64) -> PathBuf {
    dir.join(format!("{layer}.seed{seed}.tsv"))
}

/// One-time per-layer results, read from / written to `cache` when given.
pub fn build_store(
    mln: &MultilayerNetwork,
    layers: &[&str],
    seed: u64,
    rule: HubRule,
    cache: Option<&Path>,
) -> Result<LayerStore> {
    let Some(dir) = cache else {
        return LayerStore::detect(mln, layers, seed, rule, ExecMode::Parallel);
    };
    fs::create_dir_all(dir)?;
    let graphs = layers
        .iter()
        .map(|n| mln.layer(n).ok_or_else(|| Error::UnknownLayer((*n).to_owned())))
        .collect::<Result<Vec<_>>>()?;
    let analyses = par::map(ExecMode::Parallel, &graphs, |layer| -> Result<LayerAnalysis> {
        let path = cache_path(dir, &layer.name, seed);
        if path.exists() {
            match CommunityAssignment::read_tsv(layer, &path) {
                Ok(a) => return Ok(LayerAnalysis::from_assignment(layer, a, rule)),
                Err(e) => log::warn!("ignoring stale cache {}: {e}", path.display()),
            }
        }
        let analysis = LayerAnalysis::detect(layer, seed, rule);
        analysis.assignment.write_tsv(&layer.graph, &path)?;
        Ok(analysis)
    });
    let mut store = LayerStore::new();
    for (layer, a) in graphs.iter().zip(analyses) {
        store.insert(layer.name.clone(), a?);
    }
    Ok(store)
}

/// The tuple table: a `#` header, then one line per tuple with community
/// ids, `total|partial`, and the link count of every step.
pub fn format_tuple_table(result: &KCommunityResult) -> String {
    let expr = &result.expression;
    let mut s = String::from("#");
    for l in expr.distinct_layers() {
        let _ = write!(s, "{l}\t");
    }
    s.push_str("class");
    for st in &expr.steps {
        let _ = write!(s, "\t{}-{}", st.left_layer, st.right_layer);
    }
    s.push('\n');
    for t in &result.tuples {
        for c in &t.community_ids {
            let _ = write!(s, "{c}\t");
        }
        s.push_str(if t.is_total() { "total" } else { "partial" });
        for n in t.edge_counts() {
            let _ = write!(s, "\t{n}");
        }
        s.push('\n');
    }
    s
}

/// `tuple-index <tab> u <tab> v` for every link of every tuple; `u` lies in
/// the step's left layer.
pub fn format_tuple_edges(result: &KCommunityResult, mln: &MultilayerNetwork) -> String {
    let mut s = String::from("#tuple\tu\tv\n");
    for (i, t) in result.tuples.iter().enumerate() {
        for (step, set) in result.expression.steps.iter().zip(&t.edge_sets) {
            let Some(set) = set else { continue };
            let lg = &mln.layer(&step.left_layer).expect("layer").graph;
            let rg = &mln.layer(&step.right_layer).expect("layer").graph;
            for &(u, v) in set.iter() {
                let _ = writeln!(s, "{i}\t{}\t{}", lg.node_name(u), rg.node_name(v));
            }
        }
    }
    s
}

fn edges_path(out: &Path) -> PathBuf {
    let mut p = out.as_os_str().to_owned();
    p.push(".edges");
    PathBuf::from(p)
}

fn run_detect(a: &DetectArgs, threads: Option<usize>, out: &mut Vec<u8>) -> Result<()> {
    let mln = load(&a.common.config)?;
    let expr = parse_expression(&a.expr, &mln)?;
    let rule = HubRule {
        factor: a.hub_factor,
    };
    let t0 = Instant::now();
    let store = build_store(&mln, &expr.distinct_layers(), a.common.seed, rule, a.cache.as_deref())?;
    let one_time = t0.elapsed();

    let mut timings = Vec::new();
    let t = Instant::now();
    let mut result = initialize_result(&mln, &store, &expr, a.metric, a.algo)?;
    timings.push(t.elapsed());
    for i in 1..expr.steps.len() {
        let t = Instant::now();
        apply_composition(&mut result, i, &mln, &store)?;
        timings.push(t.elapsed());
    }

    fs::write(&a.out, format_tuple_table(&result))?;
    if a.emit_edges {
        fs::write(edges_path(&a.out), format_tuple_edges(&result, &mln))?;
    }

    writeln!(
        out,
        "seed={} expr=\"{}\" metric={} algo={} threads={}",
        a.common.seed,
        expr,
        a.metric,
        a.algo,
        threads.map_or_else(|| "auto".to_owned(), |t| t.to_string())
    )?;
    writeln!(out, "one_time_ms={:.3}", ms(one_time))?;
    for (s, d) in result.steps.iter().zip(&timings) {
        writeln!(
            out,
            "step={} left={} right={} case={} meta_nodes={}x{} meta_edges={} pairs={} total_weight={:.6} edge_total={} consistent={} no_match={} inconsistent={} tuples={} time_ms={:.3}",
            s.position,
            s.left_layer,
            s.right_layer,
            s.case.label(),
            s.left_meta_nodes,
            s.right_meta_nodes,
            s.meta_edges,
            s.pairs,
            s.total_weight,
            s.link_total,
            s.consistent,
            s.no_match,
            s.inconsistent,
            s.tuples_after,
            ms(*d)
        )?;
        if s.meta_edges == 0 {
            writeln!(out, "warning=empty_cbg step={}", s.position)?;
        }
    }
    writeln!(
        out,
        "k={} tuples={} total={} partial={}",
        result.k,
        result.tuples.len(),
        result.total_count(),
        result.partial_count()
    )?;
    Ok(())
}

fn run_baseline(a: &BaselineArgs, out: &mut Vec<u8>) -> Result<()> {
    let mln = load(&a.common.config)?;
    let (agg, assignment, q) = baseline_modularity(&mln, a.common.seed);
    writeln!(
        out,
        "nodes={} edges={} communities={} Q={:.6}",
        agg.node_count(),
        agg.edge_count(),
        assignment.community_count(),
        q
    )?;
    Ok(())
}

fn run_stats(a: &BaselineArgs, out: &mut Vec<u8>) -> Result<()> {
    let mln = load(&a.common.config)?;
    let names = mln.layer_names();
    let store = LayerStore::detect(&mln, &names, a.common.seed, HubRule::default(), ExecMode::Parallel)?;
    writeln!(out, "#layer\tnodes\tedges\tcommunities(size>1/all)\tavg_size(size>1)")?;
    for layer in mln.layers() {
        let asg = &store.get(&layer.name)?.assignment;
        let big: Vec<usize> = asg.non_singleton_ids().map(|c| asg.size(c)).collect();
        let avg = if big.is_empty() {
            0.0
        } else {
            big.iter().sum::<usize>() as f64 / big.len() as f64
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}/{}\t{:.2}",
            layer.name,
            layer.graph.node_count(),
            layer.graph.edge_count(),
            big.len(),
            asg.community_count(),
            avg
        )?;
    }
    Ok(())
}

/// Wall-clock costs of one pipeline run.
#[derive(Debug, Clone)]
pub struct BenchSample {
    /// Resolving the expression's inter-layer links to node indices; paid once
    /// per loaded network and zero once cached.
    pub index: Duration,
    /// Per layer: community detection, stats and hubs.
    pub one_time: Vec<(String, Duration)>,
    /// Per composition step: CBG construction, weights, pairing and tuple update.
    pub recurring: Vec<Duration>,
}

/// Times every layer's one-time analysis (sequentially, so costs are not
/// hidden by overlap) and every composition step.
pub fn bench_once(
    mln: &MultilayerNetwork,
    expr: &crate::expr::KCommunityExpression,
    metric: Metric,
    algorithm: Algorithm,
    seed: u64,
) -> Result<BenchSample> {
    let t = Instant::now();
    for st in &expr.steps {
        mln.resolved_links(&st.left_layer, &st.right_layer)
            .ok_or_else(|| Error::NoInterLayer(st.left_layer.clone(), st.right_layer.clone()))?;
    }
    let index = t.elapsed();
    let mut store = LayerStore::new();
    let mut one_time = Vec::new();
    for name in expr.distinct_layers() {
        let layer = mln.layer(name).ok_or_else(|| Error::UnknownLayer(name.to_owned()))?;
        let t = Instant::now();
        let analysis = LayerAnalysis::detect(layer, seed, HubRule::default());
        one_time.push((name.to_owned(), t.elapsed()));
        store.insert(name, analysis);
    }
    let mut recurring = Vec::new();
    let t = Instant::now();
    let mut result = initialize_result(mln, &store, expr, metric, algorithm)?;
    recurring.push(t.elapsed());
    for i in 1..expr.steps.len() {
        let t = Instant::now();
        apply_composition(&mut result, i, mln, &store)?;
        recurring.push(t.elapsed());
    }
    Ok(BenchSample {
        index,
        one_time,
        recurring,
    })
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Medians over samples: `(per-layer one-time, per-step recurring)`.
pub fn summarize(samples: &[BenchSample]) -> (Vec<(String, Duration)>, Vec<Duration>) {
    let first = &samples[0];
    let one = first
        .one_time
        .iter()
        .enumerate()
        .map(|(i, (name, _))| (name.clone(), median(samples.iter().map(|s| s.one_time[i].1).collect())))
        .collect();
    let rec = (0..first.recurring.len())
        .map(|i| median(samples.iter().map(|s| s.recurring[i]).collect()))
        .collect();
    (one, rec)
}

fn run_bench(a: &BenchArgs, out: &mut Vec<u8>) -> Result<()> {
    let mln = load(&a.common.config)?;
    let expr = parse_expression(&a.expr, &mln)?;
    let samples = (0..a.repeat)
        .map(|_| bench_once(&mln, &expr, a.metric, a.algo, a.common.seed))
        .collect::<Result<Vec<_>>>()?;
    let (one, rec) = summarize(&samples);
    writeln!(out, "repeat={}", a.repeat)?;
    writeln!(out, "link_index_ms={:.3}", ms(samples[0].index))?;
    for (name, d) in &one {
        writeln!(out, "one_time layer={name} ms={:.3}", ms(*d))?;
    }
    for (st, d) in expr.steps.iter().zip(&rec) {
        writeln!(
            out,
            "recurring step={} left={} right={} ms={:.3}",
            st.position,
            st.left_layer,
            st.right_layer,
            ms(*d)
        )?;
    }
    let max_one = one.iter().map(|x| x.1).max().unwrap_or_default();
    let total_rec: Duration = rec.iter().sum();
    writeln!(out, "one_time_max_ms={:.3}", ms(max_one))?;
    writeln!(out, "recurring_total_ms={:.3}", ms(total_rec))?;
    let ratio = if max_one.is_zero() {
        0.0
    } else {
        total_rec.as_secs_f64() / max_one.as_secs_f64()
    };
    writeln!(out, "recurring_over_one_time_max={ratio:.4}")?;
    Ok(())
}

fn run_modularity(a: &ModularityArgs, out: &mut Vec<u8>) -> Result<()> {
    let mln = load(&a.common.config)?;
    let expr = parse_expression(&a.expr, &mln)?;
    let store = LayerStore::detect(
        &mln,
        &expr.distinct_layers(),
        a.common.seed,
        HubRule::default(),
        ExecMode::Parallel,
    )?;
    let (_, _, baseline) = baseline_modularity(&mln, a.common.seed);
    writeln!(out, "{:<10}{:>8}{:>8}{:>12}{:>12}", "#algo", "pairs", "tuples", "Q", "baseline_Q")?;
    for algo in Algorithm::ALL {
        let result = crate::compose::evaluate_with_store(&mln, &store, &expr, a.metric, algo)?;
        let q = hemln_modularity(&mln, &store, &result)?;
        writeln!(
            out,
            "{:<10}{:>8}{:>8}{:>12.6}{:>12.6}",
            algo.code(),
            result.steps[0].pairs,
            result.tuples.len(),
            q,
            baseline
        )?;
    }
    Ok(())
}

fn run_generate(a: &GenerateArgs, out: &mut Vec<u8>) -> Result<()> {
    let params = PlantedParams {
        layers: a.layers,
        blocks_per_layer: a.blocks,
        block_size: a.block_size,
        p_in: a.p_in,
        p_out: a.p_out,
        coupling_density: a.coupling,
    };
    let (mln, truth) = gen_planted_mln(params, a.seed)?;
    let config = dump_mln(&mln, &a.out)?;
    let mut t = String::from("#node\tblock\n");
    for (node, b) in &truth.block_of {
        let _ = writeln!(t, "{node}\t{b}");
    }
    fs::write(a.out.join("truth.tsv"), t)?;
    writeln!(out, "config={}", config.display())?;
    writeln!(
        out,
        "layers={} nodes={} intra_edges={} inter_edges={}",
        mln.layer_count(),
        mln.total_nodes(),
        mln.total_intra_edges(),
        mln.total_inter_edges()
    )?;
    Ok(())
}
