use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use landscape_core::basins::{build_basins, write_basins_csv};
use landscape_core::error::Error as CoreError;
use landscape_core::networks::{
    exclude_nonwalk_edges, network_stats, step_size_barriers, ExclusionRule, WeightedDigraph,
};
use landscape_core::plops::{detect_plops, plef_counts, read_report_csv, write_report_csv, LosReport};
use landscape_core::problems::{BitPoint, HiffVariant, LandscapeInstance};
use landscape_core::sampling::{self, BinLayout, Sample, SampleOrigin, SamplePoint, WlParams};
use landscape_core::walks::{self, Strategy};
use landscape_lab::experiment::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "landscape-lab",
    about = "Search-space analysis: PLOP detection on slow adaptive walks, \
             adjusted Wang-Landau sampling, basin and network characterization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem instance file
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Produce an ENUM, AWL or RAND sample from an instance
    Sample {
        #[command(subcommand)]
        kind: SampleKind,
    },
    /// Run slow adaptive walks from every sample point
    Walk(WalkArgs),
    /// Score walked points and flag PLOPs
    Plops(PlopsArgs),
    /// Extract basins of attraction from walks
    Basins(BasinsArgs),
    /// Build temperature or basin overlap networks
    Network {
        #[command(subcommand)]
        kind: NetworkKind,
    },
    /// Compute statistics of an edge-list network
    Stats(StatsArgs),
    /// Run a full multi-instance experiment
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum GenerateKind {
    /// NK landscape with random neighborhoods and tables
    Nk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// HIFF-family instance (classic implemented; hiffc/hiffm need an
    /// extension registered by library callers)
    Hiff {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "classic")]
        variant: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CommonSampleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum SampleKind {
    /// Adjusted Wang-Landau sample
    Awl {
        #[command(flatten)]
        common: CommonSampleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.85)]
        flatness: f64,
        #[arg(long, default_value_t = 5)]
        flat_target: u32,
        #[arg(long, default_value_t = 0.1)]
        bin_width: f64,
        #[arg(long, default_value_t = 1e-8)]
        epsilon: f64,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        min_size: Option<usize>,
        /// Optional CSV trace of sample growth and flatness events
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Uniform random sample without replacement
    Rand {
        #[command(flatten)]
        common: CommonSampleArgs,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The entire search space
    Enum {
        #[command(flatten)]
        common: CommonSampleArgs,
    },
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    sample: PathBuf,
    #[arg(long, default_value = "exhaustive")]
    strategy: String,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlopsArgs {
    #[arg(long)]
    sample: PathBuf,
    #[arg(long)]
    walks: PathBuf,
    /// Instance file for the plef oracle column
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BasinsArgs {
    #[arg(long)]
    walks: PathBuf,
    /// Report CSV from the plops stage (defines the points and PLOP flags)
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NetworkCommonArgs {
    #[arg(long)]
    walks: PathBuf,
    #[arg(long)]
    report: PathBuf,
    /// Edge list CSV output
    #[arg(long)]
    out: PathBuf,
    /// Also write a NetworkStats JSON
    #[arg(long)]
    stats_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    path_sample_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum NetworkKind {
    /// Step-size-barrier network over PLOPs
    Temperature {
        #[command(flatten)]
        common: NetworkCommonArgs,
    },
    /// Basin overlap network over PLOPs
    Overlap {
        #[command(flatten)]
        common: NetworkCommonArgs,
        /// Drop edges whose endpoints never share a walk
        #[arg(long)]
        exclude_nonwalk: bool,
        /// Exclusion reading: same-walk (default) or any-walk
        #[arg(long, default_value = "same-walk")]
        exclusion_rule: String,
    },
}

#[derive(Args)]
struct StatsArgs {
    /// Edge list CSV (src_bits, dst_bits, weight)
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    path_sample_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment configuration JSON; omit with --emit-only
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Override the config's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Re-emit plot data from an existing bundle.json without recomputing
    #[arg(long)]
    emit_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Capability(_)) | Some(CoreError::Configuration(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate { kind } => generate(kind)?,
        Command::Sample { kind } => sample(kind)?,
        Command::Walk(args) => walk(args)?,
        Command::Plops(args) => plops(args)?,
        Command::Basins(args) => basins(args)?,
        Command::Network { kind } => network(kind)?,
        Command::Stats(args) => stats(args)?,
        Command::Experiment(args) => return experiment_cmd(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(kind: GenerateKind) -> anyhow::Result<()> {
    match kind {
        GenerateKind::Nk { n, k, seed, out } => {
            let inst = LandscapeInstance::generate_nk(n, k, seed)?;
            inst.write_file(&out)?;
            println!("wrote {} ({})", out.display(), inst.instance_ref());
        }
        GenerateKind::Hiff { n, variant, out } => {
            let variant = HiffVariant::from_str(&variant)?;
            let inst = LandscapeInstance::hiff(n, variant)?;
            inst.write_file(&out)?;
            println!("wrote {} ({})", out.display(), inst.instance_ref());
        }
    }
    Ok(())
}

fn sample(kind: SampleKind) -> anyhow::Result<()> {
    match kind {
        SampleKind::Awl {
            common,
            seed,
            flatness,
            flat_target,
            bin_width,
            epsilon,
            max_size,
            min_size,
            trace,
        } => {
            let inst = LandscapeInstance::read_file(&common.instance)?;
            inst.ensure_evaluatable()?;
            let bins = BinLayout::build(&inst, bin_width)?;
            let params = WlParams { flatness, epsilon, flat_target, max_size, min_size, seed };
            let run = sampling::awl_sample(&inst, &bins, &params)?;
            run.sample.write_file(&common.out)?;
            if let Some(trace_path) = trace {
                experiment::write_awl_trace_csv(&trace_path, &run)?;
            }
            println!(
                "wrote {} ({} points, coverage {:.3}, stop {:?})",
                common.out.display(),
                run.sample.len(),
                run.sample.coverage(),
                run.trace.stop
            );
        }
        SampleKind::Rand { common, size, seed } => {
            let inst = LandscapeInstance::read_file(&common.instance)?;
            let s = sampling::rand_sample(&inst, size, seed)?;
            s.write_file(&common.out)?;
            println!("wrote {} ({} points)", common.out.display(), s.len());
        }
        SampleKind::Enum { common } => {
            let inst = LandscapeInstance::read_file(&common.instance)?;
            let s = sampling::enumerate(&inst)?;
            s.write_file(&common.out)?;
            println!("wrote {} ({} points)", common.out.display(), s.len());
        }
    }
    Ok(())
}

fn walk(args: WalkArgs) -> anyhow::Result<()> {
    let sample = Sample::read_file(&args.sample)?;
    let strategy = Strategy::from_str(&args.strategy)?;
    let walks = walks::walk_all(&sample, strategy, None, args.budget, args.seed, args.repeats)?;
    walks::write_walks_jsonl(&args.out, &sample, &walks)?;
    println!("wrote {} ({} walks)", args.out.display(), walks.len());
    Ok(())
}

fn plops(args: PlopsArgs) -> anyhow::Result<()> {
    let sample = Sample::read_file(&args.sample)?;
    let inst = LandscapeInstance::read_file(&args.instance)?;
    inst.ensure_evaluatable()?;
    let walks = walks::read_walks_jsonl(&args.walks, &sample)?;
    let report = detect_plops(&sample, &walks);
    let n = inst.n();
    let counts = plef_counts(&inst.fitness_table()?, n);
    let plef: Vec<f64> = sample
        .points()
        .iter()
        .map(|sp| counts[sp.bits.index() as usize] as f64 / n as f64)
        .collect();
    write_report_csv(&args.out, &sample, &report, &plef)?;
    println!(
        "wrote {} ({} points, {} PLOPs)",
        args.out.display(),
        sample.len(),
        report.plop_count()
    );
    Ok(())
}

/// Rebuilds the sample and report from a report CSV; the stored origin tag is
/// irrelevant to downstream math.
fn load_report(path: &Path) -> anyhow::Result<(Sample, LosReport, Vec<u32>)> {
    let rows = read_report_csv(path)?;
    let n = rows[0].bits.len();
    let origin = if rows.len() == 1 << n { SampleOrigin::Enum } else { SampleOrigin::Rand };
    let sample = Sample::from_points(
        origin,
        "report".into(),
        0,
        n,
        rows.iter()
            .map(|r| SamplePoint { bits: r.bits, fitness: r.fitness })
            .collect(),
    );
    if sample.len() != rows.len() {
        anyhow::bail!("report file contains duplicate points");
    }
    let mut los = vec![0.0; sample.len()];
    let mut is_plop = vec![false; sample.len()];
    for r in &rows {
        let idx = sample.index_of(&r.bits).expect("point just inserted");
        los[idx] = r.los;
        is_plop[idx] = r.is_plop;
    }
    let plop_indices: Vec<u32> = is_plop
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u32))
        .collect();
    let report = LosReport {
        instance_ref: "report".into(),
        los,
        is_plop,
        step_stats: landscape_core::plops::accumulate_steps(&[], sample.len()),
    };
    Ok((sample, report, plop_indices))
}

fn basins(args: BasinsArgs) -> anyhow::Result<()> {
    let (sample, report, plop_indices) = load_report(&args.report)?;
    let walks = walks::read_walks_jsonl(&args.walks, &sample)?;
    let basins = build_basins(&walks, &plop_indices, sample.len());
    write_basins_csv(&args.out, &basins, &sample, &report)?;
    println!("wrote {} ({} basins)", args.out.display(), basins.nodes().len());
    Ok(())
}

fn network(kind: NetworkKind) -> anyhow::Result<()> {
    let common = match &kind {
        NetworkKind::Temperature { common } => common,
        NetworkKind::Overlap { common, .. } => common,
    };
    let (sample, _report, plop_indices) = load_report(&common.report)?;
    let walk_records = walks::read_walks_jsonl(&common.walks, &sample)?;
    let net = match &kind {
        NetworkKind::Temperature { .. } => {
            step_size_barriers(&plop_indices, &walk_records, &sample)
        }
        NetworkKind::Overlap { exclude_nonwalk, exclusion_rule, .. } => {
            let basins = build_basins(&walk_records, &plop_indices, sample.len());
            let net = landscape_core::networks::basin_overlap_network(&basins, &sample);
            if *exclude_nonwalk {
                let rule = match exclusion_rule.as_str() {
                    "same-walk" => ExclusionRule::SameWalk,
                    "any-walk" => ExclusionRule::AnyWalk,
                    other => anyhow::bail!("unknown exclusion rule {other:?}"),
                };
                exclude_nonwalk_edges(&net, &walk_records, rule)
            } else {
                net
            }
        }
    };
    net.write_edges_csv(&common.out)?;
    println!(
        "wrote {} ({} nodes, {} edges)",
        common.out.display(),
        net.node_count(),
        net.edge_count()
    );
    if let Some(stats_path) = &common.stats_out {
        let st = network_stats(&net, common.path_sample_cap, common.seed)?;
        std::fs::write(stats_path, serde_json::to_string_pretty(&st)?)?;
        println!("wrote {}", stats_path.display());
    }
    Ok(())
}

fn stats(args: StatsArgs) -> anyhow::Result<()> {
    // nodes and fitness are not in the edge list; rebuild nodes from the
    // listed endpoints (fitness is not needed for these statistics)
    let mut reader = csv::Reader::from_path(&args.edges).map_err(CoreError::Csv)?;
    let mut edges: Vec<(BitPoint, BitPoint, f64)> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(CoreError::Csv)?;
        if row.len() != 3 {
            anyhow::bail!("edge row must be (src_bits, dst_bits, weight)");
        }
        edges.push((
            row[0].parse()?,
            row[1].parse()?,
            row[2]
                .parse::<f64>()
                .with_context(|| format!("bad weight {:?}", &row[2]))?,
        ));
    }
    if edges.is_empty() {
        anyhow::bail!("edge list {} is empty", args.edges.display());
    }
    let n = edges[0].0.len();
    let mut points: Vec<BitPoint> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
    points.sort_unstable();
    points.dedup();
    let sample = Sample::from_points(
        SampleOrigin::Rand,
        "edges".into(),
        0,
        n,
        points
            .iter()
            .map(|&bits| SamplePoint { bits, fitness: 0.0 })
            .collect(),
    );
    let indices: Vec<u32> = (0..sample.len() as u32).collect();
    let edge_list: Vec<(u32, u32, f64)> = edges
        .iter()
        .map(|(a, b, w)| {
            (
                sample.index_of(a).expect("endpoint collected above") as u32,
                sample.index_of(b).expect("endpoint collected above") as u32,
                *w,
            )
        })
        .collect();
    let net = WeightedDigraph::from_parts(&indices, &sample, &edge_list)?;
    let st = network_stats(&net, args.path_sample_cap, args.seed)?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&st)?)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn experiment_cmd(args: ExperimentArgs) -> anyhow::Result<ExitCode> {
    if let Some(workers) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    if args.emit_only {
        landscape_lab::emit_plot_data(&args.out_dir)?;
        println!("emitted plot data under {}", args.out_dir.display());
        return Ok(ExitCode::SUCCESS);
    }
    let config_path = args
        .config
        .ok_or_else(|| CoreError::Input("--config is required unless --emit-only".into()))?;
    let mut config = ExperimentConfig::read_file(&config_path)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let bundle = experiment::run_experiment(&config, &args.out_dir)?;
    landscape_lab::emit_plot_data(&args.out_dir)?;
    println!(
        "completed {}/{} instances; bundle at {}",
        bundle.instances.len(),
        config.instance_count,
        args.out_dir.join("bundle.json").display()
    );
    if !bundle.failures.is_empty() {
        for f in &bundle.failures {
            eprintln!("instance {} failed: {}", f.index, f.error);
        }
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}
