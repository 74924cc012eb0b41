//! End-to-end experiment orchestration: seeded instances, the three sampling
//! conditions, walks, PLOP detection, basins, networks and estimator
//! comparisons, with per-instance files and an aggregated bundle on disk.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use landscape_core::basins::{build_basins, fitness_basin_correlation, write_basins_csv};
use landscape_core::error::Error as CoreError;
use landscape_core::networks::{
    basin_overlap_network, exclude_nonwalk_edges, network_stats, step_size_barriers,
    temperature_stats, ExclusionRule, NetworkStats, TemperatureStats,
};
use landscape_core::plops::{
    detect_plops, detection_metrics, estimator_metrics, plef_counts, write_report_csv,
    DetectionMetrics, LosReport,
};
use landscape_core::problems::{HiffVariant, LandscapeInstance};
use landscape_core::sampling::{self, AwlRun, BinLayout, Sample, StopReason, WlParams};
use landscape_core::stats::{self, SpearmanResult};
use landscape_core::walks::{build_neighbor_table, walk_all, Strategy};
use landscape_core::Result;

pub const CONDITIONS: [&str; 3] = ["ENUM", "AWL", "RAND"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemSpec {
    Nk { n: usize, k: usize },
    Hiff { n: usize, variant: HiffVariant },
}

impl ProblemSpec {
    pub fn instantiate(&self, seed: u64) -> Result<LandscapeInstance> {
        match *self {
            ProblemSpec::Nk { n, k } => LandscapeInstance::generate_nk(n, k, seed),
            ProblemSpec::Hiff { n, variant } => LandscapeInstance::hiff(n, variant),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            ProblemSpec::Nk { n, .. } | ProblemSpec::Hiff { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub flatness: f64,
    pub epsilon: f64,
    pub flat_target: u32,
    pub bin_width: f64,
    pub max_size: Option<usize>,
    pub min_size: Option<usize>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            flatness: 0.85,
            epsilon: 1e-8,
            flat_target: 5,
            bin_width: 0.1,
            max_size: None,
            min_size: None,
        }
    }
}

impl SamplerConfig {
    pub fn wl_params(&self, seed: u64) -> WlParams {
        WlParams {
            flatness: self.flatness,
            epsilon: self.epsilon,
            flat_target: self.flat_target,
            max_size: self.max_size,
            min_size: self.min_size,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkConfig {
    pub budget: usize,
    pub repeats: usize,
    /// Run the dyna/rand/combi comparison against exhaustive walks.
    pub estimators: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { budget: 1000, repeats: 1, estimators: true }
    }
}

/// Full experiment description; the JSON mirror of the CLI flags. The
/// defaults run one NK configuration end to end: 30 instances, all three
/// conditions, flatness 0.85, flat target 5, bin width 0.1, walk budget
/// 1000.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    #[serde(default = "default_instance_count")]
    pub instance_count: u64,
    #[serde(default = "default_conditions")]
    pub conditions: Vec<String>,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub walk: WalkConfig,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_path_cap")]
    pub path_sample_cap: usize,
    #[serde(default = "default_exclusion")]
    pub exclusion_rule: ExclusionRule,
    /// `false` skips writing sample JSON files (everything is regenerable
    /// from the seeds); metrics and reports are always written.
    #[serde(default = "default_true")]
    pub persist_samples: bool,
}

fn default_instance_count() -> u64 {
    30
}
fn default_conditions() -> Vec<String> {
    CONDITIONS.iter().map(|s| s.to_string()).collect()
}
fn default_path_cap() -> usize {
    1000
}
fn default_exclusion() -> ExclusionRule {
    ExclusionRule::SameWalk
}
fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instance_count == 0 {
            return Err(CoreError::Input("instance_count must be >= 1".into()));
        }
        for c in &self.conditions {
            if !CONDITIONS.contains(&c.as_str()) {
                return Err(CoreError::Input(format!("unknown condition {c:?}")));
            }
        }
        if self.has_condition("RAND") && !self.has_condition("AWL") {
            return Err(CoreError::Input(
                "the RAND condition needs AWL for size matching".into(),
            ));
        }
        if self.walk.estimators && !self.has_condition("ENUM") {
            return Err(CoreError::Input(
                "the estimator comparison needs the ENUM condition".into(),
            ));
        }
        if self.walk.repeats == 0 {
            return Err(CoreError::Input("walk repeats must be >= 1".into()));
        }
        Ok(())
    }

    pub fn has_condition(&self, c: &str) -> bool {
        self.conditions.iter().any(|x| x == c)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(CoreError::Json)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Stable seed derivation: the same (master, stage, index) always yields the
/// same seed, independent of platform or library versions.
pub fn derive_seed(master: u64, stage: &str, idx: u64) -> u64 {
    let mut h = 0xcbf29ce484222325u64; // FNV-1a over the stage tag
    for b in stage.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    splitmix64(master ^ h ^ idx.wrapping_mul(0x9e3779b97f4a7c15))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AwlRunInfo {
    pub iterations: u64,
    pub flat_count: u32,
    pub stop: StopReason,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionMetrics {
    pub condition: String,
    pub sample_size: usize,
    pub coverage: f64,
    pub detection: DetectionMetrics,
    pub correlation: Option<SpearmanResult>,
    pub temperature: TemperatureStats,
    pub overlap_stats: Option<NetworkStats>,
    pub overlap_excluded_stats: Option<NetworkStats>,
    pub awl: Option<AwlRunInfo>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorRow {
    pub strategy: String,
    pub est_plop_count: usize,
    pub false_positive: Option<f64>,
    pub false_negative: Option<f64>,
    pub overlap: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceMetrics {
    pub index: u64,
    pub instance_ref: String,
    pub seeds: BTreeMap<String, u64>,
    pub conditions: Vec<ConditionMetrics>,
    pub estimators: Vec<EstimatorRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub index: u64,
    pub error: String,
}

/// Everything run_experiment computed, persisted as `bundle.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultBundle {
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceMetrics>,
    pub failures: Vec<InstanceFailure>,
    pub aggregates: Aggregates,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionAggregate {
    pub condition: String,
    pub instances: usize,
    /// Table-1 style: average PLOP count over average plef-LO count.
    pub overestimation_factor: Option<f64>,
    pub mean_plop_count: f64,
    pub mean_plef_lo_total: f64,
    pub mean_detection_rate: Option<f64>,
    pub detection_rate_ci95: Option<(f64, f64)>,
    pub mean_capture_rate: Option<f64>,
    pub capture_rate_ci95: Option<(f64, f64)>,
    pub mean_coverage: f64,
    pub mean_correlation: Option<f64>,
    pub correlation_sd: Option<f64>,
    pub significant_correlations: usize,
    pub mean_clustering: Option<f64>,
    pub mean_link_density: Option<f64>,
    pub mean_avg_path_length: Option<f64>,
    pub mean_degree_cv: Option<f64>,
    pub mean_degree_cv_excluded: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairedComparison {
    pub quantity: String,
    pub pair: String,
    pub pairs_used: usize,
    pub mad: f64,
    pub rmsd: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorAggregate {
    pub strategy: String,
    pub instances: usize,
    pub mean_false_positive: Option<f64>,
    pub mean_false_negative: Option<f64>,
    pub mean_overlap: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Aggregates {
    pub conditions: Vec<ConditionAggregate>,
    /// Table 3/4/5 style MAD and RMSD comparisons against ENUM.
    pub paired: Vec<PairedComparison>,
    pub estimators: Vec<EstimatorAggregate>,
}

struct EnumData {
    sample: Sample,
    report: LosReport,
}

/// Runs the full pipeline for one instance and writes its files under
/// `dir` (if given).
fn run_instance(
    config: &ExperimentConfig,
    idx: u64,
    dir: Option<&Path>,
) -> Result<InstanceMetrics> {
    let mut seeds = BTreeMap::new();
    let mut seed = |stage: &str| {
        let s = derive_seed(config.master_seed, stage, idx);
        seeds.insert(stage.to_string(), s);
        s
    };

    let inst = config.problem.instantiate(seed("instance"))?;
    inst.ensure_evaluatable()?;
    if let Some(dir) = dir {
        inst.write_file(&dir.join("instance.json"))?;
    }

    // AWL first: RAND sizes are matched to it.
    let mut awl_data: Option<AwlRun> = None;
    if config.has_condition("AWL") {
        let bins = BinLayout::build(&inst, config.sampler.bin_width)?;
        let params = config.sampler.wl_params(seed("awl"));
        awl_data = Some(sampling::awl_sample(&inst, &bins, &params)?);
    }
    let plef: Option<Vec<u8>> = dir
        .map(|_| Ok::<_, CoreError>(plef_counts(&inst.fitness_table()?, inst.n())))
        .transpose()?;

    let mut conditions = Vec::new();
    let mut enum_data: Option<EnumData> = None;
    for cond in CONDITIONS {
        if !config.has_condition(cond) {
            continue;
        }
        let (sample, awl_info) = match cond {
            "ENUM" => (sampling::enumerate(&inst)?, None),
            "AWL" => {
                let run = awl_data.as_ref().unwrap();
                let info = AwlRunInfo {
                    iterations: run.trace.iterations,
                    flat_count: run.state.flat_count,
                    stop: run.trace.stop,
                };
                (run.sample.clone(), Some(info))
            }
            "RAND" => {
                let size = awl_data.as_ref().unwrap().sample.len();
                (sampling::rand_sample(&inst, size, seed("rand"))?, None)
            }
            _ => unreachable!(),
        };

        let walk_seed = seed(&format!("walk-{}", cond.to_lowercase()));
        let table = build_neighbor_table(&sample);
        let walks = walk_all(
            &sample,
            Strategy::Exhaustive,
            Some(&table),
            0,
            walk_seed,
            config.walk.repeats,
        )?;
        let report = detect_plops(&sample, &walks);
        let detection = detection_metrics(&report, &sample, &inst)?;
        let basins = build_basins(&walks, &report.plop_indices(), sample.len());
        let correlation = fitness_basin_correlation(&basins, &report, &sample).ok();

        let temperature_net = step_size_barriers(&report.plop_indices(), &walks, &sample);
        let temperature = temperature_stats(&temperature_net);

        let overlap_net = basin_overlap_network(&basins, &sample);
        let stats_seed = seed(&format!("paths-{}", cond.to_lowercase()));
        let overlap_stats =
            network_stats(&overlap_net, config.path_sample_cap, stats_seed).ok();
        let excluded = exclude_nonwalk_edges(&overlap_net, &walks, config.exclusion_rule);
        let overlap_excluded_stats =
            network_stats(&excluded, config.path_sample_cap, stats_seed).ok();

        if let Some(dir) = dir {
            let suffix = cond.to_lowercase();
            if config.persist_samples {
                sample.write_file(&dir.join(format!("sample_{suffix}.json")))?;
            }
            let n = inst.n();
            let counts = plef.as_ref().expect("computed when dir is set");
            let plef_vals: Vec<f64> = sample
                .points()
                .iter()
                .map(|sp| counts[sp.bits.index() as usize] as f64 / n as f64)
                .collect();
            write_report_csv(
                &dir.join(format!("report_{suffix}.csv")),
                &sample,
                &report,
                &plef_vals,
            )?;
            write_basins_csv(&dir.join(format!("basins_{suffix}.csv")), &basins, &sample, &report)?;
            temperature_net.write_edges_csv(&dir.join(format!("temperature_{suffix}.csv")))?;
            overlap_net.write_edges_csv(&dir.join(format!("overlap_{suffix}.csv")))?;
            excluded.write_edges_csv(&dir.join(format!("overlap_excluded_{suffix}.csv")))?;
            if cond == "AWL" {
                write_awl_trace_csv(&dir.join("awl_trace.csv"), awl_data.as_ref().unwrap())?;
            }
        }

        conditions.push(ConditionMetrics {
            condition: cond.to_string(),
            sample_size: sample.len(),
            coverage: sample.coverage(),
            detection,
            correlation,
            temperature,
            overlap_stats,
            overlap_excluded_stats,
            awl: awl_info,
        });
        if cond == "ENUM" {
            enum_data = Some(EnumData { sample, report });
        }
    }

    let mut estimators = Vec::new();
    if config.walk.estimators {
        let enum_data = enum_data.as_ref().expect("validated: estimators need ENUM");
        let act = enum_data.report.plop_points(&enum_data.sample);
        for strategy in [Strategy::Dyna, Strategy::Rand, Strategy::Combi] {
            let tag = format!("{strategy:?}").to_lowercase();
            let walks = walk_all(
                &enum_data.sample,
                strategy,
                None,
                config.walk.budget,
                seed(&format!("walk-{tag}")),
                config.walk.repeats,
            )?;
            let est = detect_plops(&enum_data.sample, &walks).plop_points(&enum_data.sample);
            let m = estimator_metrics(&est, &act);
            estimators.push(EstimatorRow {
                strategy: tag,
                est_plop_count: est.len(),
                false_positive: m.false_positive,
                false_negative: m.false_negative,
                overlap: m.overlap,
            });
        }
    }

    Ok(InstanceMetrics {
        index: idx,
        instance_ref: inst.instance_ref(),
        seeds,
        conditions,
        estimators,
    })
}

/// CSV trace of one AWL run: flatness events plus thinned sample-growth
/// rows (the modification factor f is written to four decimal places).
pub fn write_awl_trace_csv(path: &Path, run: &AwlRun) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record(["iteration", "sample_size", "event", "ln_f", "f"])
        .map_err(CoreError::Csv)?;
    let growth = &run.trace.growth;
    let stride = growth.len().div_ceil(2000).max(1);
    let mut rows: Vec<(u64, usize, String, String, String)> = growth
        .iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0 || *i + 1 == growth.len())
        .map(|(_, &(it, size))| (it, size, "growth".into(), String::new(), String::new()))
        .collect();
    for ev in &run.trace.flat_events {
        rows.push((
            ev.iteration,
            ev.sample_size,
            "flat".into(),
            format!("{}", ev.ln_f_after),
            format!("{:.4}", ev.ln_f_after.exp()),
        ));
    }
    rows.sort_by_key(|r| (r.0, r.2.clone()));
    rows.push((
        run.trace.iterations,
        run.sample.len(),
        format!("stop:{:?}", run.trace.stop),
        String::new(),
        String::new(),
    ));
    for (it, size, event, ln_f, f) in rows {
        w.write_record([it.to_string(), size.to_string(), event, ln_f, f])
            .map_err(CoreError::Csv)?;
    }
    w.flush()?;
    Ok(())
}

fn aggregate(config: &ExperimentConfig, instances: &[InstanceMetrics]) -> Aggregates {
    let mut out = Aggregates::default();

    let collect_cond = |cond: &str| -> Vec<&ConditionMetrics> {
        instances
            .iter()
            .flat_map(|i| i.conditions.iter().filter(|c| c.condition == cond))
            .collect()
    };

    for cond in CONDITIONS {
        if !config.has_condition(cond) {
            continue;
        }
        let rows = collect_cond(cond);
        if rows.is_empty() {
            continue;
        }
        let n = rows.len();
        let mean_of = |xs: &[f64]| -> Option<f64> { (!xs.is_empty()).then(|| stats::mean(xs)) };
        let opt_vals = |f: &dyn Fn(&ConditionMetrics) -> Option<f64>| -> Vec<f64> {
            rows.iter().filter_map(|r| f(r)).collect()
        };

        let plops: Vec<f64> = rows.iter().map(|r| r.detection.plop_count as f64).collect();
        let lo_total: Vec<f64> = rows
            .iter()
            .map(|r| r.detection.plef_lo_count_total as f64)
            .collect();
        let detection = opt_vals(&|r| r.detection.detection_rate);
        let capture = opt_vals(&|r| r.detection.capture_rate);
        let rho = opt_vals(&|r| r.correlation.map(|c| c.rho));
        let significant = rows
            .iter()
            .filter(|r| r.correlation.is_some_and(|c| c.p_value <= 0.05))
            .count();
        let coverage: Vec<f64> = rows.iter().map(|r| r.coverage).collect();

        let mean_lo = stats::mean(&lo_total);
        out.conditions.push(ConditionAggregate {
            condition: cond.to_string(),
            instances: n,
            overestimation_factor: (mean_lo > 0.0).then(|| stats::mean(&plops) / mean_lo),
            mean_plop_count: stats::mean(&plops),
            mean_plef_lo_total: mean_lo,
            mean_detection_rate: mean_of(&detection),
            detection_rate_ci95: stats::confidence_interval_95(&detection).ok(),
            mean_capture_rate: mean_of(&capture),
            capture_rate_ci95: stats::confidence_interval_95(&capture).ok(),
            mean_coverage: stats::mean(&coverage),
            mean_correlation: mean_of(&rho),
            correlation_sd: (rho.len() >= 2).then(|| stats::std_dev(&rho)),
            significant_correlations: significant,
            mean_clustering: mean_of(&opt_vals(&|r| {
                r.overlap_stats.as_ref().map(|s| s.clustering_coefficient)
            })),
            mean_link_density: mean_of(&opt_vals(&|r| {
                r.overlap_stats.as_ref().map(|s| s.link_density)
            })),
            mean_avg_path_length: mean_of(&opt_vals(&|r| {
                r.overlap_stats.as_ref().and_then(|s| s.avg_path_length)
            })),
            mean_degree_cv: mean_of(&opt_vals(&|r| {
                r.overlap_stats.as_ref().and_then(|s| s.degree_cv)
            })),
            mean_degree_cv_excluded: mean_of(&opt_vals(&|r| {
                r.overlap_excluded_stats.as_ref().and_then(|s| s.degree_cv)
            })),
        });
    }

    // Table 3/4/5 style comparisons: ENUM vs AWL and ENUM vs RAND.
    type Extract = fn(&ConditionMetrics) -> Option<f64>;
    let paired_quantities: [(&str, Extract); 3] = [
        ("correlation", |r| {
            r.correlation
                .and_then(|c| (c.p_value <= 0.05).then_some(c.rho))
        }),
        ("all_nodes_avg_mode_sb", |r| r.temperature.all_nodes_avg_mode_sb),
        ("fittest_node_mode_sb", |r| r.temperature.fittest_node_mode_sb),
    ];
    for other in ["AWL", "RAND"] {
        if !config.has_condition("ENUM") || !config.has_condition(other) {
            continue;
        }
        for (name, extract) in &paired_quantities {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for inst in instances {
                let v_enum = inst
                    .conditions
                    .iter()
                    .find(|c| c.condition == "ENUM")
                    .and_then(extract);
                let v_other = inst
                    .conditions
                    .iter()
                    .find(|c| c.condition == other)
                    .and_then(extract);
                if let (Some(x), Some(y)) = (v_enum, v_other) {
                    a.push(x);
                    b.push(y);
                }
            }
            if a.is_empty() {
                continue;
            }
            let series = stats::PairedSeries::new(a, b).expect("equal lengths");
            let md = stats::mad_rmsd(&series);
            out.paired.push(PairedComparison {
                quantity: name.to_string(),
                pair: format!("ENUM,{other}"),
                pairs_used: series.a.len(),
                mad: md.mad,
                rmsd: md.rmsd,
            });
        }
    }

    if config.walk.estimators {
        for strategy in ["dyna", "rand", "combi"] {
            let rows: Vec<&EstimatorRow> = instances
                .iter()
                .flat_map(|i| i.estimators.iter().filter(|e| e.strategy == strategy))
                .collect();
            if rows.is_empty() {
                continue;
            }
            let vals = |f: &dyn Fn(&EstimatorRow) -> Option<f64>| -> Vec<f64> {
                rows.iter().filter_map(|r| f(r)).collect()
            };
            let mean_opt = |xs: Vec<f64>| (!xs.is_empty()).then(|| stats::mean(&xs));
            out.estimators.push(EstimatorAggregate {
                strategy: strategy.to_string(),
                instances: rows.len(),
                mean_false_positive: mean_opt(vals(&|r| r.false_positive)),
                mean_false_negative: mean_opt(vals(&|r| r.false_negative)),
                mean_overlap: mean_opt(vals(&|r| r.overlap)),
            });
        }
    }

    out
}

/// Runs the configured experiment, writing per-instance files and
/// `bundle.json` under `out_dir`. A failing instance is recorded and skipped;
/// aggregation proceeds over the completed ones.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ResultBundle> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;

    let results: Vec<std::result::Result<InstanceMetrics, InstanceFailure>> = (0..config
        .instance_count)
        .into_par_iter()
        .map(|idx| {
            let dir: PathBuf = out_dir.join(format!("instances/inst_{idx:03}"));
            let made = fs::create_dir_all(&dir);
            match made {
                Err(e) => Err(InstanceFailure { index: idx, error: e.to_string() }),
                Ok(()) => run_instance(config, idx, Some(&dir))
                    .map_err(|e| InstanceFailure { index: idx, error: e.to_string() }),
            }
        })
        .collect();

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(m) => instances.push(m),
            Err(f) => failures.push(f),
        }
    }
    let aggregates = aggregate(config, &instances);
    let bundle = ResultBundle {
        config: config.clone(),
        instances,
        failures,
        aggregates,
    };
    fs::write(
        out_dir.join("bundle.json"),
        serde_json::to_string_pretty(&bundle).map_err(CoreError::Json)?,
    )?;
    Ok(bundle)
}
