//! End-to-end checks of the CLI surface: stage-by-stage runs reproduce the
//! orchestrated pipeline, reruns are byte-identical, and exit codes follow
//! the documented classes.

use std::fs;
use std::path::Path;
use std::process::Command;

use landscape_lab::experiment::{
    derive_seed, ExperimentConfig, ProblemSpec, SamplerConfig, WalkConfig,
};
use landscape_core::networks::ExclusionRule;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_landscape-lab"))
}

fn small_config(master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        problem: ProblemSpec::Nk { n: 8, k: 3 },
        instance_count: 2,
        conditions: vec!["ENUM".into(), "AWL".into(), "RAND".into()],
        sampler: SamplerConfig::default(),
        walk: WalkConfig { budget: 25, repeats: 1, estimators: true },
        master_seed,
        path_sample_cap: 1000,
        exclusion_rule: ExclusionRule::SameWalk,
        persist_samples: true,
    }
}

fn tree_bytes(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = walkdir::WalkDir::new(root)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(root).unwrap().display().to_string();
            (rel, fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort_by(|a, b| a.0.cmp(&b.0));
    files
}

#[test]
fn rerun_is_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let cfg = small_config(31);
    landscape_lab::run_experiment(&cfg, dir_a.path()).unwrap();
    landscape_lab::emit_plot_data(dir_a.path()).unwrap();
    landscape_lab::run_experiment(&cfg, dir_b.path()).unwrap();
    landscape_lab::emit_plot_data(dir_b.path()).unwrap();

    let a = tree_bytes(dir_a.path());
    let b = tree_bytes(dir_b.path());
    assert_eq!(a.len(), b.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between reruns");
    }
}

#[test]
fn staged_cli_reproduces_orchestrated_outputs() {
    // run the orchestrated experiment, then rebuild one instance's pipeline
    // with individual CLI invocations from the persisted intermediates
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(77);
    landscape_lab::run_experiment(&cfg, dir.path()).unwrap();

    let inst_dir = dir.path().join("instances/inst_001");
    let stage = tempfile::tempdir().unwrap();
    let walks = stage.path().join("walks.jsonl");
    let report = stage.path().join("report.csv");

    let walk_seed = derive_seed(77, "walk-enum", 1);
    let status = bin()
        .args([
            "walk",
            "--sample",
            inst_dir.join("sample_enum.json").to_str().unwrap(),
            "--strategy",
            "exhaustive",
            "--seed",
            &walk_seed.to_string(),
            "--out",
            walks.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let status = bin()
        .args([
            "plops",
            "--sample",
            inst_dir.join("sample_enum.json").to_str().unwrap(),
            "--walks",
            walks.to_str().unwrap(),
            "--instance",
            inst_dir.join("instance.json").to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let orchestrated = fs::read(inst_dir.join("report_enum.csv")).unwrap();
    let staged = fs::read(&report).unwrap();
    assert_eq!(orchestrated, staged, "staged report differs from end-to-end");

    // basins and networks from the same staged files
    let basins_csv = stage.path().join("basins.csv");
    let status = bin()
        .args([
            "basins",
            "--walks",
            walks.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
            "--out",
            basins_csv.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(inst_dir.join("basins_enum.csv")).unwrap(),
        fs::read(&basins_csv).unwrap()
    );

    let edges = stage.path().join("temperature.csv");
    let status = bin()
        .args([
            "network",
            "temperature",
            "--walks",
            walks.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
            "--out",
            edges.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(inst_dir.join("temperature_enum.csv")).unwrap(),
        fs::read(&edges).unwrap()
    );

    let overlap = stage.path().join("overlap.csv");
    let stats_json = stage.path().join("overlap_stats.json");
    let status = bin()
        .args([
            "network",
            "overlap",
            "--walks",
            walks.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
            "--out",
            overlap.to_str().unwrap(),
            "--stats-out",
            stats_json.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(inst_dir.join("overlap_enum.csv")).unwrap(),
        fs::read(&overlap).unwrap()
    );

    // standalone stats command works on the emitted edge list
    let stats_out = stage.path().join("stats.json");
    let status = bin()
        .args([
            "stats",
            "--edges",
            overlap.to_str().unwrap(),
            "--out",
            stats_out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&stats_out).unwrap();
    assert!(text.contains("clustering_coefficient"));
}

#[test]
fn generate_sample_roundtrip_through_binary() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let status = bin()
        .args(["generate", "nk", "--n", "8", "--k", "2", "--seed", "5"])
        .args(["--out", inst.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let sample = dir.path().join("awl.json");
    let trace = dir.path().join("trace.csv");
    let status = bin()
        .args(["sample", "awl", "--instance", inst.to_str().unwrap()])
        .args(["--seed", "9", "--out", sample.to_str().unwrap()])
        .args(["--trace", trace.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(trace.exists());
    let s = landscape_core::Sample::read_file(&sample).unwrap();
    assert!(!s.is_empty() && s.len() <= 256);

    let enum_out = dir.path().join("enum.json");
    let status = bin()
        .args(["sample", "enum", "--instance", inst.to_str().unwrap()])
        .args(["--out", enum_out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(landscape_core::Sample::read_file(&enum_out).unwrap().len(), 256);
}

#[test]
fn exit_codes_follow_error_classes() {
    let dir = tempfile::tempdir().unwrap();

    // input error: k out of range -> 1
    let status = bin()
        .args(["generate", "nk", "--n", "8", "--k", "8", "--seed", "0"])
        .args(["--out", dir.path().join("x.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // configuration/capability error: sampling an unimplemented variant -> 2
    let hiffm = dir.path().join("hiffm.json");
    let status = bin()
        .args(["generate", "hiff", "--n", "8", "--variant", "hiffm"])
        .args(["--out", hiffm.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0), "generating the file itself is fine");
    let status = bin()
        .args(["sample", "enum", "--instance", hiffm.to_str().unwrap()])
        .args(["--out", dir.path().join("s.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // missing file -> 1
    let status = bin()
        .args(["sample", "enum", "--instance", "/nonexistent.json"])
        .args(["--out", dir.path().join("s.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn emit_only_rewrites_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(3);
    landscape_lab::run_experiment(&cfg, dir.path()).unwrap();
    let status = bin()
        .args(["experiment", "--emit-only"])
        .args(["--out-dir", dir.path().to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    for f in [
        "plots/metrics_long.csv",
        "tables/table1_overestimation.csv",
        "tables/table2_correlation.csv",
        "tables/table3_correlation_diffs.csv",
        "figures/fig5_capture.csv",
        "figures/fig6_detection.csv",
        "figures/fig12_estimators.csv",
        "plots/degree_distributions.csv",
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
}

#[test]
fn hiff_experiment_runs_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(12);
    cfg.problem = ProblemSpec::Hiff {
        n: 8,
        variant: landscape_core::HiffVariant::Classic,
    };
    cfg.sampler.bin_width = 2.0;
    cfg.walk.estimators = false;
    cfg.instance_count = 1;
    let bundle = landscape_lab::run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(bundle.instances.len(), 1);
    let enum_metrics = &bundle.instances[0].conditions[0];
    // classic HIFF at n=8 has exactly two global optima and they are LOs
    assert!(enum_metrics.detection.plef_lo_count_total >= 2);
}
