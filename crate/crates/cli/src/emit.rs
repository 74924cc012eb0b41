//! Long-format CSV emission from a persisted result bundle, suitable for
//! external plotting tools.

use std::fs;
use std::path::Path;

use landscape_core::error::Error as CoreError;
use landscape_core::Result;

use crate::experiment::{ConditionMetrics, ResultBundle};

fn named_gap(what: &str) -> CoreError {
    CoreError::Input(format!("bundle is missing the {what} component"))
}

pub fn read_bundle(out_dir: &Path) -> Result<ResultBundle> {
    let path = out_dir.join("bundle.json");
    if !path.exists() {
        return Err(named_gap("bundle.json"));
    }
    serde_json::from_str(&fs::read_to_string(path)?).map_err(CoreError::Json)
}

/// Writes every derived table and figure CSV from `bundle.json` under
/// `out_dir`: tables/ (aggregate comparisons), figures/ (per-figure data)
/// and plots/metrics_long.csv (one row per instance, condition and metric).
pub fn emit_plot_data(out_dir: &Path) -> Result<()> {
    let bundle = read_bundle(out_dir)?;
    let tables = out_dir.join("tables");
    let figures = out_dir.join("figures");
    let plots = out_dir.join("plots");
    fs::create_dir_all(&tables)?;
    fs::create_dir_all(&figures)?;
    fs::create_dir_all(&plots)?;

    write_metrics_long(&plots.join("metrics_long.csv"), &bundle)?;
    write_table1(&tables.join("table1_overestimation.csv"), &bundle)?;
    write_table2(&tables.join("table2_correlation.csv"), &bundle)?;
    write_paired_tables(&tables, &bundle)?;
    write_condition_figures(&figures, &bundle)?;
    write_estimator_figure(&figures.join("fig12_estimators.csv"), &bundle)?;
    write_degree_distributions(&plots.join("degree_distributions.csv"), &bundle)?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "NA".into())
}

fn for_each_metric(c: &ConditionMetrics, mut f: impl FnMut(&str, Option<f64>)) {
    f("sample_size", Some(c.sample_size as f64));
    f("coverage", Some(c.coverage));
    f("plop_count", Some(c.detection.plop_count as f64));
    f("plef_lo_in_sample", Some(c.detection.plef_lo_count_in_sample as f64));
    f("plef_lo_total", Some(c.detection.plef_lo_count_total as f64));
    f("detection_rate", c.detection.detection_rate);
    f("capture_rate", c.detection.capture_rate);
    f("overestimation_factor", c.detection.overestimation_factor);
    f("plop_mean_plef", c.detection.plop_mean_plef);
    f("sample_mean_plef", Some(c.detection.sample_mean_plef));
    f("plop_mean_fitness", c.detection.plop_mean_fitness);
    f("sample_mean_fitness", Some(c.detection.sample_mean_fitness));
    f("correlation_rho", c.correlation.map(|s| s.rho));
    f("correlation_p", c.correlation.map(|s| s.p_value));
    f("all_nodes_avg_mode_sb", c.temperature.all_nodes_avg_mode_sb);
    f("fittest_node_mode_sb", c.temperature.fittest_node_mode_sb);
    if let Some(s) = &c.overlap_stats {
        f("overlap_nodes", Some(s.node_count as f64));
        f("overlap_edges", Some(s.edge_count as f64));
        f("overlap_mean_degree", Some(s.mean_degree));
        f("overlap_link_density", Some(s.link_density));
        f("overlap_clustering", Some(s.clustering_coefficient));
        f("overlap_avg_path_length", s.avg_path_length);
        f("overlap_degree_cv", s.degree_cv);
        f("overlap_er_path_length", s.er_path_length);
    }
    if let Some(s) = &c.overlap_excluded_stats {
        f("overlap_excluded_edges", Some(s.edge_count as f64));
        f("overlap_excluded_degree_cv", s.degree_cv);
    }
    if let Some(a) = &c.awl {
        f("awl_iterations", Some(a.iterations as f64));
        f("awl_flat_count", Some(a.flat_count as f64));
    }
}

fn write_metrics_long(path: &Path, bundle: &ResultBundle) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record(["instance", "condition", "metric", "value"])
        .map_err(CoreError::Csv)?;
    for inst in &bundle.instances {
        for c in &inst.conditions {
            let mut rows: Vec<(String, String)> = Vec::new();
            for_each_metric(c, |name, value| {
                rows.push((name.to_string(), fmt_opt(value)));
            });
            for (metric, value) in rows {
                w.write_record([
                    inst.index.to_string(),
                    c.condition.clone(),
                    metric,
                    value,
                ])
                .map_err(CoreError::Csv)?;
            }
        }
        for e in &inst.estimators {
            for (metric, value) in [
                ("estimator_fp", e.false_positive),
                ("estimator_fn", e.false_negative),
                ("estimator_overlap", e.overlap),
            ] {
                w.write_record([
                    inst.index.to_string(),
                    e.strategy.clone(),
                    metric.to_string(),
                    fmt_opt(value),
                ])
                .map_err(CoreError::Csv)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_table1(path: &Path, bundle: &ResultBundle) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record([
        "condition",
        "instances",
        "mean_plop_count",
        "mean_plef_lo_total",
        "overestimation_factor",
    ])
    .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        w.write_record([
            a.condition.clone(),
            a.instances.to_string(),
            a.mean_plop_count.to_string(),
            a.mean_plef_lo_total.to_string(),
            fmt_opt(a.overestimation_factor),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;
    Ok(())
}

fn write_table2(path: &Path, bundle: &ResultBundle) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record(["condition", "mean_rho", "sd_rho", "significant", "instances"])
        .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        w.write_record([
            a.condition.clone(),
            fmt_opt(a.mean_correlation),
            fmt_opt(a.correlation_sd),
            a.significant_correlations.to_string(),
            a.instances.to_string(),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;
    Ok(())
}

fn write_paired_tables(tables: &Path, bundle: &ResultBundle) -> Result<()> {
    let files = [
        ("correlation", "table3_correlation_diffs.csv"),
        ("all_nodes_avg_mode_sb", "table4_avg_mode_sb_diffs.csv"),
        ("fittest_node_mode_sb", "table5_fittest_mode_sb_diffs.csv"),
    ];
    for (quantity, file) in files {
        let mut w = csv::Writer::from_path(tables.join(file)).map_err(CoreError::Csv)?;
        w.write_record(["pair", "pairs_used", "mad", "rmsd"])
            .map_err(CoreError::Csv)?;
        for p in bundle
            .aggregates
            .paired
            .iter()
            .filter(|p| p.quantity == quantity)
        {
            w.write_record([
                p.pair.clone(),
                p.pairs_used.to_string(),
                p.mad.to_string(),
                p.rmsd.to_string(),
            ])
            .map_err(CoreError::Csv)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn write_condition_figures(figures: &Path, bundle: &ResultBundle) -> Result<()> {
    // Fig 5 capture rates, Fig 6 detection rates, Fig 7 PLOP counts,
    // Fig 9 network statistics, Fig 11 degree CV.
    let mut w =
        csv::Writer::from_path(figures.join("fig5_capture.csv")).map_err(CoreError::Csv)?;
    w.write_record(["condition", "mean_capture_rate", "ci_lo", "ci_hi"])
        .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        let (lo, hi) = a.capture_rate_ci95.map_or((None, None), |(l, h)| (Some(l), Some(h)));
        w.write_record([
            a.condition.clone(),
            fmt_opt(a.mean_capture_rate),
            fmt_opt(lo),
            fmt_opt(hi),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;

    let mut w =
        csv::Writer::from_path(figures.join("fig6_detection.csv")).map_err(CoreError::Csv)?;
    w.write_record(["condition", "mean_detection_rate", "ci_lo", "ci_hi"])
        .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        let (lo, hi) = a
            .detection_rate_ci95
            .map_or((None, None), |(l, h)| (Some(l), Some(h)));
        w.write_record([
            a.condition.clone(),
            fmt_opt(a.mean_detection_rate),
            fmt_opt(lo),
            fmt_opt(hi),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;

    let mut w =
        csv::Writer::from_path(figures.join("fig7_plop_counts.csv")).map_err(CoreError::Csv)?;
    w.write_record(["condition", "mean_plop_count", "mean_plef_lo_total"])
        .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        w.write_record([
            a.condition.clone(),
            a.mean_plop_count.to_string(),
            a.mean_plef_lo_total.to_string(),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(figures.join("fig9_network_stats.csv"))
        .map_err(CoreError::Csv)?;
    w.write_record([
        "condition",
        "mean_link_density",
        "mean_clustering",
        "mean_avg_path_length",
    ])
    .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        w.write_record([
            a.condition.clone(),
            fmt_opt(a.mean_link_density),
            fmt_opt(a.mean_clustering),
            fmt_opt(a.mean_avg_path_length),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;

    let mut w =
        csv::Writer::from_path(figures.join("fig11_degree_cv.csv")).map_err(CoreError::Csv)?;
    w.write_record(["condition", "mean_degree_cv", "mean_degree_cv_excluded"])
        .map_err(CoreError::Csv)?;
    for a in &bundle.aggregates.conditions {
        w.write_record([
            a.condition.clone(),
            fmt_opt(a.mean_degree_cv),
            fmt_opt(a.mean_degree_cv_excluded),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;
    Ok(())
}

fn write_estimator_figure(path: &Path, bundle: &ResultBundle) -> Result<()> {
    if bundle.config.walk.estimators && bundle.aggregates.estimators.is_empty() {
        return Err(named_gap("estimator aggregates"));
    }
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record(["strategy", "mean_fp", "mean_fn", "mean_overlap", "instances"])
        .map_err(CoreError::Csv)?;
    for e in &bundle.aggregates.estimators {
        w.write_record([
            e.strategy.clone(),
            fmt_opt(e.mean_false_positive),
            fmt_opt(e.mean_false_negative),
            fmt_opt(e.mean_overlap),
            e.instances.to_string(),
        ])
        .map_err(CoreError::Csv)?;
    }
    w.flush()?;
    Ok(())
}

/// Fig-10 style reversed cumulative degree distributions, long format:
/// one row per (instance, condition, network, k).
fn write_degree_distributions(path: &Path, bundle: &ResultBundle) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CoreError::Csv)?;
    w.write_record(["instance", "condition", "network", "k", "p_geq_k"])
        .map_err(CoreError::Csv)?;
    for inst in &bundle.instances {
        for c in &inst.conditions {
            for (tag, stats) in [
                ("overlap", &c.overlap_stats),
                ("overlap_excluded", &c.overlap_excluded_stats),
            ] {
                if let Some(s) = stats {
                    for (k, p) in s.reversed_cumulative_degree_distribution.iter().enumerate() {
                        w.write_record([
                            inst.index.to_string(),
                            c.condition.clone(),
                            tag.to_string(),
                            k.to_string(),
                            p.to_string(),
                        ])
                        .map_err(CoreError::Csv)?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
