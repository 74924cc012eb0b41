//! Potential local optima: per-point step statistics from slow adaptive
//! walks, the local optima score, and the plef oracle used to judge
//! detection quality.
//!
//! A point that walkers enter with small steps but can only leave with large
//! steps behaves like a local optimum; the local optima score quantifies
//! this from the incoming and outgoing step-size multisets, and every point
//! scoring above zero is flagged as a PLOP.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{BitPoint, LandscapeInstance};
use crate::sampling::Sample;
use crate::stats;
use crate::walks::WalkRecord;

/// Score given to walk termini that are still being entered; any positive
/// constant works since only the sign of los matters for detection.
pub const TERMINUS_LOS: f64 = 7.0;

/// Step-size statistics of one point. A `0` in `in_max` means no walk ever
/// stepped into the point, and a `0` in `out_min` means no walk ever left it
/// (real steps have size >= 1, so 0 is unambiguous).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointStepStats {
    pub in_max: u32,
    pub in_avg: f64,
    pub in_mode: u32,
    pub out_min: u32,
    pub out_avg: f64,
    pub out_mode: u32,
}

impl PointStepStats {
    fn from_multisets(incoming: &[u32], outgoing: &[u32]) -> Self {
        let (in_max, in_avg, in_mode) = if incoming.is_empty() {
            (0, 0.0, 0)
        } else {
            (
                *incoming.iter().max().unwrap(),
                incoming.iter().map(|&s| s as f64).sum::<f64>() / incoming.len() as f64,
                stats::mode_u32(incoming).expect("non-empty"),
            )
        };
        let (out_min, out_avg, out_mode) = if outgoing.is_empty() {
            (0, 0.0, 0)
        } else {
            (
                *outgoing.iter().min().unwrap(),
                outgoing.iter().map(|&s| s as f64).sum::<f64>() / outgoing.len() as f64,
                stats::mode_u32(outgoing).expect("non-empty"),
            )
        };
        PointStepStats { in_max, in_avg, in_mode, out_min, out_avg, out_mode }
    }
}

/// Incoming and outgoing step-size multisets per sample point, with their
/// summary statistics.
#[derive(Debug, Clone)]
pub struct StepStatsTable {
    incoming: Vec<Vec<u32>>,
    outgoing: Vec<Vec<u32>>,
    stats: Vec<PointStepStats>,
}

impl StepStatsTable {
    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn stats(&self, idx: usize) -> &PointStepStats {
        &self.stats[idx]
    }

    pub fn incoming(&self, idx: usize) -> &[u32] {
        &self.incoming[idx]
    }

    pub fn outgoing(&self, idx: usize) -> &[u32] {
        &self.outgoing[idx]
    }
}

/// Collects every walk step into its origin's outgoing multiset and its
/// destination's incoming multiset, then summarizes per point.
pub fn accumulate_steps(walks: &[WalkRecord], sample_len: usize) -> StepStatsTable {
    let mut incoming = vec![Vec::new(); sample_len];
    let mut outgoing = vec![Vec::new(); sample_len];
    for w in walks {
        for (i, &size) in w.step_sizes.iter().enumerate() {
            outgoing[w.path[i] as usize].push(size);
            incoming[w.path[i + 1] as usize].push(size);
        }
    }
    let stats = incoming
        .iter()
        .zip(&outgoing)
        .map(|(inc, out)| PointStepStats::from_multisets(inc, out))
        .collect();
    StepStatsTable { incoming, outgoing, stats }
}

/// The local optima score of one point:
///
/// * never entered: 0
/// * entered but never left: the terminus constant (7.0)
/// * otherwise the sum of the positive parts of out_mode − in_mode,
///   out_avg − in_avg and out_min − in_max.
pub fn local_optima_score(s: &PointStepStats) -> f64 {
    if s.in_max == 0 {
        return 0.0;
    }
    if s.out_min == 0 {
        return TERMINUS_LOS;
    }
    let mut los = 0.0;
    if s.out_mode > s.in_mode {
        los += (s.out_mode - s.in_mode) as f64;
    }
    if s.out_avg > s.in_avg {
        los += s.out_avg - s.in_avg;
    }
    if s.out_min > s.in_max {
        los += (s.out_min - s.in_max) as f64;
    }
    los
}

/// Per-point los values over a sample, with the PLOP flags (los > 0).
#[derive(Debug, Clone)]
pub struct LosReport {
    pub instance_ref: String,
    pub los: Vec<f64>,
    pub is_plop: Vec<bool>,
    pub step_stats: StepStatsTable,
}

impl LosReport {
    pub fn plop_count(&self) -> usize {
        self.is_plop.iter().filter(|&&b| b).count()
    }

    pub fn plop_indices(&self) -> Vec<u32> {
        self.is_plop
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u32))
            .collect()
    }

    pub fn plop_points(&self, sample: &Sample) -> BTreeSet<BitPoint> {
        self.plop_indices()
            .into_iter()
            .map(|i| sample.point(i as usize).bits)
            .collect()
    }
}

/// Runs the detection step: accumulate step statistics over the walks and
/// score every sample point.
pub fn detect_plops(sample: &Sample, walks: &[WalkRecord]) -> LosReport {
    let step_stats = accumulate_steps(walks, sample.len());
    let los: Vec<f64> = (0..sample.len())
        .map(|i| local_optima_score(step_stats.stats(i)))
        .collect();
    let is_plop = los.iter().map(|&v| v > 0.0).collect();
    LosReport {
        instance_ref: sample.instance_ref.clone(),
        los,
        is_plop,
        step_stats,
    }
}

/// Fraction of the 1-bit-flip neighbors of `p` that are less or equally fit.
/// plef = 1.0 is the strict-sense definition of a local optimum. Always an
/// oracle against the full landscape, regardless of any sample.
pub fn plef_score(inst: &LandscapeInstance, p: &BitPoint) -> f64 {
    let n = inst.n();
    let fp = inst.fitness(p);
    let worse_or_equal = (0..n).filter(|&i| inst.fitness(&p.flip(i)) <= fp).count();
    worse_or_equal as f64 / n as f64
}

/// plef for every point of the space, computed from a dense fitness table.
/// Returns the count of less-or-equally-fit neighbors per point (plef is the
/// count over n; count == n means local optimum).
pub fn plef_counts(fitness_table: &[f64], n: usize) -> Vec<u8> {
    debug_assert_eq!(fitness_table.len(), 1 << n);
    (0..fitness_table.len())
        .map(|w| {
            let f = fitness_table[w];
            (0..n)
                .filter(|&i| fitness_table[w ^ (1 << (n - 1 - i))] <= f)
                .count() as u8
        })
        .collect()
}

/// Detection quality of one report against the plef oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionMetrics {
    pub plop_count: usize,
    pub plef_lo_count_in_sample: usize,
    pub plef_lo_count_total: usize,
    /// Fraction of in-sample plef local optima flagged as PLOPs.
    pub detection_rate: Option<f64>,
    /// Fraction of all plef local optima present in the sample.
    pub capture_rate: Option<f64>,
    /// PLOPs over plef local optima in the whole space.
    pub overestimation_factor: Option<f64>,
    pub plop_mean_plef: Option<f64>,
    pub sample_mean_plef: f64,
    pub plop_mean_fitness: Option<f64>,
    pub sample_mean_fitness: f64,
}

/// Scores a report against the full-landscape plef oracle.
pub fn detection_metrics(
    report: &LosReport,
    sample: &Sample,
    inst: &LandscapeInstance,
) -> Result<DetectionMetrics> {
    inst.ensure_evaluatable()?;
    let n = inst.n();
    let table = inst.fitness_table()?;
    let counts = plef_counts(&table, n);

    let plef_lo_count_total = counts.iter().filter(|&&c| c as usize == n).count();
    let mut plef_lo_count_in_sample = 0;
    let mut detected = 0;
    let mut plef_sum = 0.0;
    let mut fit_sum = 0.0;
    let mut plop_plef_sum = 0.0;
    let mut plop_fit_sum = 0.0;
    let plop_count = report.plop_count();

    for (i, sp) in sample.points().iter().enumerate() {
        let c = counts[sp.bits.index() as usize] as usize;
        let plef = c as f64 / n as f64;
        plef_sum += plef;
        fit_sum += sp.fitness;
        if report.is_plop[i] {
            plop_plef_sum += plef;
            plop_fit_sum += sp.fitness;
        }
        if c == n {
            plef_lo_count_in_sample += 1;
            if report.is_plop[i] {
                detected += 1;
            }
        }
    }

    Ok(DetectionMetrics {
        plop_count,
        plef_lo_count_in_sample,
        plef_lo_count_total,
        detection_rate: (plef_lo_count_in_sample > 0)
            .then(|| detected as f64 / plef_lo_count_in_sample as f64),
        capture_rate: (plef_lo_count_total > 0)
            .then(|| plef_lo_count_in_sample as f64 / plef_lo_count_total as f64),
        overestimation_factor: (plef_lo_count_total > 0)
            .then(|| plop_count as f64 / plef_lo_count_total as f64),
        plop_mean_plef: (plop_count > 0).then(|| plop_plef_sum / plop_count as f64),
        sample_mean_plef: plef_sum / sample.len() as f64,
        plop_mean_fitness: (plop_count > 0).then(|| plop_fit_sum / plop_count as f64),
        sample_mean_fitness: fit_sum / sample.len() as f64,
    })
}

/// Agreement between an estimated PLOP set and the exhaustive one.
/// Undefined ratios (empty denominator) are reported as None, not 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EstimatorMetrics {
    pub false_positive: Option<f64>,
    pub false_negative: Option<f64>,
    pub overlap: Option<f64>,
}

pub fn estimator_metrics(
    est: &BTreeSet<BitPoint>,
    act: &BTreeSet<BitPoint>,
) -> EstimatorMetrics {
    let inter = est.intersection(act).count() as f64;
    let union = est.union(act).count() as f64;
    EstimatorMetrics {
        false_positive: (!est.is_empty())
            .then(|| (est.len() as f64 - inter) / est.len() as f64),
        false_negative: (!act.is_empty())
            .then(|| (act.len() as f64 - inter) / act.len() as f64),
        overlap: (union > 0.0).then(|| inter / union),
    }
}

/// One row of the report CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub bits: BitPoint,
    pub fitness: f64,
    pub in_max: u32,
    pub in_avg: f64,
    pub in_mode: u32,
    pub out_min: u32,
    pub out_avg: f64,
    pub out_mode: u32,
    pub los: f64,
    pub is_plop: bool,
    pub plef: f64,
}

/// Writes the per-point report CSV: step statistics, los, PLOP flag and the
/// plef oracle value.
pub fn write_report_csv(
    path: &Path,
    sample: &Sample,
    report: &LosReport,
    plef: &[f64],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (i, sp) in sample.points().iter().enumerate() {
        let s = report.step_stats.stats(i);
        w.serialize(ReportRow {
            bits: sp.bits,
            fitness: sp.fitness,
            in_max: s.in_max,
            in_avg: s.in_avg,
            in_mode: s.in_mode,
            out_min: s.out_min,
            out_avg: s.out_avg,
            out_mode: s.out_mode,
            los: report.los[i],
            is_plop: report.is_plop[i],
            plef: plef[i],
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report_csv(path: &Path) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let mut r = csv::Reader::from_path(path)?;
    for row in r.deserialize() {
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::Input(format!("empty report file {}", path.display())));
    }
    Ok(rows)
}
