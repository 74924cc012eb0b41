//! Shared statistical utilities: mode, mean/standard deviation, Student-t
//! confidence intervals, Spearman rank correlation with significance, and the
//! mean-absolute / root-mean-squared difference pair used for comparing
//! per-instance series between sampling conditions.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Most frequent value of a non-empty multiset; frequency ties break toward
/// the smallest tied value.
pub fn mode_u32(values: &[u32]) -> Result<u32> {
    if values.is_empty() {
        return Err(Error::Input("mode of an empty multiset".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    Ok(mode_of_sorted(&sorted, |a, b| a == b))
}

/// `mode_u32` for real-valued multisets. Values are grouped by exact
/// equality after a total-order sort.
pub fn mode_f64(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Input("mode of an empty multiset".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(mode_of_sorted(&sorted, |a, b| a == b))
}

fn mode_of_sorted<T: Copy, F: Fn(&T, &T) -> bool>(sorted: &[T], eq: F) -> T {
    let mut best = sorted[0];
    let mut best_count = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && eq(&sorted[j], &sorted[i]) {
            j += 1;
        }
        // Strict inequality keeps the smallest value on ties.
        if j - i > best_count {
            best_count = j - i;
            best = sorted[i];
        }
        i = j;
    }
    best
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// 95% confidence interval for the mean: mean ± t(0.975, n−1) · s/√n.
pub fn confidence_interval_95(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(
            "confidence interval needs at least 2 values".into(),
        ));
    }
    let n = values.len() as f64;
    let m = mean(values);
    let s = std_dev(values);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .map_err(|e| Error::Internal(format!("t distribution: {e}")))?
        .inverse_cdf(0.975);
    let half = t * s / n.sqrt();
    Ok((m - half, m + half))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub rho: f64,
    pub p_value: f64,
}

/// Spearman rank correlation with average-rank tie handling. Significance is
/// the two-sided p-value from the t approximation on n − 2 degrees of
/// freedom.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<SpearmanResult> {
    if xs.len() != ys.len() {
        return Err(Error::Input(format!(
            "spearman length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(
            "spearman needs at least 3 pairs".into(),
        ));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let rho = pearson(&rx, &ry)?;
    let n = xs.len() as f64;
    let p_value = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * ((n - 2.0) / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, n - 2.0)
            .map_err(|e| Error::Internal(format!("t distribution: {e}")))?;
        2.0 * (1.0 - dist.cdf(t.abs()))
    };
    Ok(SpearmanResult { rho, p_value })
}

/// Ranks 1..n with tied values receiving the average of their rank range.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Average of 1-based ranks i+1 ..= j.
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InsufficientData(
            "zero rank variance: correlation undefined".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Two equal-length per-instance series paired by index.
#[derive(Debug, Clone)]
pub struct PairedSeries {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl PairedSeries {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Input(format!(
                "paired series length mismatch: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(PairedSeries { a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadRmsd {
    pub mad: f64,
    pub rmsd: f64,
}

/// Mean absolute difference and root mean squared difference of a pairing.
pub fn mad_rmsd(series: &PairedSeries) -> MadRmsd {
    if series.a.is_empty() {
        return MadRmsd { mad: 0.0, rmsd: 0.0 };
    }
    let n = series.a.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for (a, b) in series.a.iter().zip(&series.b) {
        let d = a - b;
        abs_sum += d.abs();
        sq_sum += d * d;
    }
    MadRmsd {
        mad: abs_sum / n,
        rmsd: (sq_sum / n).sqrt(),
    }
}

/// One-sided paired t-test that `mean(a - b) > 0`; returns the p-value.
pub fn paired_t_test_greater(series: &PairedSeries) -> Result<f64> {
    let diffs: Vec<f64> = series.a.iter().zip(&series.b).map(|(a, b)| a - b).collect();
    if diffs.len() < 2 {
        return Err(Error::InsufficientData("paired t-test needs >= 2 pairs".into()));
    }
    let n = diffs.len() as f64;
    let m = mean(&diffs);
    let s = std_dev(&diffs);
    if s == 0.0 {
        return Ok(if m > 0.0 { 0.0 } else { 1.0 });
    }
    let t = m / (s / n.sqrt());
    let dist = StudentsT::new(0.0, 1.0, n - 1.0)
        .map_err(|e| Error::Internal(format!("t distribution: {e}")))?;
    Ok(1.0 - dist.cdf(t))
}
