use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{BitPoint, LandscapeInstance};
use crate::sampling::{BinLayout, Sample, SampleOrigin, SamplePoint};

/// Parameters of the adjusted Wang-Landau run. `max_size`/`min_size`
/// default to 2^n (capped at 2^16) and half of it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WlParams {
    /// A histogram is flat when every live bin reaches this fraction of the
    /// mean bin count.
    pub flatness: f64,
    /// Floor for ln f; the classic termination criterion, kept as a backstop.
    pub epsilon: f64,
    /// Number of flatness events required before the size-based exit opens.
    pub flat_target: u32,
    pub max_size: Option<usize>,
    pub min_size: Option<usize>,
    pub seed: u64,
}

impl WlParams {
    pub fn new(seed: u64) -> Self {
        WlParams {
            flatness: 0.85,
            epsilon: 1e-8,
            flat_target: 5,
            max_size: None,
            min_size: None,
            seed,
        }
    }

    /// Effective (max_size, min_size) for a landscape of `n` bits.
    pub fn size_bounds(&self, n: usize) -> (usize, usize) {
        let max = self.max_size.unwrap_or(1usize << n.min(16));
        let min = self.min_size.unwrap_or(max / 2);
        (max, min)
    }
}

/// Why the run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Histogram flat at least `flat_target` times and sample above minimum.
    FlatAndMinSize,
    /// Sample reached the maximum size.
    MaxSize,
    /// ln f fell below epsilon.
    EpsilonFloor,
}

/// Wang-Landau walker state at termination.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WlState {
    /// Log density-of-states estimate per live bin.
    pub ln_g: Vec<f64>,
    /// Visit counts per live bin since the last reset.
    pub histogram: Vec<u64>,
    pub ln_f: f64,
    pub flat_count: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FlatEvent {
    pub iteration: u64,
    pub sample_size: usize,
    /// ln f after the square-root adjustment at this event.
    pub ln_f_after: f64,
}

/// Diagnostic trace of a run: sample growth and flatness events.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AwlTrace {
    /// (iteration, sample size) at each iteration that discovered a point.
    pub growth: Vec<(u64, usize)>,
    pub flat_events: Vec<FlatEvent>,
    pub iterations: u64,
    pub stop: StopReason,
}

#[derive(Debug, Clone)]
pub struct AwlRun {
    pub sample: Sample,
    pub state: WlState,
    pub trace: AwlTrace,
}

/// Flatness predicate: the smallest bin count is at least `flatness` times
/// the mean bin count.
pub fn is_flat(histogram: &[u64], flatness: f64) -> bool {
    if histogram.is_empty() {
        return false;
    }
    let min = *histogram.iter().min().unwrap() as f64;
    let mean = histogram.iter().sum::<u64>() as f64 / histogram.len() as f64;
    min >= flatness * mean
}

/// Runs the adjusted Wang-Landau walk and returns the set of visited points.
///
/// Each iteration proposes a single bit flip, accepts it with probability
/// min(1, g(current bin)/g(proposed bin)), then adds ln f to the current
/// bin's log density and 1 to its histogram count (rejected stays re-count
/// the current state). Whenever the histogram is flat, ln f halves and the
/// histogram resets. The walk stops once the histogram has been flat
/// `flat_target` times with more than `min_size` distinct points visited, or
/// when `max_size` points have been visited.
pub fn awl_sample(inst: &LandscapeInstance, bins: &BinLayout, params: &WlParams) -> Result<AwlRun> {
    inst.ensure_evaluatable()?;
    let n = inst.n();
    let (max_size, min_size) = params.size_bounds(n);
    if bins.live_bin_count() == 0 {
        return Err(Error::Input("bin layout has no live bins".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bin_of = |fitness: f64| -> Result<usize> {
        bins.live_bin_of(fitness).ok_or_else(|| {
            Error::Internal(format!(
                "fitness {fitness} maps to no live bin; bins were mispruned"
            ))
        })
    };

    let mut ln_g = vec![0.0f64; bins.live_bin_count()];
    let mut histogram = vec![0u64; bins.live_bin_count()];
    let mut ln_f = 1.0f64; // f starts at e
    let mut flat_count = 0u32;

    let mut current = BitPoint::new(rng.gen_range(0..1u64 << n) as u32, n);
    let mut cur_bin = bin_of(inst.fitness(&current))?;

    let mut visited: HashSet<u32> = HashSet::new();
    visited.insert(current.index());
    let mut growth = vec![(0u64, 1usize)];
    let mut flat_events = Vec::new();

    let mut iteration = 0u64;
    let stop = loop {
        if visited.len() >= max_size {
            break StopReason::MaxSize;
        }
        iteration += 1;

        let proposal = current.flip(rng.gen_range(0..n));
        let prop_bin = bin_of(inst.fitness(&proposal))?;
        let accept = ln_g[prop_bin] <= ln_g[cur_bin]
            || rng.gen::<f64>() < (ln_g[cur_bin] - ln_g[prop_bin]).exp();
        if accept {
            current = proposal;
            cur_bin = prop_bin;
        }
        ln_g[cur_bin] += ln_f;
        histogram[cur_bin] += 1;
        if visited.insert(current.index()) {
            growth.push((iteration, visited.len()));
        }

        if is_flat(&histogram, params.flatness) {
            ln_f /= 2.0;
            flat_count += 1;
            flat_events.push(FlatEvent {
                iteration,
                sample_size: visited.len(),
                ln_f_after: ln_f,
            });
            histogram.iter_mut().for_each(|h| *h = 0);
            if ln_f < params.epsilon {
                break StopReason::EpsilonFloor;
            }
        }

        if flat_count >= params.flat_target && visited.len() > min_size {
            break StopReason::FlatAndMinSize;
        }
        if visited.len() >= max_size {
            break StopReason::MaxSize;
        }
    };

    let points = visited
        .into_iter()
        .map(|w| {
            let p = BitPoint::new(w, n);
            SamplePoint { bits: p, fitness: inst.fitness(&p) }
        })
        .collect();
    Ok(AwlRun {
        sample: Sample::from_points(
            SampleOrigin::Awl,
            inst.instance_ref(),
            params.seed,
            n,
            points,
        ),
        state: WlState { ln_g, histogram, ln_f, flat_count },
        trace: AwlTrace {
            growth,
            flat_events,
            iterations: iteration,
            stop,
        },
    })
}
