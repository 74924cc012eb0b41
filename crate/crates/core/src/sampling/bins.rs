use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{HiffVariant, LandscapeInstance};

/// Fitness bins for the Wang-Landau walk.
///
/// Raw bins of a fixed width span the exact fitness extrema; bins that no
/// point of the landscape can reach are removed from the live set so the
/// histogram can actually flatten. Intervals are half-open `[lo, hi)` with
/// the final bin closed so the maximum fitness is binnable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinLayout {
    /// Strictly increasing boundaries; bin `i` spans `edges[i]..edges[i+1]`.
    edges: Vec<f64>,
    /// For each raw bin, its index among live bins, or None if pruned.
    live_index: Vec<Option<usize>>,
    live_count: usize,
}

impl BinLayout {
    /// Builds the layout for `inst`.
    ///
    /// NK and classic HIFF bins span the exact extrema in increments of
    /// `width`; the non-classic HIFF variants use their fixed layouts
    /// (width 2, starting at 4 for HIFFC and at 2 for HIFFM). Unreachable
    /// bins are pruned by a full fitness scan (n <= 16).
    pub fn build(inst: &LandscapeInstance, width: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::Input(format!("bin width must be > 0, got {width}")));
        }
        inst.ensure_evaluatable()?;
        let edges = match inst {
            LandscapeInstance::Hiff(h) if h.variant() != HiffVariant::Classic => {
                let (_, hi) = h.extrema()?;
                let lo = match h.variant() {
                    HiffVariant::Hiffc => 4.0,
                    _ => 2.0,
                };
                raw_edges(lo, hi, 2.0)
            }
            _ => {
                let (lo, hi) = inst.fitness_extrema()?;
                raw_edges(lo, hi, width)
            }
        };
        let mut layout = BinLayout::all_live(edges);
        if inst.n() <= 16 {
            layout.prune(inst)?;
        }
        Ok(layout)
    }

    fn all_live(edges: Vec<f64>) -> Self {
        let raw = edges.len() - 1;
        BinLayout {
            edges,
            live_index: (0..raw).map(Some).collect(),
            live_count: raw,
        }
    }

    /// Removes bins containing no achievable fitness value, found by scanning
    /// every point of the instance.
    fn prune(&mut self, inst: &LandscapeInstance) -> Result<()> {
        let mut reachable = vec![false; self.raw_bin_count()];
        for f in inst.fitness_table()? {
            let raw = self.raw_bin_of(f).ok_or_else(|| {
                Error::Internal(format!("fitness {f} outside the bin range"))
            })?;
            reachable[raw] = true;
        }
        let mut next = 0;
        for (raw, r) in reachable.iter().enumerate() {
            self.live_index[raw] = if *r {
                let i = next;
                next += 1;
                Some(i)
            } else {
                None
            };
        }
        self.live_count = next;
        Ok(())
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn raw_bin_count(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn live_bin_count(&self) -> usize {
        self.live_count
    }

    /// Raw bin holding `fitness`, ignoring liveness.
    fn raw_bin_of(&self, fitness: f64) -> Option<usize> {
        let lo = self.edges[0];
        let hi = *self.edges.last().unwrap();
        if fitness < lo || fitness > hi {
            return None;
        }
        let width = (hi - lo) / self.raw_bin_count() as f64;
        let mut idx = (((fitness - lo) / width) as usize).min(self.raw_bin_count() - 1);
        // Guard against floating point drift at the boundaries.
        while idx > 0 && fitness < self.edges[idx] {
            idx -= 1;
        }
        while idx + 1 < self.raw_bin_count() && fitness >= self.edges[idx + 1] {
            idx += 1;
        }
        Some(idx)
    }

    /// Dense live-bin index of `fitness`, or None when the fitness falls
    /// outside the layout or into a pruned bin.
    pub fn live_bin_of(&self, fitness: f64) -> Option<usize> {
        self.live_index[self.raw_bin_of(fitness)?]
    }
}

fn raw_edges(lo: f64, hi: f64, width: f64) -> Vec<f64> {
    let count = if hi > lo {
        ((hi - lo) / width).ceil() as usize
    } else {
        1
    }
    .max(1);
    (0..=count).map(|i| lo + i as f64 * width).collect()
}
