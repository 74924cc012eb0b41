use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sampling::Sample;

/// How nearest-fitter neighborhoods are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Exact: all strictly fitter sample points at minimal Hamming distance.
    Exhaustive,
    /// One-time random sample of fitter points per point, precomputed.
    Dyna,
    /// Fresh random sample of fitter points at every visit.
    Rand,
    /// Like `Rand`, keeping the best (smallest-distance) result per point.
    Combi,
}

impl std::str::FromStr for Strategy {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "dyna" => Ok(Strategy::Dyna),
            "rand" => Ok(Strategy::Rand),
            "combi" => Ok(Strategy::Combi),
            other => Err(crate::error::Error::Input(format!(
                "unknown walk strategy {other:?}"
            ))),
        }
    }
}

/// Nearest fitter points of one sample point: all candidates at the minimal
/// distance. `candidates` is empty when nothing fitter is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborEntry {
    pub distance: u32,
    pub candidates: Vec<u32>,
}

impl NeighborEntry {
    pub fn none() -> Self {
        NeighborEntry { distance: 0, candidates: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Precomputed nearest-fitter sets, one entry per sample point.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    pub strategy: Strategy,
    entries: Vec<NeighborEntry>,
}

impl NeighborTable {
    pub(crate) fn new(strategy: Strategy, entries: Vec<NeighborEntry>) -> Self {
        NeighborTable { strategy, entries }
    }

    pub fn entry(&self, idx: usize) -> &NeighborEntry {
        &self.entries[idx]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Point membership lookup: direct indexing when the sample is the full
/// space, a hash map otherwise.
pub(crate) enum Lookup {
    Dense,
    Hashed(HashMap<u32, u32>),
}

impl Lookup {
    pub fn build(sample: &Sample) -> Self {
        if sample.len() == 1usize << sample.n() {
            Lookup::Dense
        } else {
            Lookup::Hashed(
                sample
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(i, sp)| (sp.bits.index(), i as u32))
                    .collect(),
            )
        }
    }

    #[inline]
    pub fn get(&self, word: u32) -> Option<u32> {
        match self {
            Lookup::Dense => Some(word),
            Lookup::Hashed(map) => map.get(&word).copied(),
        }
    }
}

/// All n-bit masks of popcount `weight`, ascending (Gosper's hack).
pub(crate) fn weight_masks(n: usize, weight: u32) -> impl Iterator<Item = u32> {
    debug_assert!(weight >= 1 && weight as usize <= n);
    let limit = 1u64 << n;
    let mut mask = (1u64 << weight) - 1;
    std::iter::from_fn(move || {
        if mask >= limit {
            return None;
        }
        let out = mask as u32;
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
        Some(out)
    })
}

/// Builds the exact nearest-fitter table for every sample point.
///
/// Rather than scanning all pairs, the search expands Hamming rings around
/// each point (distance 1, 2, ...) and stops at the first ring holding a
/// strictly fitter sample member; output is identical to a full scan.
pub fn build_neighbor_table(sample: &Sample) -> NeighborTable {
    let lookup = Lookup::build(sample);
    let n = sample.n();
    let entries: Vec<NeighborEntry> = (0..sample.len())
        .into_par_iter()
        .map(|i| {
            let p = sample.point(i).bits;
            let fp = sample.fitness(i);
            for d in 1..=n as u32 {
                let mut found = Vec::new();
                for mask in weight_masks(n, d) {
                    if let Some(j) = lookup.get(p.index() ^ mask) {
                        if sample.fitness(j as usize) > fp {
                            found.push(j);
                        }
                    }
                }
                if !found.is_empty() {
                    found.sort_unstable();
                    return NeighborEntry { distance: d, candidates: found };
                }
            }
            NeighborEntry::none()
        })
        .collect();
    NeighborTable::new(Strategy::Exhaustive, entries)
}
