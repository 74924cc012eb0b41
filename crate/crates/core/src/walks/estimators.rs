use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::sampling::Sample;
use crate::walks::neighbors::{NeighborEntry, NeighborTable, Strategy};

/// Sample indices ordered by fitness, with the strictly-fitter boundary
/// precomputed for every point. Shared by all sampled estimators.
#[derive(Debug, Clone)]
pub struct FitterIndex {
    /// Sample indices sorted by (fitness, point) ascending.
    by_fitness: Vec<u32>,
    /// For each sample index, the position in `by_fitness` where strictly
    /// fitter points begin.
    fitter_from: Vec<u32>,
}

impl FitterIndex {
    pub fn build(sample: &Sample) -> Self {
        let m = sample.len();
        let mut by_fitness: Vec<u32> = (0..m as u32).collect();
        by_fitness.sort_unstable_by(|&a, &b| {
            sample
                .fitness(a as usize)
                .total_cmp(&sample.fitness(b as usize))
                .then(a.cmp(&b))
        });
        // Walk fitness runs: ties share one boundary (ties are "not fitter").
        let mut fitter_from = vec![0u32; m];
        let mut i = 0;
        while i < m {
            let f = sample.fitness(by_fitness[i] as usize);
            let mut j = i + 1;
            while j < m && sample.fitness(by_fitness[j] as usize) == f {
                j += 1;
            }
            for &idx in &by_fitness[i..j] {
                fitter_from[idx as usize] = j as u32;
            }
            i = j;
        }
        FitterIndex { by_fitness, fitter_from }
    }

    /// Number of sample points strictly fitter than point `idx`.
    pub fn fitter_count(&self, idx: usize) -> usize {
        self.by_fitness.len() - self.fitter_from[idx] as usize
    }

    /// Draws up to `budget` strictly fitter points uniformly at random
    /// without replacement and returns those at minimal Hamming distance
    /// from `idx`. When the fitter subset does not exceed the budget the
    /// whole subset is used, making the result exact.
    pub fn sampled_nearest(
        &self,
        sample: &Sample,
        idx: usize,
        budget: usize,
        rng: &mut ChaCha8Rng,
    ) -> NeighborEntry {
        let from = self.fitter_from[idx] as usize;
        let count = self.by_fitness.len() - from;
        if count == 0 {
            return NeighborEntry::none();
        }
        let p = sample.point(idx).bits;
        let mut best_d = u32::MAX;
        let mut best: Vec<u32> = Vec::new();
        let mut consider = |j: u32| {
            let d = p.distance(&sample.point(j as usize).bits);
            match d.cmp(&best_d) {
                std::cmp::Ordering::Less => {
                    best_d = d;
                    best = vec![j];
                }
                std::cmp::Ordering::Equal => best.push(j),
                std::cmp::Ordering::Greater => {}
            }
        };
        if count <= budget {
            for &j in &self.by_fitness[from..] {
                consider(j);
            }
        } else {
            for off in rand::seq::index::sample(rng, count, budget) {
                consider(self.by_fitness[from + off]);
            }
        }
        best.sort_unstable();
        NeighborEntry { distance: best_d, candidates: best }
    }
}

/// Precomputes the `dyna` table: one random fitter-subset draw per point.
/// Per-point RNG streams make the result independent of thread scheduling.
pub fn estimate_dyna_table(sample: &Sample, budget: usize, seed: u64) -> NeighborTable {
    let index = FitterIndex::build(sample);
    let entries: Vec<NeighborEntry> = (0..sample.len())
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            index.sampled_nearest(sample, i, budget, &mut rng)
        })
        .collect();
    NeighborTable::new(Strategy::Dyna, entries)
}

/// Best sampling result remembered so far for each point (`combi`).
///
/// A fresh draw replaces the memory when it finds a strictly smaller
/// distance and merges into it on an equal distance, so the remembered
/// distance never increases.
#[derive(Debug)]
pub struct CombiMemory {
    entries: Vec<Option<NeighborEntry>>,
}

impl CombiMemory {
    pub fn new(len: usize) -> Self {
        CombiMemory { entries: vec![None; len] }
    }

    pub fn update(&mut self, idx: usize, fresh: NeighborEntry) -> &NeighborEntry {
        let slot = &mut self.entries[idx];
        match slot {
            None => *slot = Some(fresh),
            Some(kept) => {
                if fresh.is_empty() {
                    // nothing fitter exists; keep whatever is stored
                    if kept.is_empty() {
                        *slot = Some(fresh);
                    }
                } else if kept.is_empty() || fresh.distance < kept.distance {
                    *slot = Some(fresh);
                } else if fresh.distance == kept.distance {
                    for c in fresh.candidates {
                        if !kept.candidates.contains(&c) {
                            kept.candidates.push(c);
                        }
                    }
                    kept.candidates.sort_unstable();
                }
            }
        }
        slot.as_ref().unwrap()
    }

    pub fn get(&self, idx: usize) -> Option<&NeighborEntry> {
        self.entries[idx].as_ref()
    }
}

/// Convenience used by walkers that need a per-visit RNG stream.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform choice among `candidates`.
pub(crate) fn choose_uniform(candidates: &[u32], rng: &mut ChaCha8Rng) -> u32 {
    debug_assert!(!candidates.is_empty());
    candidates[rng.gen_range(0..candidates.len())]
}
