//! Slow adaptive walks: from a point, repeatedly move to a not-yet-visited
//! nearest strictly fitter point until none is known, recording the Hamming
//! size of every step. Neighborhoods come either from the exact precomputed
//! table or from one of the sampled estimators (dyna, rand, combi).

mod estimators;
mod neighbors;

use std::io::{BufRead, Write};
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::Sample;

pub use estimators::{estimate_dyna_table, CombiMemory, FitterIndex};
pub use neighbors::{build_neighbor_table, NeighborEntry, NeighborTable, Strategy};

use estimators::{choose_uniform, stream_rng};

/// One slow adaptive walk. `path` holds sample indices in visit order;
/// `step_sizes[i]` is the Hamming distance between `path[i]` and
/// `path[i+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkRecord {
    pub path: Vec<u32>,
    pub step_sizes: Vec<u32>,
}

impl WalkRecord {
    pub fn start(&self) -> u32 {
        self.path[0]
    }

    pub fn terminus(&self) -> u32 {
        *self.path.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Where a walker looks up nearest fitter points.
pub enum NeighborSource<'a> {
    /// A precomputed table (exhaustive or dyna).
    Table(&'a NeighborTable),
    /// Fresh draw of `budget` fitter points at every visit (rand).
    Sampled { index: &'a FitterIndex, budget: usize },
    /// Fresh draw merged into a best-so-far memory (combi).
    Remembered {
        index: &'a FitterIndex,
        budget: usize,
        memory: &'a mut CombiMemory,
    },
}

impl NeighborSource<'_> {
    /// Nearest-fitter candidates for `idx` on this visit.
    fn candidates(
        &mut self,
        sample: &Sample,
        idx: usize,
        rng: &mut ChaCha8Rng,
    ) -> (u32, Vec<u32>) {
        match self {
            NeighborSource::Table(t) => {
                let e = t.entry(idx);
                (e.distance, e.candidates.clone())
            }
            NeighborSource::Sampled { index, budget } => {
                let e = index.sampled_nearest(sample, idx, *budget, rng);
                (e.distance, e.candidates)
            }
            NeighborSource::Remembered { index, budget, memory } => {
                let fresh = index.sampled_nearest(sample, idx, *budget, rng);
                let kept = memory.update(idx, fresh);
                (kept.distance, kept.candidates.clone())
            }
        }
    }
}

/// Walks from `start` until no unvisited fitter point is known, choosing
/// uniformly at random among the nearest-fitter candidates at each step.
///
/// The not-already-visited rule is enforced explicitly even though strictly
/// increasing fitness already precludes revisits.
pub fn slow_adaptive_walk(
    sample: &Sample,
    source: &mut NeighborSource,
    start: u32,
    rng: &mut ChaCha8Rng,
) -> WalkRecord {
    let mut path = vec![start];
    let mut step_sizes = Vec::new();
    let mut current = start;
    loop {
        let (distance, mut candidates) = source.candidates(sample, current as usize, rng);
        candidates.retain(|c| !path.contains(c));
        if candidates.is_empty() {
            return WalkRecord { path, step_sizes };
        }
        let next = choose_uniform(&candidates, rng);
        debug_assert!(sample.fitness(next as usize) > sample.fitness(current as usize));
        path.push(next);
        step_sizes.push(distance);
        current = next;
    }
}

/// Runs `repeats` walks from every sample point.
///
/// Walk `r * len + i` uses its own RNG stream, so table-driven strategies
/// parallelize deterministically; `combi` runs sequentially because its
/// memory is shared across walks.
pub fn walk_all(
    sample: &Sample,
    strategy: Strategy,
    table: Option<&NeighborTable>,
    budget: usize,
    seed: u64,
    repeats: usize,
) -> Result<Vec<WalkRecord>> {
    if repeats == 0 {
        return Err(Error::Input("repeats must be >= 1".into()));
    }
    let m = sample.len();
    let walk_stream = |r: usize, i: usize| (r * m + i) as u64;
    match strategy {
        Strategy::Exhaustive | Strategy::Dyna => {
            let owned;
            let table = match table {
                Some(t) => t,
                None => {
                    owned = match strategy {
                        Strategy::Exhaustive => build_neighbor_table(sample),
                        _ => estimate_dyna_table(sample, budget, seed),
                    };
                    &owned
                }
            };
            Ok((0..repeats)
                .flat_map(|r| (0..m).map(move |i| (r, i)))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(r, i)| {
                    let mut rng = stream_rng(seed, walk_stream(r, i));
                    slow_adaptive_walk(sample, &mut NeighborSource::Table(table), i as u32, &mut rng)
                })
                .collect())
        }
        Strategy::Rand => {
            let index = FitterIndex::build(sample);
            Ok((0..repeats)
                .flat_map(|r| (0..m).map(move |i| (r, i)))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(r, i)| {
                    let mut rng = stream_rng(seed, walk_stream(r, i));
                    let mut source = NeighborSource::Sampled { index: &index, budget };
                    slow_adaptive_walk(sample, &mut source, i as u32, &mut rng)
                })
                .collect())
        }
        Strategy::Combi => {
            let index = FitterIndex::build(sample);
            let mut memory = CombiMemory::new(m);
            let mut walks = Vec::with_capacity(repeats * m);
            for r in 0..repeats {
                for i in 0..m {
                    let mut rng = stream_rng(seed, walk_stream(r, i));
                    let mut source = NeighborSource::Remembered {
                        index: &index,
                        budget,
                        memory: &mut memory,
                    };
                    walks.push(slow_adaptive_walk(sample, &mut source, i as u32, &mut rng));
                }
            }
            Ok(walks)
        }
    }
}

/// Walk trace persistence: one JSON object per line.
#[derive(Serialize, Deserialize)]
struct WalkLine {
    path: Vec<String>,
    step_sizes: Vec<u32>,
}

pub fn write_walks_jsonl(path: &Path, sample: &Sample, walks: &[WalkRecord]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for w in walks {
        let line = WalkLine {
            path: w
                .path
                .iter()
                .map(|&i| sample.point(i as usize).bits.to_string())
                .collect(),
            step_sizes: w.step_sizes.clone(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_walks_jsonl(path: &Path, sample: &Sample) -> Result<Vec<WalkRecord>> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut walks = Vec::new();
    for (lineno, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: WalkLine = serde_json::from_str(&line)?;
        let mut indices = Vec::with_capacity(parsed.path.len());
        for bits in &parsed.path {
            let p = bits.parse()?;
            let idx = sample.index_of(&p).ok_or_else(|| {
                Error::Input(format!(
                    "walk line {}: point {bits} not in sample",
                    lineno + 1
                ))
            })?;
            indices.push(idx as u32);
        }
        if parsed.step_sizes.len() + 1 != indices.len() {
            return Err(Error::Input(format!(
                "walk line {}: {} step sizes for {} points",
                lineno + 1,
                parsed.step_sizes.len(),
                indices.len()
            )));
        }
        walks.push(WalkRecord { path: indices, step_sizes: parsed.step_sizes });
    }
    Ok(walks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::LandscapeInstance;
    use crate::sampling;
    use neighbors::tests::tiny_sample;

    fn check_walk_invariants(sample: &Sample, walks: &[WalkRecord]) {
        for w in walks {
            for pair in w.path.windows(2) {
                assert!(sample.fitness(pair[1] as usize) > sample.fitness(pair[0] as usize));
            }
            for (i, &s) in w.step_sizes.iter().enumerate() {
                let a = sample.point(w.path[i] as usize).bits;
                let b = sample.point(w.path[i + 1] as usize).bits;
                assert_eq!(s, a.distance(&b));
            }
            let mut seen = w.path.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), w.path.len(), "repeated point in path");
        }
    }

    #[test]
    fn forced_three_point_walk() {
        let s = tiny_sample(&[("000", 0.1), ("011", 0.2), ("111", 0.3)]);
        let t = build_neighbor_table(&s);
        let mut rng = stream_rng(0, 0);
        let start = s.index_of(&"000".parse().unwrap()).unwrap() as u32;
        let w = slow_adaptive_walk(&s, &mut NeighborSource::Table(&t), start, &mut rng);
        let expect: Vec<u32> = ["000", "011", "111"]
            .iter()
            .map(|b| s.index_of(&b.parse().unwrap()).unwrap() as u32)
            .collect();
        assert_eq!(w.path, expect);
        assert_eq!(w.step_sizes, vec![2, 1]);
    }

    #[test]
    fn walk_from_fittest_is_trivial() {
        let inst = LandscapeInstance::generate_nk(6, 2, 44).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        let t = build_neighbor_table(&s);
        let start = s.fittest_index().unwrap() as u32;
        let mut rng = stream_rng(1, 0);
        let w = slow_adaptive_walk(&s, &mut NeighborSource::Table(&t), start, &mut rng);
        assert_eq!(w.path, vec![start]);
        assert!(w.step_sizes.is_empty());
    }

    #[test]
    fn walk_all_cardinality_and_invariants() {
        let inst = LandscapeInstance::generate_nk(8, 3, 15).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        let walks = walk_all(&s, Strategy::Exhaustive, None, 0, 7, 1).unwrap();
        assert_eq!(walks.len(), s.len());
        check_walk_invariants(&s, &walks);

        // exhaustive termini all reach the sample maximum
        let max = s.max_fitness();
        for w in &walks {
            assert_eq!(s.fitness(w.terminus() as usize), max);
        }

        let tripled = walk_all(&s, Strategy::Exhaustive, None, 0, 7, 3).unwrap();
        assert_eq!(tripled.len(), 3 * s.len());
    }

    #[test]
    fn walks_are_deterministic_and_seed_sensitive() {
        let inst = LandscapeInstance::generate_nk(7, 2, 3).unwrap();
        let s = sampling::rand_sample(&inst, 70, 5).unwrap();
        let a = walk_all(&s, Strategy::Exhaustive, None, 0, 11, 2).unwrap();
        let b = walk_all(&s, Strategy::Exhaustive, None, 0, 11, 2).unwrap();
        assert_eq!(a, b);
        let c = walk_all(&s, Strategy::Exhaustive, None, 0, 12, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn estimator_walks_hold_invariants() {
        let inst = LandscapeInstance::generate_nk(8, 4, 21).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        for strategy in [Strategy::Dyna, Strategy::Rand, Strategy::Combi] {
            let walks = walk_all(&s, strategy, None, 12, 5, 1).unwrap();
            assert_eq!(walks.len(), s.len());
            check_walk_invariants(&s, &walks);
        }
    }

    #[test]
    fn path_length_bounded_by_distinct_fitness_count() {
        let inst = LandscapeInstance::generate_nk(8, 2, 61).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        let mut fits: Vec<f64> = s.points().iter().map(|p| p.fitness).collect();
        fits.sort_unstable_by(f64::total_cmp);
        fits.dedup();
        let walks = walk_all(&s, Strategy::Exhaustive, None, 0, 1, 1).unwrap();
        for w in walks {
            assert!(w.len() <= fits.len());
        }
    }

    #[test]
    fn no_closer_fitter_point_exists_at_each_step() {
        // brute-force check of exhaustive minimality on a small space
        let inst = LandscapeInstance::generate_nk(7, 3, 2).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        let walks = walk_all(&s, Strategy::Exhaustive, None, 0, 19, 1).unwrap();
        for w in &walks {
            for (i, &step) in w.step_sizes.iter().enumerate() {
                let from = w.path[i] as usize;
                let pf = s.point(from).bits;
                let ff = s.fitness(from);
                for j in 0..s.len() {
                    if s.fitness(j) > ff {
                        assert!(pf.distance(&s.point(j).bits) >= step);
                    }
                }
            }
        }
    }

    #[test]
    fn jsonl_roundtrip() {
        let inst = LandscapeInstance::generate_nk(6, 2, 8).unwrap();
        let s = sampling::enumerate(&inst).unwrap();
        let walks = walk_all(&s, Strategy::Exhaustive, None, 0, 3, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("walks.jsonl");
        write_walks_jsonl(&path, &s, &walks).unwrap();
        let back = read_walks_jsonl(&path, &s).unwrap();
        assert_eq!(walks, back);
    }
}
