//! Basins of attraction extracted from slow adaptive walks.
//!
//! The basin B(x) collects every point recorded strictly before x on some
//! walk, plus x itself: the points from which a walker demonstrably reached
//! x. On a sample with a unique fittest point this makes the fittest basin
//! the whole walked sample, since every walk ends there.

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::plops::LosReport;
use crate::sampling::Sample;
use crate::stats::{self, SpearmanResult};
use crate::walks::WalkRecord;

/// Basin membership for a chosen set of node points, stored as bit sets over
/// sample indices.
#[derive(Debug, Clone)]
pub struct BasinMap {
    nodes: Vec<u32>,
    node_of_sample: HashMap<u32, u32>,
    basins: Vec<BitSet>,
    sample_len: usize,
}

impl BasinMap {
    /// Nodes this map holds basins for, ascending by sample index.
    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn node_id(&self, sample_idx: u32) -> Option<u32> {
        self.node_of_sample.get(&sample_idx).copied()
    }

    pub fn size(&self, node_id: usize) -> usize {
        self.basins[node_id].count()
    }

    pub fn contains(&self, node_id: usize, sample_idx: u32) -> bool {
        self.basins[node_id].contains(sample_idx as usize)
    }

    pub fn members(&self, node_id: usize) -> impl Iterator<Item = u32> + '_ {
        self.basins[node_id].iter().map(|i| i as u32)
    }

    pub fn sample_len(&self) -> usize {
        self.sample_len
    }

    pub(crate) fn raw(&self, node_id: usize) -> &BitSet {
        &self.basins[node_id]
    }
}

/// Builds the basins of the given node points from recorded walks.
///
/// For every walk and every node x on its path, all points preceding x on
/// that path join B(x); x always belongs to its own basin.
pub fn build_basins(walks: &[WalkRecord], nodes: &[u32], sample_len: usize) -> BasinMap {
    let mut sorted: Vec<u32> = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let node_of_sample: HashMap<u32, u32> = sorted
        .iter()
        .enumerate()
        .map(|(id, &s)| (s, id as u32))
        .collect();
    let mut basins: Vec<BitSet> = sorted.iter().map(|_| BitSet::new(sample_len)).collect();
    for (id, &s) in sorted.iter().enumerate() {
        basins[id].insert(s as usize);
    }
    for w in walks {
        for (pos, &p) in w.path.iter().enumerate() {
            if let Some(&id) = node_of_sample.get(&p) {
                let b = &mut basins[id as usize];
                for &pred in &w.path[..pos] {
                    b.insert(pred as usize);
                }
            }
        }
    }
    BasinMap { nodes: sorted, node_of_sample, basins, sample_len }
}

/// Distinct termini across all walks, ascending by sample index.
pub fn walk_termini(walks: &[WalkRecord]) -> Vec<u32> {
    let mut t: Vec<u32> = walks.iter().map(|w| w.terminus()).collect();
    t.sort_unstable();
    t.dedup();
    t
}

/// Groups walk start points by terminus (one basin per terminus, each start
/// in exactly one, terminus included in its own): the partition view of the
/// same walks.
pub fn terminus_partition(walks: &[WalkRecord], sample_len: usize) -> BasinMap {
    let nodes = walk_termini(walks);
    let node_of_sample: HashMap<u32, u32> = nodes
        .iter()
        .enumerate()
        .map(|(id, &s)| (s, id as u32))
        .collect();
    let mut basins: Vec<BitSet> = nodes.iter().map(|_| BitSet::new(sample_len)).collect();
    for (id, &s) in nodes.iter().enumerate() {
        basins[id].insert(s as usize);
    }
    for w in walks {
        let id = node_of_sample[&w.terminus()];
        basins[id as usize].insert(w.start() as usize);
    }
    BasinMap { nodes, node_of_sample, basins, sample_len }
}

/// Spearman correlation between PLOP fitness and basin size.
pub fn fitness_basin_correlation(
    basins: &BasinMap,
    report: &LosReport,
    sample: &Sample,
) -> Result<SpearmanResult> {
    let mut fitness = Vec::new();
    let mut sizes = Vec::new();
    for (id, &node) in basins.nodes.iter().enumerate() {
        if report.is_plop[node as usize] {
            fitness.push(sample.fitness(node as usize));
            sizes.push(basins.size(id) as f64);
        }
    }
    if fitness.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "fitness-basin correlation needs >= 3 PLOPs with basins, got {}",
            fitness.len()
        )));
    }
    stats::spearman(&fitness, &sizes)
}

#[derive(Serialize)]
struct BasinRow {
    terminus_bits: String,
    terminus_fitness: f64,
    basin_size: usize,
    is_plop: bool,
}

/// Per-basin CSV: one row per node with its basin size.
pub fn write_basins_csv(
    path: &Path,
    basins: &BasinMap,
    sample: &Sample,
    report: &LosReport,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (id, &node) in basins.nodes.iter().enumerate() {
        w.serialize(BasinRow {
            terminus_bits: sample.point(node as usize).bits.to_string(),
            terminus_fitness: sample.fitness(node as usize),
            basin_size: basins.size(id),
            is_plop: report.is_plop[node as usize],
        })?;
    }
    w.flush()?;
    Ok(())
}
