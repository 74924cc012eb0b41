//! PLOP networks: temperature networks weighted by step size barriers and
//! basin overlap networks, plus the graph statistics reported for them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::collections::VecDeque;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basins::BasinMap;
use crate::error::{Error, Result};
use crate::problems::BitPoint;
use crate::sampling::Sample;
use crate::walks::WalkRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub sample_idx: u32,
    pub bits: BitPoint,
    pub fitness: f64,
}

/// A directed graph over PLOP nodes with at most one weighted edge per
/// ordered pair and no self-loops.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    nodes: Vec<GraphNode>,
    node_of_sample: HashMap<u32, u32>,
    edges: BTreeMap<(u32, u32), f64>,
}

impl WeightedDigraph {
    fn new(node_indices: &[u32], sample: &Sample) -> Self {
        let mut sorted: Vec<u32> = node_indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let nodes: Vec<GraphNode> = sorted
            .iter()
            .map(|&i| GraphNode {
                sample_idx: i,
                bits: sample.point(i as usize).bits,
                fitness: sample.fitness(i as usize),
            })
            .collect();
        let node_of_sample = sorted
            .iter()
            .enumerate()
            .map(|(id, &s)| (s, id as u32))
            .collect();
        WeightedDigraph { nodes, node_of_sample, edges: BTreeMap::new() }
    }

    fn insert_edge(&mut self, from: u32, to: u32, weight: f64) {
        debug_assert_ne!(from, to);
        self.edges.insert((from, to), weight);
    }

    /// Builds a graph from explicit parts. Node and edge endpoints are given
    /// as sample indices; self-loops and endpoints outside the node set are
    /// input errors.
    pub fn from_parts(
        node_indices: &[u32],
        sample: &Sample,
        edge_list: &[(u32, u32, f64)],
    ) -> Result<Self> {
        let mut g = WeightedDigraph::new(node_indices, sample);
        for &(a, b, w) in edge_list {
            if a == b {
                return Err(Error::Input(format!("self-loop on sample index {a}")));
            }
            let (ia, ib) = match (g.node_id_of_sample(a), g.node_id_of_sample(b)) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return Err(Error::Input(format!(
                        "edge ({a}, {b}) references a point outside the node set"
                    )))
                }
            };
            g.insert_edge(ia, ib, w);
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.edges.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn weight(&self, from: u32, to: u32) -> Option<f64> {
        self.edges.get(&(from, to)).copied()
    }

    pub fn node_id_of_sample(&self, sample_idx: u32) -> Option<u32> {
        self.node_of_sample.get(&sample_idx).copied()
    }

    /// Node with the highest fitness.
    pub fn fittest_node(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for (id, node) in self.nodes.iter().enumerate() {
            if best.is_none_or(|b| node.fitness > self.nodes[b as usize].fitness) {
                best = Some(id as u32);
            }
        }
        best
    }

    fn out_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in self.edges.keys() {
            adj[a as usize].push(b);
        }
        adj
    }

    fn in_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in self.edges.keys() {
            adj[b as usize].push(a);
        }
        adj
    }

    /// Undirected neighbor sets (deduplicated across edge directions).
    fn undirected_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<HashSet<u32>> = vec![HashSet::new(); self.nodes.len()];
        for &(a, b) in self.edges.keys() {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        adj.into_iter()
            .map(|s| {
                let mut v: Vec<u32> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    pub fn write_edges_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["src_bits", "dst_bits", "weight"])?;
        for (a, b, weight) in self.edges() {
            w.write_record([
                self.nodes[a as usize].bits.to_string(),
                self.nodes[b as usize].bits.to_string(),
                format!("{weight}"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds the temperature network: for every ordered PLOP pair (x, y) with x
/// recorded before y on at least one walk, the edge weight is the step size
/// barrier — the minimum over those walk subpaths of the largest step inside
/// the subpath. Pairs never co-occurring on a walk get no edge.
pub fn step_size_barriers(
    plop_indices: &[u32],
    walks: &[WalkRecord],
    sample: &Sample,
) -> WeightedDigraph {
    let mut net = WeightedDigraph::new(plop_indices, sample);
    let mut barriers: HashMap<(u32, u32), u32> = HashMap::new();
    for w in walks {
        let on_path: Vec<(usize, u32)> = w
            .path
            .iter()
            .enumerate()
            .filter_map(|(pos, &p)| net.node_id_of_sample(p).map(|id| (pos, id)))
            .collect();
        for (a, &(pos_a, id_a)) in on_path.iter().enumerate() {
            let mut max_step = 0u32;
            let mut cursor = pos_a;
            for &(pos_b, id_b) in &on_path[a + 1..] {
                for &s in &w.step_sizes[cursor..pos_b] {
                    max_step = max_step.max(s);
                }
                cursor = pos_b;
                barriers
                    .entry((id_a, id_b))
                    .and_modify(|sb| *sb = (*sb).min(max_step))
                    .or_insert(max_step);
            }
        }
    }
    for ((a, b), sb) in barriers {
        net.insert_edge(a, b, sb as f64);
    }
    net
}

/// Modes of incoming step size barriers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TemperatureStats {
    /// Mode of incoming sb per node, averaged over nodes with in-degree >= 1.
    pub all_nodes_avg_mode_sb: Option<f64>,
    /// Mode of the fittest node's incoming sb values.
    pub fittest_node_mode_sb: Option<f64>,
}

pub fn temperature_stats(net: &WeightedDigraph) -> TemperatureStats {
    let in_adj = net.in_adjacency();
    let mut modes = Vec::new();
    let mut fittest_mode = None;
    let fittest = net.fittest_node();
    for (id, sources) in in_adj.iter().enumerate() {
        if sources.is_empty() {
            continue;
        }
        let weights: Vec<u32> = sources
            .iter()
            .map(|&s| net.weight(s, id as u32).unwrap() as u32)
            .collect();
        let mode = crate::stats::mode_u32(&weights).expect("non-empty") as f64;
        modes.push(mode);
        if Some(id as u32) == fittest {
            fittest_mode = Some(mode);
        }
    }
    TemperatureStats {
        all_nodes_avg_mode_sb: (!modes.is_empty())
            .then(|| modes.iter().sum::<f64>() / modes.len() as f64),
        fittest_node_mode_sb: fittest_mode,
    }
}

/// Builds the basin overlap network over the basin map's nodes.
///
/// A candidate edge (x, y) requires x != y, fitness(x) < fitness(y) and
/// overlapping basins; the weight is the overlap cardinality. Edges due to
/// transitive subset relations are then removed: among a node's strict
/// basin supersets only the minimal ones (smallest cardinality difference)
/// keep their edges.
pub fn basin_overlap_network(basins: &BasinMap, sample: &Sample) -> WeightedDigraph {
    let mut net = WeightedDigraph::new(basins.nodes(), sample);
    let ids: Vec<u32> = (0..net.node_count() as u32).collect();
    let edges: Vec<(u32, u32, f64)> = ids
        .par_iter()
        .flat_map_iter(|&x| {
            let fx = net.nodes()[x as usize].fitness;
            let bx = basins.raw(x as usize);
            let size_x = basins.size(x as usize);
            let mut plain = Vec::new();
            let mut subset: Vec<(u32, f64, usize)> = Vec::new();
            for &y in &ids {
                if x == y {
                    continue;
                }
                let fy = net.nodes()[y as usize].fitness;
                if fx >= fy {
                    continue;
                }
                let by = basins.raw(y as usize);
                if !bx.intersects(by) {
                    continue;
                }
                let overlap = bx.intersection_count(by);
                let size_y = basins.size(y as usize);
                if size_y > size_x && bx.is_subset(by) {
                    subset.push((y, overlap as f64, size_y - size_x));
                } else {
                    plain.push((x, y, overlap as f64));
                }
            }
            if let Some(dmin) = subset.iter().map(|&(_, _, d)| d).min() {
                for (y, w, d) in subset {
                    if d == dmin {
                        plain.push((x, y, w));
                    }
                }
            }
            plain.into_iter()
        })
        .collect();
    for (a, b, w) in edges {
        net.insert_edge(a, b, w);
    }
    net
}

/// Which reading of the edge-exclusion rule to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionRule {
    /// Keep an edge only if its endpoints co-occur on one recorded walk.
    SameWalk,
    /// Keep an edge if each endpoint appears on some recorded walk. Vacuous
    /// under the base protocol (every point starts a walk); provided for
    /// comparison.
    AnyWalk,
}

/// Drops edges whose endpoints are not part of a slow adaptive walk under
/// the chosen rule. The output edge set is a subset of the input's.
pub fn exclude_nonwalk_edges(
    net: &WeightedDigraph,
    walks: &[WalkRecord],
    rule: ExclusionRule,
) -> WeightedDigraph {
    let mut filtered = net.clone();
    match rule {
        ExclusionRule::SameWalk => {
            let mut together: HashSet<(u32, u32)> = HashSet::new();
            for w in walks {
                let on_path: Vec<u32> = w
                    .path
                    .iter()
                    .filter_map(|&p| net.node_id_of_sample(p))
                    .collect();
                for (a, &id_a) in on_path.iter().enumerate() {
                    for &id_b in &on_path[a + 1..] {
                        together.insert((id_a.min(id_b), id_a.max(id_b)));
                    }
                }
            }
            filtered
                .edges
                .retain(|&(a, b), _| together.contains(&(a.min(b), a.max(b))));
        }
        ExclusionRule::AnyWalk => {
            let mut walked: HashSet<u32> = HashSet::new();
            for w in walks {
                for &p in &w.path {
                    if let Some(id) = net.node_id_of_sample(p) {
                        walked.insert(id);
                    }
                }
            }
            filtered
                .edges
                .retain(|&(a, b), _| walked.contains(&a) && walked.contains(&b));
        }
    }
    filtered
}

/// Summary statistics of a network.
///
/// Density and clustering treat the edges as undirected; the average path
/// length follows edge directions, pooled over all reachable ordered pairs
/// from at most `path_sample_cap` sampled source nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub mean_degree: f64,
    pub link_density: f64,
    pub clustering_coefficient: f64,
    pub avg_path_length: Option<f64>,
    pub degree_cv: Option<f64>,
    /// Expected path length of an Erdos-Renyi graph of the same size:
    /// ln V / ln <k>.
    pub er_path_length: Option<f64>,
    /// P(K >= k) for k = 0..=max degree.
    pub reversed_cumulative_degree_distribution: Vec<f64>,
}

pub fn network_stats(
    net: &WeightedDigraph,
    path_sample_cap: usize,
    seed: u64,
) -> Result<NetworkStats> {
    let v = net.node_count();
    if v < 2 {
        return Err(Error::InsufficientData(format!(
            "network statistics need >= 2 nodes, got {v}"
        )));
    }

    // degrees are in-degree + out-degree
    let mut degree = vec![0usize; v];
    for (a, b, _) in net.edges() {
        degree[a as usize] += 1;
        degree[b as usize] += 1;
    }
    let undirected = net.undirected_adjacency();
    let undirected_edges: usize = undirected.iter().map(|n| n.len()).sum::<usize>() / 2;

    let mean_degree = 2.0 * undirected_edges as f64 / v as f64;
    let link_density = 2.0 * undirected_edges as f64 / (v as f64 * (v as f64 - 1.0));

    // Watts-Strogatz clustering; degree 0/1 nodes contribute 0
    let clustering_sum: f64 = (0..v)
        .into_par_iter()
        .map(|i| {
            let neigh = &undirected[i];
            let k = neigh.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (a, &u) in neigh.iter().enumerate() {
                let nu = &undirected[u as usize];
                for &w in &neigh[a + 1..] {
                    if nu.binary_search(&w).is_ok() {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .sum();
    let clustering_coefficient = clustering_sum / v as f64;

    // directed average path length over reachable pairs from sampled sources
    let out_adj = net.out_adjacency();
    let sources: Vec<usize> = if v <= path_sample_cap {
        (0..v).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, v, path_sample_cap).into_vec()
    };
    let (dist_sum, pair_count) = sources
        .par_iter()
        .map(|&src| {
            let mut dist = vec![u32::MAX; v];
            let mut queue = VecDeque::new();
            dist[src] = 0;
            queue.push_back(src);
            let mut sum = 0u64;
            let mut count = 0u64;
            while let Some(u) = queue.pop_front() {
                for &nb in &out_adj[u] {
                    if dist[nb as usize] == u32::MAX {
                        dist[nb as usize] = dist[u] + 1;
                        sum += dist[nb as usize] as u64;
                        count += 1;
                        queue.push_back(nb as usize);
                    }
                }
            }
            (sum, count)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let avg_path_length = (pair_count > 0).then(|| dist_sum as f64 / pair_count as f64);

    let deg_mean = degree.iter().sum::<usize>() as f64 / v as f64;
    let degree_cv = (deg_mean > 0.0).then(|| {
        let var = degree
            .iter()
            .map(|&d| (d as f64 - deg_mean) * (d as f64 - deg_mean))
            .sum::<f64>()
            / v as f64;
        var.sqrt() / deg_mean
    });

    let er_path_length =
        (mean_degree > 1.0).then(|| (v as f64).ln() / mean_degree.ln());

    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let reversed_cumulative_degree_distribution = (0..=max_deg)
        .map(|k| degree.iter().filter(|&&d| d >= k).count() as f64 / v as f64)
        .collect();

    Ok(NetworkStats {
        node_count: v,
        edge_count: net.edge_count(),
        mean_degree,
        link_density,
        clustering_coefficient,
        avg_path_length,
        degree_cv,
        er_path_length,
        reversed_cumulative_degree_distribution,
    })
}

/// True when `target` is reachable from every other node that appears in the
/// network, following edge directions.
pub fn reachable_from_all(net: &WeightedDigraph, target: u32) -> bool {
    // BFS on reversed edges from the target
    let in_adj = net.in_adjacency();
    let v = net.node_count();
    let mut seen = vec![false; v];
    seen[target as usize] = true;
    let mut queue = VecDeque::from([target]);
    while let Some(u) = queue.pop_front() {
        for &p in &in_adj[u as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                queue.push_back(p);
            }
        }
    }
    seen.iter().all(|&s| s)
}
