//! Instance generators and transforms.
//!
//! Random instances use `ChaCha8Rng` seeded with `seed_from_u64`. Edges are
//! drawn first (cardinality, then members), then node profits in id order,
//! then edge profits in id order.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CheckedProfit, Error, Result};
use crate::hypergraph::NodeId;
use crate::instance::{Instance, Profit};
use crate::solver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomModel {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub seed: u64,
    /// Inclusive profit range.
    pub profit_min: Profit,
    pub profit_max: Profit,
}

impl RandomModel {
    pub fn new(num_nodes: usize, num_edges: usize, seed: u64) -> Self {
        RandomModel {
            num_nodes,
            num_edges,
            seed,
            profit_min: -10,
            profit_max: 10,
        }
    }

    pub fn with_profit_range(mut self, min: Profit, max: Profit) -> Self {
        self.profit_min = min;
        self.profit_max = max;
        self
    }

    /// Number of distinct node sets of cardinality at least two.
    fn capacity(&self) -> Option<u128> {
        let n = self.num_nodes;
        (n < 127).then(|| (1u128 << n) - n as u128 - 1)
    }
}

/// Cardinality in `2..=n` with probability proportional to `2^(1-c)`:
/// count fair coin flips until the first tail, rejecting draws beyond `n`.
fn sample_cardinality<R: Rng>(rng: &mut R, n: usize) -> usize {
    'draw: loop {
        let mut c = 2;
        while rng.gen::<bool>() {
            c += 1;
            if c > n {
                continue 'draw;
            }
        }
        return c;
    }
}

/// Draws a random hypergraph instance without parallel edges or loops.
pub fn generate(model: &RandomModel) -> Result<Instance> {
    let n = model.num_nodes;
    let m = model.num_edges;
    if m > 0 && (n < 2 || model.capacity().is_some_and(|cap| (m as u128) > cap)) {
        return Err(Error::InfeasibleEdgeCount { nodes: n, requested: m });
    }
    if model.profit_min > model.profit_max {
        return Err(Error::Invalid(format!(
            "empty profit range [{}, {}]",
            model.profit_min, model.profit_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let c = sample_cardinality(&mut rng, n);
        let mut members = index::sample(&mut rng, n, c).into_vec();
        members.sort_unstable();
        if seen.insert(members.clone()) {
            edges.push(members);
        }
    }
    let profit = |rng: &mut ChaCha8Rng| rng.gen_range(model.profit_min..=model.profit_max);
    let node_profits = (0..n).map(|_| profit(&mut rng)).collect();
    let edge_profits: Vec<Profit> = (0..m).map(|_| profit(&mut rng)).collect();
    Instance::from_parts(node_profits, edges.into_iter().zip(edge_profits))
}

/// Seed of one repetition in an experiment cell; independent of evaluation order.
pub fn derive_seed(master: u64, n: usize, m: usize, repetition: usize) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    [n as u64, m as u64, repetition as u64]
        .into_iter()
        .fold(splitmix(master), |acc, part| splitmix(acc ^ part))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub m: usize,
    /// Removed nodes as a share of the nodes lying in at least one edge.
    pub mean_removed_pct: f64,
    /// Removed nodes as a share of all `n` nodes, isolated ones included.
    pub mean_removed_pct_all: f64,
}

/// Removed-node percentages of one reduction: over non-isolated nodes and
/// over all nodes. An edgeless instance counts as fully removed.
pub fn removed_percentages(instance: &Instance) -> Result<(f64, f64)> {
    let g = instance.hypergraph();
    let n = g.node_count();
    let isolated = g.nodes().filter(|&v| g.degree(v) == Some(0)).count();
    let removed = solver::reduce(instance)?.trace.records.len();
    // Isolated nodes are always nest points, so `removed >= isolated`.
    let covered = n - isolated;
    let pct = |num: usize, den: usize| {
        if den == 0 {
            100.0
        } else {
            100.0 * num as f64 / den as f64
        }
    };
    Ok((pct(removed - isolated, covered), pct(removed, n)))
}

/// For every `(n, m)` cell, reduces `reps` random instances and averages the
/// removed-node percentages.
pub fn removal_experiment(grid: &[(usize, usize)], reps: usize, seed: u64) -> Result<Vec<ExperimentRow>> {
    grid.iter()
        .map(|&(n, m)| {
            let (mut covered, mut all) = (0.0, 0.0);
            for rep in 0..reps {
                let inst = generate(&RandomModel::new(n, m, derive_seed(seed, n, m, rep)))?;
                let (c, a) = removed_percentages(&inst)?;
                covered += c;
                all += a;
            }
            let mean = |total: f64| if reps == 0 { 0.0 } else { total / reps as f64 };
            Ok(ExperimentRow {
                n,
                m,
                mean_removed_pct: mean(covered),
                mean_removed_pct_all: mean(all),
            })
        })
        .collect()
}

/// A simple undirected graph with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize, Profit)>,
}

impl WeightedGraph {
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize, Profit)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(u, v, w) in &edges {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::Invalid(format!("edge ({u}, {v}) leaves the node range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at {u}")));
            }
            if w < 1 {
                return Err(Error::Invalid(format!("edge ({u}, {v}) has non-positive weight {w}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(WeightedGraph { num_nodes, edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, Profit)] {
        &self.edges
    }

    /// `Σ w_uv (x_u + x_v − 2 x_u x_v)`.
    pub fn cut_value(&self, x: &[bool]) -> Profit {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| x[u] != x[v])
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Encodes Max-Cut as binary polynomial optimization over an alpha-acyclic
/// hypergraph: one pair edge with profit `−2w` per graph edge (in input
/// order), then one edge over all nodes with profit 0. Node `v` gets the total
/// weight of its incident graph edges.
pub fn from_maxcut(graph: &WeightedGraph) -> Result<Instance> {
    let mut node_profits: Vec<Profit> = vec![0; graph.num_nodes];
    for &(u, v, w) in &graph.edges {
        node_profits[u] = node_profits[u].add_or_overflow(w)?;
        node_profits[v] = node_profits[v].add_or_overflow(w)?;
    }
    let mut inst = Instance::new(node_profits);
    for &(u, v, w) in &graph.edges {
        let p = w.checked_mul(-2).ok_or(Error::Overflow)?;
        inst.add_edge([NodeId(u as u32), NodeId(v as u32)], p)?;
    }
    if graph.num_nodes > 0 {
        inst.add_edge((0..graph.num_nodes as u32).map(NodeId), 0)?;
    }
    Ok(inst)
}

/// Laminar chain `{0} ⊆ {0,1} ⊆ …`: edge `i` holds nodes `0..=i`.
pub fn laminar_chain(node_profits: Vec<Profit>, edge_profits: Vec<Profit>) -> Result<Instance> {
    if edge_profits.len() > node_profits.len() {
        return Err(Error::Invalid("a laminar chain has at most one edge per node".into()));
    }
    let mut inst = Instance::new(node_profits);
    for (i, p) in edge_profits.into_iter().enumerate() {
        inst.add_edge((0..=i as u32).map(NodeId), p)?;
    }
    Ok(inst)
}
