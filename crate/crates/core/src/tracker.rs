//! Incremental nest-point search across a sequence of node removals.
//!
//! Two facts keep the search cheap. Stripping a node from edges preserves every
//! inclusion between them, so a nest point stays a nest point until it is
//! removed itself. And while a node is alive its set of incident edge ids never
//! changes. A verified chain is therefore reusable: when node `u` is checked
//! the tracker also records, for every node `w` of `u`'s largest edge, the first
//! chain edge containing `w`. If all of `w`'s edges lie in `u`'s chain, `w` is
//! a nest point too and its chain is a suffix of `u`'s.
//!
//! Nodes found not to be nest points are re-examined only after one of their
//! edges has been modified.

use std::collections::BTreeSet;
use std::ops::Bound::{Excluded, Unbounded};

use crate::hypergraph::{EdgeChain, EdgeId, Hypergraph, NestedSets, NodeId};

/// A nest point, its chain, and the nested node sets `e_i \ {u}` for
/// positions `0..=k` (position 0 is the implicit `{u}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestPoint {
    pub chain: EdgeChain,
    pub stripped: NestedSets,
}

impl NestPoint {
    /// Computes the nest point data for `u` directly, without a tracker.
    pub fn direct(g: &Hypergraph, u: NodeId) -> Option<NestPoint> {
        if !g.contains_node(u) {
            return None;
        }
        let edges = g.sorted_incidence(u);
        let layers = g.chain_layers(&edges)?;
        let k = edges.len();
        let entries = layers
            .into_iter()
            .filter(|&(w, _)| w != u)
            .map(|(w, first)| (w, first + 1))
            .collect();
        Some(NestPoint {
            chain: EdgeChain { owner: u, edges },
            stripped: NestedSets::from_positions(entries, k + 1),
        })
    }
}

#[derive(Clone, Copy, Debug)]
enum Status {
    Unknown,
    NotNest { checked: u64 },
    Nest { cluster: u32, layer: u32 },
}

#[derive(Debug)]
struct Cluster {
    chain: Vec<EdgeId>,
    /// Every node of the last chain edge with the first chain index holding it,
    /// sorted by that index.
    order: Vec<(NodeId, u32)>,
}

/// Finds the lowest-id nest point of a hypergraph that is only ever modified
/// by `remove_node` between queries. An explicit `remove_edge` is detected and
/// invalidates the cached state.
#[derive(Debug)]
pub struct NestTracker {
    status: Vec<Status>,
    clusters: Vec<Cluster>,
    live: BTreeSet<NodeId>,
    edge_deletions: u64,
    verifications: u64,
}

impl NestTracker {
    pub fn new(g: &Hypergraph) -> Self {
        NestTracker {
            status: vec![Status::Unknown; g.node_bound()],
            clusters: Vec::new(),
            live: g.nodes().collect(),
            edge_deletions: g.edge_deletions(),
            verifications: 0,
        }
    }

    /// How many chains were verified from scratch so far.
    pub fn verifications(&self) -> u64 {
        self.verifications
    }

    fn sync(&mut self, g: &Hypergraph) {
        assert_eq!(
            self.status.len(),
            g.node_bound(),
            "tracker used with a different hypergraph"
        );
        if g.edge_deletions() != self.edge_deletions {
            self.status.iter_mut().for_each(|s| *s = Status::Unknown);
            self.clusters.clear();
            self.edge_deletions = g.edge_deletions();
        }
    }

    /// The nest point with the smallest id, or `None` if there is none.
    pub fn next(&mut self, g: &Hypergraph) -> Option<NestPoint> {
        self.sync(g);
        let mut cursor = self.live.iter().next().copied();
        while let Some(v) = cursor {
            cursor = self.live.range((Excluded(v), Unbounded)).next().copied();
            if !g.contains_node(v) {
                self.live.remove(&v);
                continue;
            }
            if let Some(np) = self.probe(g, v) {
                return Some(np);
            }
        }
        None
    }

    /// Nest point data for a specific node, or `None` if it is not a nest point.
    pub fn nest_point(&mut self, g: &Hypergraph, u: NodeId) -> Option<NestPoint> {
        self.sync(g);
        if !g.contains_node(u) {
            return None;
        }
        self.probe(g, u)
    }

    fn probe(&mut self, g: &Hypergraph, v: NodeId) -> Option<NestPoint> {
        match self.status[v.index()] {
            Status::Nest { cluster, layer } => {
                if let Some(np) = self.nest_from_cluster(g, v, cluster as usize, layer as usize) {
                    return Some(np);
                }
            }
            Status::NotNest { checked } => {
                let incident = g.incident(v).expect("live node");
                if incident.iter().all(|&e| g.edge_touched(e) <= checked) {
                    return None;
                }
            }
            Status::Unknown => {}
        }
        self.verify(g, v)
    }

    fn verify(&mut self, g: &Hypergraph, v: NodeId) -> Option<NestPoint> {
        self.verifications += 1;
        let chain = g.sorted_incidence(v);
        let Some(order) = g.chain_layers(&chain) else {
            self.status[v.index()] = Status::NotNest { checked: g.epoch() };
            return None;
        };
        let id = self.clusters.len() as u32;
        let m = chain.len();
        for &(w, first) in &order {
            if w == v || !g.contains_node(w) || matches!(self.status[w.index()], Status::Nest { .. }) {
                continue;
            }
            if g.degree(w) == Some(m - first as usize) {
                self.status[w.index()] = Status::Nest {
                    cluster: id,
                    layer: first,
                };
            }
        }
        self.status[v.index()] = Status::Nest { cluster: id, layer: 0 };
        self.clusters.push(Cluster { chain, order });
        self.nest_from_cluster(g, v, id as usize, 0)
    }

    fn nest_from_cluster(&self, g: &Hypergraph, v: NodeId, cluster: usize, layer: usize) -> Option<NestPoint> {
        let cl = &self.clusters[cluster];
        let tail = &cl.chain[layer..];
        if Some(tail.len()) != g.degree(v) || !tail.iter().all(|&e| g.contains_edge(e)) {
            return None;
        }
        let mut edges = tail.to_vec();
        edges.sort_by_key(|&e| (g.edge_len_unchecked(e), e));
        let layer = layer as u32;
        let entries = cl
            .order
            .iter()
            .filter(|&&(w, _)| w != v && g.is_alive(w))
            .map(|&(w, first)| (w, first.max(layer) - layer + 1))
            .collect();
        let stripped = NestedSets::from_positions(entries, edges.len() + 1);
        debug_assert!(edges
            .iter()
            .enumerate()
            .all(|(i, &e)| stripped.set(i + 1).len() + 1 == g.edge_len_unchecked(e)));
        Some(NestPoint {
            chain: EdgeChain { owner: v, edges },
            stripped,
        })
    }
}
