//! Recognition of beta- and alpha-acyclic hypergraphs by elimination.

use serde::{Deserialize, Serialize};

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::tracker::NestTracker;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaCertificate {
    pub acyclic: bool,
    /// Nodes in the order they were removed as nest points.
    pub elimination_order: Vec<NodeId>,
    /// Nodes left once no nest point remains; empty iff acyclic.
    pub stuck_nodes: Vec<NodeId>,
}

/// Removes the lowest-id nest point until the hypergraph is empty (beta-acyclic)
/// or has no nest point.
pub fn is_beta_acyclic(g: &Hypergraph) -> BetaCertificate {
    let mut g = g.clone();
    let mut tracker = NestTracker::new(&g);
    let mut elimination_order = Vec::with_capacity(g.node_count());
    while let Some(nest) = tracker.next(&g) {
        let u = nest.chain.owner;
        g.remove_node(u).expect("nest point is live");
        elimination_order.push(u);
    }
    let stuck_nodes: Vec<NodeId> = g.nodes().collect();
    BetaCertificate {
        acyclic: stuck_nodes.is_empty(),
        elimination_order,
        stuck_nodes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "op", content = "id")]
pub enum GyoStep {
    RemoveNode(NodeId),
    RemoveEdge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCertificate {
    pub acyclic: bool,
    pub reduction_log: Vec<GyoStep>,
    /// The hypergraph where the reduction got stuck (empty iff acyclic).
    pub residual: Hypergraph,
}

/// Whether `e` may be deleted because another live edge contains it. Of two
/// parallel edges only the one with the higher id is deletable.
pub fn edge_is_redundant(g: &Hypergraph, e: EdgeId) -> bool {
    let Some(view) = g.edge(e) else { return false };
    let Some(anchor) = view.iter().next() else { return false };
    g.incident(anchor).expect("edge member is live").iter().any(|&f| {
        f != e && g.is_subset(e, f).expect("live edges") && (g.edge_len_unchecked(e) < g.edge_len_unchecked(f) || f < e)
    })
}

/// Applies GYO reduction, lowest applicable node first, else lowest
/// applicable edge: delete a node lying in at most one edge, or delete an edge
/// contained in another. Acyclic iff the empty hypergraph is reached.
pub fn is_alpha_acyclic(g: &Hypergraph) -> AlphaCertificate {
    let mut g = g.clone();
    let mut reduction_log = Vec::new();
    loop {
        let leaf = g.nodes().find(|&v| g.degree(v).expect("live") <= 1);
        if let Some(v) = leaf {
            g.remove_node(v).expect("live");
            reduction_log.push(GyoStep::RemoveNode(v));
            continue;
        }
        let redundant = g.edges().find(|&e| edge_is_redundant(&g, e));
        if let Some(e) = redundant {
            g.remove_edge(e).expect("live");
            reduction_log.push(GyoStep::RemoveEdge(e));
            continue;
        }
        break;
    }
    AlphaCertificate {
        acyclic: g.is_empty(),
        reduction_log,
        residual: g,
    }
}
