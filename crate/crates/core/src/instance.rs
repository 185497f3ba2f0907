use crate::error::{CheckedProfit, Error, Result};
use crate::hypergraph::{EdgeChain, EdgeId, Hypergraph, NodeId};

/// Exact integer profit.
pub type Profit = i64;

/// A binary polynomial optimization instance: maximize
/// `Σ_v p_v x_v + Σ_e p_e Π_{v∈e} x_v` over `x ∈ {0,1}^V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: Hypergraph,
    node_profit: Vec<Profit>,
    edge_profit: Vec<Profit>,
}

impl Instance {
    /// An instance with `node_profits.len()` nodes and no edges.
    pub fn new(node_profits: Vec<Profit>) -> Self {
        Instance {
            graph: Hypergraph::new(node_profits.len()),
            node_profit: node_profits,
            edge_profit: Vec::new(),
        }
    }

    /// Convenience constructor over dense 0-based node indices.
    pub fn from_parts<I, E>(node_profits: Vec<Profit>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Profit)>,
        E: IntoIterator<Item = usize>,
    {
        let mut inst = Instance::new(node_profits);
        for (nodes, profit) in edges {
            let ids = nodes
                .into_iter()
                .map(|i| {
                    u32::try_from(i)
                        .map(NodeId)
                        .map_err(|_| Error::Invalid(format!("node index {i}")))
                })
                .collect::<Result<Vec<_>>>()?;
            inst.add_edge(ids, profit)?;
        }
        Ok(inst)
    }

    pub fn add_edge<I: IntoIterator<Item = NodeId>>(&mut self, nodes: I, profit: Profit) -> Result<EdgeId> {
        let e = self.graph.add_edge(nodes)?;
        debug_assert_eq!(e.index(), self.edge_profit.len());
        self.edge_profit.push(profit);
        Ok(e)
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn node_bound(&self) -> usize {
        self.graph.node_bound()
    }

    pub fn node_profit(&self, v: NodeId) -> Option<Profit> {
        self.graph.contains_node(v).then(|| self.node_profit[v.index()])
    }

    pub fn edge_profit(&self, e: EdgeId) -> Option<Profit> {
        self.graph.contains_edge(e).then(|| self.edge_profit[e.index()])
    }

    pub fn set_node_profit(&mut self, v: NodeId, p: Profit) -> Result<()> {
        if !self.graph.contains_node(v) {
            return Err(Error::UnknownNode(v));
        }
        self.node_profit[v.index()] = p;
        Ok(())
    }

    pub fn set_edge_profit(&mut self, e: EdgeId, p: Profit) -> Result<()> {
        if !self.graph.contains_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        self.edge_profit[e.index()] = p;
        Ok(())
    }

    pub fn is_nest_point(&self, u: NodeId) -> Result<bool> {
        self.graph.is_nest_point(u)
    }

    pub fn find_nest_point(&self) -> Option<EdgeChain> {
        self.graph.find_nest_point()
    }

    /// Removes `u` from the hypergraph; profits of surviving edges are kept.
    pub fn remove_node(&mut self, u: NodeId) -> Result<Vec<EdgeId>> {
        self.graph.remove_node(u)
    }

    /// Profits `[p_u, p_{e_1}, …, p_{e_k}]` along a chain.
    pub fn chain_profits(&self, chain: &EdgeChain) -> Result<Vec<Profit>> {
        let mut out = Vec::with_capacity(chain.len() + 1);
        out.push(self.node_profit(chain.owner).ok_or(Error::UnknownNode(chain.owner))?);
        for &e in &chain.edges {
            out.push(self.edge_profit(e).ok_or(Error::UnknownEdge(e))?);
        }
        Ok(out)
    }

    /// Objective value of `x`, indexed by node id over `0..node_bound()`.
    /// Entries of removed nodes are ignored.
    pub fn evaluate(&self, x: &[bool]) -> Result<Profit> {
        if x.len() != self.node_bound() {
            return Err(Error::AssignmentMismatch {
                expected: self.node_bound(),
                got: x.len(),
            });
        }
        let mut total: Profit = 0;
        for v in self.graph.nodes() {
            if x[v.index()] {
                total = total.add_or_overflow(self.node_profit[v.index()])?;
            }
        }
        for e in self.graph.edges() {
            let p = self.edge_profit[e.index()];
            if p != 0 && self.graph.edge(e).expect("live edge").iter().all(|v| x[v.index()]) {
                total = total.add_or_overflow(p)?;
            }
        }
        Ok(total)
    }

    /// Sum of absolute values of all live profits; an upper bound on the
    /// magnitude of any objective value or partial sum.
    pub fn profit_magnitude(&self) -> Result<u64> {
        let nodes = self.graph.nodes().map(|v| self.node_profit[v.index()]);
        let edges = self.graph.edges().map(|e| self.edge_profit[e.index()]);
        nodes
            .chain(edges)
            .try_fold(0u64, |acc, p| acc.checked_add(p.unsigned_abs()).ok_or(Error::Overflow))
    }
}
