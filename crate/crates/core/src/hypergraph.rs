//! Hypergraph storage with stable node and edge identities.
//!
//! Edges keep a sorted member list. Removing a node does not rewrite the member
//! lists eagerly: the node is marked dead, every incident edge decrements its
//! live count, and a list is compacted once dead entries outnumber live ones.
//! Iteration always filters dead entries, so callers never observe them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct EdgeSlot {
    /// Sorted ascending; may still hold removed nodes until compaction.
    members: Vec<NodeId>,
    live: usize,
}

/// A hypergraph whose edge set may contain loops and parallel edges.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    alive: Vec<bool>,
    live_nodes: usize,
    incidence: Vec<Vec<EdgeId>>,
    edges: Vec<Option<EdgeSlot>>,
    live_edges: usize,
    /// Incremented by every node removal; used to timestamp edge changes.
    epoch: u64,
    edge_touched: Vec<u64>,
    /// Incremented by every explicit `remove_edge`.
    edge_deletions: u64,
}

/// Borrowed view of one live edge.
#[derive(Clone, Copy)]
pub struct EdgeView<'a> {
    members: &'a [NodeId],
    len: usize,
    alive: &'a [bool],
}

impl<'a> EdgeView<'a> {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + 'a {
        let alive = self.alive;
        self.members.iter().copied().filter(move |v| alive[v.index()])
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false) && self.members.binary_search(&v).is_ok()
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for EdgeView<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The edges incident to a nest point, ordered so that each edge's node set
/// contains the previous one. Position 0 (the singleton of `owner`) is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChain {
    pub owner: NodeId,
    pub edges: Vec<EdgeId>,
}

impl EdgeChain {
    /// Number of incident edges, `k`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl Hypergraph {
    pub fn new(num_nodes: usize) -> Self {
        assert!(num_nodes <= u32::MAX as usize, "node ids are 32-bit");
        Hypergraph {
            alive: vec![true; num_nodes],
            live_nodes: num_nodes,
            incidence: vec![Vec::new(); num_nodes],
            edges: Vec::new(),
            live_edges: 0,
            epoch: 0,
            edge_touched: Vec::new(),
            edge_deletions: 0,
        }
    }

    /// One past the largest node id ever issued.
    pub fn node_bound(&self) -> usize {
        self.alive.len()
    }

    /// One past the largest edge id ever issued.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.live_nodes
    }

    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn is_empty(&self) -> bool {
        self.live_nodes == 0 && self.live_edges == 0
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e.index()), Some(Some(_)))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeView<'_>> {
        self.edges.get(e.index())?.as_ref().map(|slot| EdgeView {
            members: &slot.members,
            len: slot.live,
            alive: &self.alive,
        })
    }

    pub fn incident(&self, v: NodeId) -> Option<&[EdgeId]> {
        if self.contains_node(v) {
            Some(&self.incidence[v.index()])
        } else {
            None
        }
    }

    pub fn degree(&self, v: NodeId) -> Option<usize> {
        self.incident(v).map(<[EdgeId]>::len)
    }

    #[inline]
    pub(crate) fn edge_len_unchecked(&self, e: EdgeId) -> usize {
        self.edges[e.index()].as_ref().map_or(0, |s| s.live)
    }

    #[inline]
    pub(crate) fn is_alive(&self, v: NodeId) -> bool {
        self.alive[v.index()]
    }

    pub(crate) fn epoch(&self) -> u64 {
        self.epoch
    }

    pub(crate) fn edge_deletions(&self) -> u64 {
        self.edge_deletions
    }

    pub(crate) fn edge_touched(&self, e: EdgeId) -> u64 {
        self.edge_touched[e.index()]
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    /// Adds an edge over the given live nodes and returns its fresh id.
    pub fn add_edge<I: IntoIterator<Item = NodeId>>(&mut self, nodes: I) -> Result<EdgeId> {
        let mut members: Vec<NodeId> = nodes.into_iter().collect();
        if members.is_empty() {
            return Err(Error::EmptyEdge);
        }
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateNode(w[0]));
            }
        }
        for &v in &members {
            self.check_node(v)?;
        }
        let id = EdgeId(u32::try_from(self.edges.len()).map_err(|_| Error::Invalid("too many edges".into()))?);
        for &v in &members {
            self.incidence[v.index()].push(id);
        }
        let live = members.len();
        self.edges.push(Some(EdgeSlot { members, live }));
        self.edge_touched.push(self.epoch);
        self.live_edges += 1;
        Ok(id)
    }

    /// Removes `u`: edges equal to `{u}` are deleted (their ids are retired and
    /// returned), every other incident edge loses `u` and keeps its id.
    pub fn remove_node(&mut self, u: NodeId) -> Result<Vec<EdgeId>> {
        self.check_node(u)?;
        self.alive[u.index()] = false;
        self.live_nodes -= 1;
        self.epoch += 1;
        let mut deleted = Vec::new();
        for e in std::mem::take(&mut self.incidence[u.index()]) {
            let slot = self.edges[e.index()].as_mut().expect("incidence refers to a live edge");
            slot.live -= 1;
            if slot.live == 0 {
                self.edges[e.index()] = None;
                self.live_edges -= 1;
                deleted.push(e);
            } else {
                self.edge_touched[e.index()] = self.epoch;
                if slot.members.len() > 2 * slot.live + 4 {
                    let alive = &self.alive;
                    slot.members.retain(|v| alive[v.index()]);
                }
            }
        }
        Ok(deleted)
    }

    /// Deletes an edge outright, leaving its nodes in place.
    pub fn remove_edge(&mut self, e: EdgeId) -> Result<()> {
        let slot = self
            .edges
            .get_mut(e.index())
            .and_then(Option::take)
            .ok_or(Error::UnknownEdge(e))?;
        for v in slot.members {
            if self.alive[v.index()] {
                self.incidence[v.index()].retain(|&f| f != e);
            }
        }
        self.live_edges -= 1;
        self.edge_deletions += 1;
        Ok(())
    }

    /// True iff the live node set of `a` is contained in that of `b`.
    pub fn is_subset(&self, a: EdgeId, b: EdgeId) -> Result<bool> {
        let ea = self.edge(a).ok_or(Error::UnknownEdge(a))?;
        let eb = self.edge(b).ok_or(Error::UnknownEdge(b))?;
        if ea.len() > eb.len() {
            return Ok(false);
        }
        let mut rest = eb.iter();
        'outer: for v in ea.iter() {
            for w in rest.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return Ok(false);
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// Incident edges of `u` in canonical chain order: by cardinality, parallel
    /// edges by ascending id.
    pub(crate) fn sorted_incidence(&self, u: NodeId) -> Vec<EdgeId> {
        let mut chain = self.incidence[u.index()].clone();
        chain.sort_by_key(|&e| (self.edge_len_unchecked(e), e));
        chain
    }

    /// The inclusion-ordered chain of `u` if `u` is a nest point.
    pub fn nest_chain(&self, u: NodeId) -> Result<Option<EdgeChain>> {
        self.check_node(u)?;
        let edges = self.sorted_incidence(u);
        for w in edges.windows(2) {
            if !self.is_subset(w[0], w[1])? {
                return Ok(None);
            }
        }
        Ok(Some(EdgeChain { owner: u, edges }))
    }

    pub fn is_nest_point(&self, u: NodeId) -> Result<bool> {
        Ok(self.nest_chain(u)?.is_some())
    }

    /// The nest point with the smallest id, with its chain. Brute force over
    /// all nodes; [`crate::tracker::NestTracker`] answers the same query
    /// incrementally across removals.
    pub fn find_nest_point(&self) -> Option<EdgeChain> {
        self.nodes().find_map(|u| self.nest_chain(u).expect("live node"))
    }

    /// Walks a sorted chain, checking consecutive inclusion, and reports every
    /// node of the last edge with the index of the first chain edge holding it.
    /// Returns `None` as soon as an inclusion fails.
    pub(crate) fn chain_layers(&self, chain: &[EdgeId]) -> Option<Vec<(NodeId, u32)>> {
        let mut out = Vec::new();
        let mut prev: Option<EdgeView<'_>> = None;
        for (i, &e) in chain.iter().enumerate() {
            let cur = self.edge(e)?;
            match prev {
                None => out.extend(cur.iter().map(|v| (v, i as u32))),
                Some(p) => {
                    let mut old = p.iter().peekable();
                    for v in cur.iter() {
                        match old.peek() {
                            Some(&w) if w == v => {
                                old.next();
                            }
                            Some(&w) if w < v => return None,
                            _ => out.push((v, i as u32)),
                        }
                    }
                    if old.next().is_some() {
                        return None;
                    }
                }
            }
            prev = Some(cur);
        }
        Some(out)
    }

    /// Recomputes incidence from the edge lists and compares; for tests.
    pub fn check_consistency(&self) -> Result<()> {
        let mut expected: Vec<Vec<EdgeId>> = vec![Vec::new(); self.node_bound()];
        let mut live_edges = 0;
        for e in self.edges() {
            live_edges += 1;
            let view = self.edge(e).expect("live");
            let members = view.to_vec();
            if members.len() != view.len() || members.is_empty() {
                return Err(Error::Invariant(format!("edge {e} has a stale live count")));
            }
            for v in members {
                expected[v.index()].push(e);
            }
        }
        if live_edges != self.live_edges || self.nodes().count() != self.live_nodes {
            return Err(Error::Invariant("cached counts out of date".into()));
        }
        for v in self.nodes() {
            let mut got = self.incidence[v.index()].clone();
            got.sort_unstable();
            if got != expected[v.index()] {
                return Err(Error::Invariant(format!("incidence of {v} is not the transpose")));
            }
        }
        Ok(())
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_bound() == other.node_bound()
            && self.alive == other.alive
            && self.edge_bound() == other.edge_bound()
            && (0..self.edge_bound()).all(|i| {
                let e = EdgeId(i as u32);
                match (self.edge(e), other.edge(e)) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.len() == b.len() && a.iter().eq(b.iter()),
                    _ => false,
                }
            })
    }
}

impl Eq for Hypergraph {}

/// Nested node sets `S_0 ⊆ S_1 ⊆ … ⊆ S_k` stored as one member list and
/// prefix lengths: `S_i = members[..bounds[i]]`. Members are sorted by the
/// first set that holds them, then by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedSets {
    members: Vec<NodeId>,
    bounds: Vec<u32>,
}

impl NestedSets {
    /// Builds from `(node, position)` pairs, where `position` is the index of
    /// the first set containing the node, for sets `0..positions`.
    pub(crate) fn from_positions(mut entries: Vec<(NodeId, u32)>, positions: usize) -> Self {
        entries.sort_by_key(|&(v, p)| (p, v));
        let mut bounds = vec![0u32; positions];
        for &(_, p) in &entries {
            bounds[p as usize] += 1;
        }
        let mut acc = 0;
        for b in bounds.iter_mut() {
            acc += *b;
            *b = acc;
        }
        NestedSets {
            members: entries.into_iter().map(|(v, _)| v).collect(),
            bounds,
        }
    }

    /// Builds from explicit sets, which must be nested and start empty.
    pub fn from_sets(sets: &[Vec<NodeId>]) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, set) in sets.iter().enumerate() {
            let current: std::collections::BTreeSet<NodeId> = set.iter().copied().collect();
            if current.len() != set.len() {
                return Err(Error::Invalid(format!("set {i} repeats a node")));
            }
            if !seen.is_subset(&current) {
                return Err(Error::Invalid(format!(
                    "set {i} does not contain set {}",
                    i.saturating_sub(1)
                )));
            }
            for &v in current.difference(&seen) {
                entries.push((v, i as u32));
            }
            seen = current;
        }
        if sets.first().is_some_and(|s| !s.is_empty()) {
            return Err(Error::Invalid("the first set must be empty".into()));
        }
        Ok(Self::from_positions(entries, sets.len()))
    }

    /// Number of sets, `k + 1`.
    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn set(&self, i: usize) -> &[NodeId] {
        &self.members[..self.bounds[i] as usize]
    }

    /// Members ordered by first appearance.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn to_sets(&self) -> Vec<Vec<NodeId>> {
        (0..self.len()).map(|i| self.set(i).to_vec()).collect()
    }
}
