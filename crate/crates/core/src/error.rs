use thiserror::Error;

use crate::hypergraph::{EdgeId, NodeId};
use crate::solver::ReducedProblem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edges must contain at least one node")]
    EmptyEdge,
    #[error("node {0} appears more than once in an edge")]
    DuplicateNode(NodeId),
    #[error("assignment covers {got} nodes, expected {expected}")]
    AssignmentMismatch { expected: usize, got: usize },
    #[error("node {0} has no assigned value")]
    Unassigned(NodeId),
    #[error("integer overflow in profit arithmetic")]
    Overflow,
    #[error("hypergraph is not beta-acyclic: {} nodes remain after nest-point elimination", .0.core.node_count())]
    NotBetaAcyclic(Box<ReducedProblem>),
    #[error("node {0} is not a nest point")]
    NotNestPoint(NodeId),
    #[error("instance has {nodes} nodes, brute force is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("cannot place {requested} distinct edges on {nodes} nodes")]
    InfeasibleEdgeCount { nodes: usize, requested: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Checked helpers so every profit operation surfaces overflow the same way.
pub(crate) trait CheckedProfit: Sized {
    fn add_or_overflow(self, rhs: Self) -> Result<Self>;
    fn neg_or_overflow(self) -> Result<Self>;
}

impl CheckedProfit for i64 {
    #[inline]
    fn add_or_overflow(self, rhs: i64) -> Result<i64> {
        self.checked_add(rhs).ok_or(Error::Overflow)
    }

    #[inline]
    fn neg_or_overflow(self) -> Result<i64> {
        self.checked_neg().ok_or(Error::Overflow)
    }
}
