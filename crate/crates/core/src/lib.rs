//! Exact binary polynomial optimization over beta-acyclic hypergraphs.
//!
//! An instance assigns a profit to every node and every hyperedge; the
//! objective of a 0/1 assignment is the sum of the profits of the nodes set
//! to 1 plus the profits of the edges whose nodes are all 1. Repeatedly
//! eliminating *nest points* (nodes whose incident edges form a chain under
//! inclusion) solves beta-acyclic instances exactly and, on other instances,
//! shrinks them to a core whose solutions lift back to the original.

pub mod classify;
pub mod elimination;
pub mod error;
pub mod format;
pub mod hypergraph;
pub mod instance;
pub mod instances;
pub mod oracle;
pub mod solver;
pub mod tracker;

pub use classify::{is_alpha_acyclic, is_beta_acyclic, AlphaCertificate, BetaCertificate, GyoStep};
pub use elimination::{FlipClass, FlipClassification, OpCount};
pub use error::{Error, Result};
pub use hypergraph::{EdgeId, Hypergraph, NodeId};
pub use instance::{Instance, Profit};
pub use oracle::brute_force_max;
pub use solver::{lift, lift_trace, reduce, solve, EliminationTrace, ReducedProblem, Reducer, Solution};
