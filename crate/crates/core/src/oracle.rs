//! Exhaustive reference maximizer.

use crate::error::{Error, Result};
use crate::instance::{Instance, Profit};
use crate::solver::Solution;

pub const DEFAULT_NODE_LIMIT: usize = 20;

/// Enumerates every assignment of the live nodes in Gray-code order and
/// returns a maximizer. Among maximizers the lexicographically smallest
/// assignment (ordered by node id) wins. Removed node ids are set to 0.
pub fn brute_force_max(instance: &Instance, node_limit: usize) -> Result<Solution> {
    let g = instance.hypergraph();
    let nodes: Vec<_> = g.nodes().collect();
    let n = nodes.len();
    if n > node_limit || n > 62 {
        return Err(Error::TooLarge {
            nodes: n,
            limit: node_limit.min(62),
        });
    }
    if instance.profit_magnitude()? > i64::MAX as u64 {
        return Err(Error::Overflow);
    }

    let mut slot = vec![usize::MAX; instance.node_bound()];
    for (i, v) in nodes.iter().enumerate() {
        slot[v.index()] = i;
    }
    let mut edge_size = Vec::new();
    let mut edge_profit = Vec::new();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        let view = g.edge(e).expect("live edge");
        let local = edge_size.len();
        edge_size.push(view.len());
        edge_profit.push(instance.edge_profit(e).expect("live edge"));
        for v in view.iter() {
            touching[slot[v.index()]].push(local);
        }
    }
    let node_profit: Vec<Profit> = nodes.iter().map(|&v| instance.node_profit(v).expect("live")).collect();

    let mut ones = vec![0usize; edge_size.len()];
    let mut value = vec![false; n];
    let mut objective: Profit = 0;
    // Node i maps to bit n-1-i so that numeric order is lexicographic order.
    let mut key: u64 = 0;
    let mut best = (0 as Profit, 0u64);
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        let on = !value[i];
        value[i] = on;
        key ^= 1 << (n - 1 - i);
        if on {
            objective += node_profit[i];
            for &e in &touching[i] {
                ones[e] += 1;
                if ones[e] == edge_size[e] {
                    objective += edge_profit[e];
                }
            }
        } else {
            objective -= node_profit[i];
            for &e in &touching[i] {
                if ones[e] == edge_size[e] {
                    objective -= edge_profit[e];
                }
                ones[e] -= 1;
            }
        }
        if objective > best.0 || (objective == best.0 && key < best.1) {
            best = (objective, key);
        }
    }

    let mut assignment = vec![false; instance.node_bound()];
    for (i, v) in nodes.iter().enumerate() {
        assignment[v.index()] = best.1 >> (n - 1 - i) & 1 == 1;
    }
    Ok(Solution {
        assignment,
        objective: best.0,
    })
}
