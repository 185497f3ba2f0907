#![allow(dead_code)]

use nestbpo::{Hypergraph, Instance, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random instance allowing loops and parallel edges.
pub fn random_instance<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Instance {
    let n = rng.gen_range(1..=max_nodes);
    let m = rng.gen_range(0..=max_edges);
    let edges: Vec<(Vec<usize>, i64)> = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=n.min(4));
            (
                rand::seq::index::sample(rng, n, size).into_vec(),
                rng.gen_range(-10..=10),
            )
        })
        .collect();
    Instance::from_parts((0..n).map(|_| rng.gen_range(-10..=10)).collect(), edges).unwrap()
}

/// Nested edges `{0}, {0,1}, ...` plus random extra profits.
pub fn laminar_instance<R: Rng>(rng: &mut R, n: usize) -> Instance {
    Instance::from_parts(
        (0..n).map(|_| rng.gen_range(-10..=10)).collect(),
        (1..=n).map(|i| ((0..i).collect::<Vec<_>>(), rng.gen_range(-10..=10))),
    )
    .unwrap()
}

/// A path `{0,1}, {1,2}, ...` with random profits.
pub fn path_instance<R: Rng>(rng: &mut R, n: usize) -> Instance {
    Instance::from_parts(
        (0..n).map(|_| rng.gen_range(-10..=10)).collect(),
        (1..n).map(|i| (vec![i - 1, i], rng.gen_range(-10..=10))),
    )
    .unwrap()
}

/// Beta-acyclic by construction: every new edge is a subset or superset of,
/// or disjoint from, each earlier one.
pub fn laminar_family_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Instance {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for _ in 0..m {
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(rng);
        let candidate: Vec<usize> = {
            let size = rng.gen_range(1..=n);
            let mut c = nodes[..size].to_vec();
            c.sort_unstable();
            c
        };
        let laminar = sets.iter().all(|s| {
            let inter = s.iter().filter(|v| candidate.contains(v)).count();
            inter == 0 || inter == s.len() || inter == candidate.len()
        });
        if laminar {
            sets.push(candidate);
        }
    }
    Instance::from_parts(
        (0..n).map(|_| rng.gen_range(-10..=10)).collect(),
        sets.into_iter().map(|s| (s, rng.gen_range(-10..=10))),
    )
    .unwrap()
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

/// Beta verdict with nest points removed in random order, found by brute force.
pub fn beta_random_order<R: Rng>(g: &Hypergraph, rng: &mut R) -> bool {
    let mut g = g.clone();
    loop {
        let nest: Vec<NodeId> = g.nodes().filter(|&v| g.is_nest_point(v).unwrap()).collect();
        match nest.choose(rng) {
            Some(&u) => {
                g.remove_node(u).unwrap();
            }
            None => return g.is_empty(),
        }
    }
}

/// GYO verdict with reduction steps applied in random order.
pub fn alpha_random_order<R: Rng>(g: &Hypergraph, rng: &mut R) -> bool {
    let mut g = g.clone();
    loop {
        let leaves: Vec<NodeId> = g.nodes().filter(|&v| g.degree(v).unwrap() <= 1).collect();
        let redundant: Vec<_> = g
            .edges()
            .filter(|&e| nestbpo::classify::edge_is_redundant(&g, e))
            .collect();
        if leaves.is_empty() && redundant.is_empty() {
            return g.is_empty();
        }
        if rng.gen_range(0..leaves.len() + redundant.len()) < leaves.len() {
            g.remove_node(*leaves.choose(rng).unwrap()).unwrap();
        } else {
            g.remove_edge(*redundant.choose(rng).unwrap()).unwrap();
        }
    }
}
