mod common;

use common::*;
use nestbpo::oracle::{brute_force_max, DEFAULT_NODE_LIMIT};
use nestbpo::solver::optimal_objective_offset_check;
use nestbpo::{is_alpha_acyclic, is_beta_acyclic, lift, reduce, solve, Error, Instance, NodeId, Reducer};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eliminates up to `steps` nest points, each chosen at random among all current ones.
fn random_partial_reduction(inst: &Instance, steps: usize, rng: &mut ChaCha8Rng) -> nestbpo::ReducedProblem {
    let mut reducer = Reducer::new(inst);
    for _ in 0..steps {
        let g = reducer.current().hypergraph();
        let nest: Vec<NodeId> = g.nodes().filter(|&v| g.is_nest_point(v).unwrap()).collect();
        let Some(&u) = nest.choose(rng) else { break };
        reducer.eliminate(u).unwrap();
    }
    reducer.into_reduced()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solver_matches_oracle_on_beta_acyclic_instances(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let inst = match seed % 3 {
            0 => laminar_family_instance(&mut rng, 9, 8),
            _ => random_instance(&mut rng, 9, 6),
        };
        prop_assume!(is_beta_acyclic(inst.hypergraph()).acyclic);
        let sol = solve(&inst).unwrap();
        prop_assert_eq!(inst.evaluate(&sol.assignment).unwrap(), sol.objective);
        prop_assert_eq!(sol.objective, brute_force_max(&inst, DEFAULT_NODE_LIMIT).unwrap().objective);
    }

    #[test]
    fn solve_refuses_exactly_the_cyclic_instances(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 8, 8);
        let acyclic = is_beta_acyclic(inst.hypergraph()).acyclic;
        match solve(&inst) {
            Ok(_) => prop_assert!(acyclic),
            Err(Error::NotBetaAcyclic(reduced)) => {
                prop_assert!(!acyclic);
                prop_assert!(reduced.core.find_nest_point().is_none());
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn offset_identity_holds_after_partial_reduction(seed in any::<u64>(), steps in 0usize..10) {
        let mut rng = rng(seed);
        let inst = random_instance(&mut rng, 9, 8);
        let reduced = random_partial_reduction(&inst, steps, &mut rng);
        for _ in 0..20 {
            let x = random_bits(&mut rng, inst.node_bound());
            prop_assert!(optimal_objective_offset_check(&inst, &reduced, &x).unwrap());
        }
    }

    #[test]
    fn reduction_preserves_the_optimum(seed in any::<u64>(), steps in 0usize..10) {
        let mut rng = rng(seed);
        let inst = random_instance(&mut rng, 9, 9);
        let reduced = random_partial_reduction(&inst, steps, &mut rng);
        let best = brute_force_max(&inst, DEFAULT_NODE_LIMIT).unwrap().objective;
        let core = brute_force_max(&reduced.core, DEFAULT_NODE_LIMIT).unwrap();
        prop_assert_eq!(core.objective + reduced.trace.accumulated_offset, best);
        let lifted = lift(&reduced, &core.assignment).unwrap();
        prop_assert_eq!(inst.evaluate(&lifted).unwrap(), best);
    }

    #[test]
    fn lifting_keeps_core_values(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let inst = random_instance(&mut rng, 10, 10);
        let reduced = reduce(&inst).unwrap();
        let x = random_bits(&mut rng, inst.node_bound());
        let lifted = lift(&reduced, &x).unwrap();
        for v in reduced.core_nodes() {
            prop_assert_eq!(lifted[v.index()], x[v.index()]);
        }
    }

    #[test]
    fn beta_verdict_ignores_elimination_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let inst = random_instance(&mut rng, 10, 8);
        let g = inst.hypergraph();
        prop_assert_eq!(beta_random_order(g, &mut rng), is_beta_acyclic(g).acyclic);
    }

    #[test]
    fn alpha_verdict_ignores_step_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let inst = random_instance(&mut rng, 10, 8);
        let g = inst.hypergraph();
        prop_assert_eq!(alpha_random_order(g, &mut rng), is_alpha_acyclic(g).acyclic);
    }

    #[test]
    fn beta_acyclic_implies_alpha_acyclic(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 10, 8);
        let g = inst.hypergraph();
        prop_assert!(!is_beta_acyclic(g).acyclic || is_alpha_acyclic(g).acyclic);
    }

    #[test]
    fn beta_certificate_replays(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 10, 8);
        let cert = is_beta_acyclic(inst.hypergraph());
        let mut g = inst.hypergraph().clone();
        for &u in &cert.elimination_order {
            prop_assert!(g.is_nest_point(u).unwrap());
            g.remove_node(u).unwrap();
        }
        prop_assert_eq!(g.nodes().collect::<Vec<_>>(), cert.stuck_nodes.clone());
        prop_assert!(g.find_nest_point().is_none());
    }

    #[test]
    fn huge_profits_overflow_cleanly(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let mut inst = random_instance(&mut rng, 6, 6);
        let nodes: Vec<NodeId> = inst.hypergraph().nodes().collect();
        for v in nodes {
            let p = if rng.gen() { i64::MAX - rng.gen_range(0..4) } else { i64::MIN + rng.gen_range(0..4) };
            inst.set_node_profit(v, p).unwrap();
        }
        match reduce(&inst) {
            Ok(reduced) => {
                let x = vec![false; inst.node_bound()];
                prop_assert!(matches!(
                    optimal_objective_offset_check(&inst, &reduced, &x),
                    Ok(true) | Err(Error::Overflow)
                ));
            }
            Err(e) => prop_assert!(matches!(e, Error::Overflow)),
        }
    }
}

#[test]
fn families_are_solved_exactly() {
    let mut rng = rng(11);
    for n in 1..=12 {
        for inst in [laminar_instance(&mut rng, n), path_instance(&mut rng, n)] {
            assert!(is_beta_acyclic(inst.hypergraph()).acyclic);
            let sol = solve(&inst).unwrap();
            assert_eq!(
                sol.objective,
                brute_force_max(&inst, DEFAULT_NODE_LIMIT).unwrap().objective
            );
        }
    }
}
