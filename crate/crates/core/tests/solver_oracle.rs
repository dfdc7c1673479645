mod common;

use insp_core::splitoff::potential;
use insp_core::verify::{
    brute_force_insp, fractional_lower_bound, singleton_requirements, tree_loads,
    uniform_integer_formula, verify_feasible_capacity, verify_realization,
};
use insp_core::{
    max_flow, optimal_cost_formula, solve, solve_with, EdgeCapacity, Instance, Rational, SplitEvent,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_solution(inst: &Instance) {
    let sol = solve(inst).unwrap();
    assert_eq!(sol.cost, optimal_cost_formula(inst).unwrap());
    assert_eq!(sol.cost, inst.realization_cost(&sol.realization).unwrap());
    assert_eq!(verify_feasible_capacity(inst, &sol.capacity), Ok(()));
    assert_eq!(verify_realization(inst, &sol.realization), Ok(()));
    let lower = fractional_lower_bound(inst);
    assert!(lower <= sol.cost);
    assert_eq!(sol.cost, lower + sol.join.cost);

    let loads = tree_loads(inst, &sol.realization);
    assert_eq!(verify_feasible_capacity(inst, &loads), Ok(()));
    assert_eq!(loads.cost(inst.tree()), sol.cost);
}

#[test]
fn random_instances_meet_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let k = rng.random_range(2..=8);
        let m = rng.random_range(0..=4);
        let inst = common::random_instance(&mut rng, k, m, 2, 6);
        check_solution(&inst);
    }
}

/// Smallest cost over capacities `c^R + δ`, `δ ∈ {0,1}^E`, that pass (c1)/(c2).
fn brute_force_feasible_capacity(inst: &Instance) -> Rational {
    let base = inst.base_capacity();
    let m = base.len();
    (0u32..1 << m)
        .filter_map(|mask| {
            let c = EdgeCapacity::new(
                (0..m)
                    .map(|e| base.get(e) + u64::from(mask >> e & 1))
                    .collect(),
            );
            verify_feasible_capacity(inst, &c)
                .ok()
                .map(|_| c.cost(inst.tree()))
        })
        .min()
        .unwrap()
}

#[test]
fn integer_optimum_equals_feasible_capacity_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let k = rng.random_range(2..=5);
        let m = rng.random_range(0..=3);
        let inst = common::random_instance(&mut rng, k, m, 2, 3);
        let by_capacity = brute_force_feasible_capacity(&inst);
        let by_solver = solve(&inst).unwrap().cost;
        assert_eq!(by_capacity, by_solver);
        if k <= 4 {
            let (y, by_enumeration) = brute_force_insp(&inst, None).unwrap();
            assert_eq!(verify_realization(&inst, &y), Ok(()));
            assert_eq!(by_enumeration, by_solver, "seed instance {inst:?}");
        }
    }
}

#[test]
fn uniform_stars_match_rounded_half_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let k = rng.random_range(2..=7);
        let req: Vec<_> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, rng.random_range(2..=6)))
            .collect();
        let inst = common::uniform_star(&req, k);
        let big_r = singleton_requirements(&inst);
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.cost, uniform_integer_formula(&big_r).unwrap());
        let odd = big_r.iter().sum::<u64>() % 2 == 1;
        assert_eq!(sol.join.edges.len(), usize::from(odd));
    }
}

#[test]
fn splitting_steps_keep_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let k = rng.random_range(2..=6);
        let m = rng.random_range(1..=3);
        let inst = common::random_instance(&mut rng, k, m, 2, 5);
        let tree = inst.tree();
        let mut last = None;
        let mut start = None;
        let mut finish = None;
        let mut active = None;
        let mut observer = |ev: &SplitEvent<'_>| match ev {
            SplitEvent::Start { graph } => {
                start = Some(potential(tree, graph));
                last = start;
            }
            SplitEvent::Activate { node, graph, .. } => {
                active = Some(*node);
                assert_eq!(graph.degree(*node) % 2, 0);
            }
            SplitEvent::Split {
                node,
                amount,
                graph,
                demands,
                ..
            } => {
                assert_eq!(Some(*node), active);
                assert!(*amount > 0);
                assert_eq!(graph.degree(*node) % 2, 0);
                let p = potential(tree, graph);
                assert!(p <= last.unwrap());
                last = Some(p);
                for (&(a, b), &d) in demands.iter() {
                    assert!(max_flow(graph, a, b).unwrap() >= d);
                }
            }
            SplitEvent::Finish { graph } => finish = Some(potential(tree, graph)),
        };
        let sol = solve_with(&inst, &mut observer).unwrap();
        assert_eq!(start, Some(sol.capacity.cost(tree)));
        assert_eq!(finish, Some(sol.cost));
    }
}
