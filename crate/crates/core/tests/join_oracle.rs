mod common;

use std::collections::BTreeSet;

use insp_core::{brute_force_join, min_cost_ij_join, JoinError, ParityInstance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_dp_matches_enumeration(seed in any::<u64>(), k in 1usize..8, m in 0usize..4, labels in prop::collection::vec(0u8..3, 11)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_instance(&mut rng, k, m, 0, 3);
        let tree = inst.tree();
        prop_assume!(tree.edge_count() <= 10);
        let mut even = BTreeSet::new();
        let mut odd = BTreeSet::new();
        for x in tree.nodes() {
            match labels[x % labels.len()] {
                0 => { even.insert(x); }
                1 => { odd.insert(x); }
                _ => {}
            }
        }
        let free = tree.node_count() - even.len() - odd.len();
        let p = ParityInstance::new(tree, even, odd).unwrap();
        let fast = min_cost_ij_join(&p);
        let slow = brute_force_join(&p);
        prop_assert_eq!(&fast, &slow);
        match fast {
            Ok(j) => prop_assert!(p.is_satisfied_by(&j.edges)),
            Err(e) => {
                prop_assert_eq!(e, JoinError::Infeasible);
                // a tree is infeasible exactly when nothing is free and |J| is odd
                prop_assert!(free == 0 && p.odd_set().len() % 2 == 1);
            }
        }
    }
}

#[test]
fn enumeration_guard() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inst = common::random_instance(&mut rng, 26, 0, 2, 2);
    let p = ParityInstance::new(inst.tree(), BTreeSet::new(), BTreeSet::new()).unwrap();
    assert_eq!(brute_force_join(&p), Err(JoinError::TooLarge(25)));
    assert!(min_cost_ij_join(&p).unwrap().edges.is_empty());
}
