use cuthier::arboricity::compute_arboricity;
use cuthier::dense_core::verify_core;
use cuthier::hierarchy::{build_hierarchy, build_hierarchy_traced, validate_hierarchy};
use cuthier::loads::{ideal_loads, in_spanning_tree_polytope, is_tight};
use cuthier::oracle::{brute_dense_core, brute_hierarchy, brute_max_skew_density};
use cuthier::{seeded_rng, SolverConfig, WeightedGraph};
use proptest::prelude::*;

fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let tree = prop::collection::vec((any::<prop::sample::Index>(), 1u64..=9), n - 1);
        let extra = prop::collection::vec((0..n, 0..n, 1u64..=9), 0..=max_extra);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut triples: Vec<(usize, usize, u64)> =
                tree.iter().enumerate().map(|(i, (p, w))| (p.index(i + 1), i + 1, *w)).collect();
            triples.extend(extra.into_iter().filter(|(u, v, _)| u != v));
            WeightedGraph::from_triples(n, &triples).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hierarchy_matches_brute_force(g in connected_graph(7, 8), seed in any::<u64>()) {
        let (tree, steps) = build_hierarchy_traced(&g, &mut seeded_rng(seed), &SolverConfig::default()).unwrap();
        prop_assert_eq!(tree.canonical(), brute_hierarchy(&g).unwrap().canonical());
        prop_assert!(validate_hierarchy(&g, &tree, 7).is_empty());
        prop_assert!(steps.len() < g.n().max(1));
        for step in &steps {
            prop_assert!(brute_dense_core(&step.graph, &step.set).unwrap());
            prop_assert!(step.k / 2 < step.set.len() as u64 && step.set.len() as u64 <= step.k);
        }
    }

    #[test]
    fn sigma_is_monotone_along_paths(g in connected_graph(8, 10)) {
        let tree = build_hierarchy(&g, &mut seeded_rng(0), &SolverConfig::default()).unwrap();
        for p in tree.internal_nodes() {
            let node = tree.node(p);
            for &c in &node.children {
                if let (Some(parent), Some(child)) = (&node.sigma, &tree.node(c).sigma) {
                    prop_assert!(child >= parent);
                }
            }
        }
    }

    #[test]
    fn randomized_hierarchy_agrees(g in connected_graph(6, 6), seed in any::<u64>()) {
        let tree = build_hierarchy(&g, &mut seeded_rng(seed), &SolverConfig::randomized()).unwrap();
        prop_assert_eq!(tree.canonical(), brute_hierarchy(&g).unwrap().canonical());
    }

    #[test]
    fn arboricity_is_max_sigma(g in connected_graph(7, 8)) {
        let r = compute_arboricity(&g).unwrap();
        prop_assert_eq!(&r.fractional, &brute_max_skew_density(&g).unwrap().0);
        let tree = build_hierarchy(&g, &mut seeded_rng(0), &SolverConfig::default()).unwrap();
        let top = tree.internal_nodes().into_iter().filter_map(|p| tree.node(p).sigma.clone()).max();
        prop_assert_eq!(top.unwrap_or_default(), r.fractional);
    }

    #[test]
    fn loads_are_a_fractional_spanning_tree(g in connected_graph(7, 10)) {
        let tree = build_hierarchy(&g, &mut seeded_rng(0), &SolverConfig::default()).unwrap();
        let loads = ideal_loads(&g, &tree).unwrap();
        prop_assert!(is_tight(&g, &tree, &loads));
        prop_assert!(in_spanning_tree_polytope(&g, &loads).unwrap());
    }

    #[test]
    fn verify_core_matches_definition(g in connected_graph(6, 6), mask in 1u64..64) {
        let s = cuthier::VertexSet::from_mask(mask & ((1 << g.n()) - 1));
        prop_assume!(!s.is_empty());
        prop_assert_eq!(verify_core(&g, g.n() as u64, &s).unwrap(), brute_dense_core(&g, &s).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn find_star_returns_a_largest_densest_set(g in connected_graph(12, 14), seed in any::<u64>()) {
        let (best, d) = brute_max_skew_density(&g).unwrap();
        let k = (d.len() as u64).next_power_of_two();
        let found = cuthier::dense_core::find_star(&g, k, &mut seeded_rng(seed), &SolverConfig::default()).unwrap();
        let s = found.candidate;
        prop_assert_eq!(s.len(), d.len());
        prop_assert_eq!(cuthier::graph::skew_density(&g, &s), best);
        prop_assert!(s == d || brute_dense_core(&g, &s).unwrap());
    }
}
