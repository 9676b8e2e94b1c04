use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use popmat::gen::{generate_random_instance, Family};
use popmat::kernel::{find_kernel, is_kernel};
use popmat::lexpop::{all_b_matchings, lex_vote_agent, lex_vote_total, random_bmatching};
use popmat::matching_engine::{
    brute, max_weight_perfect_matching, min_cost_cover_matching, min_weight_perfect_matching, BipartiteWeightedGraph,
};
use popmat::matroids::check_axioms;
use popmat::popular::{extend_instance, max_popular};
use popmat::trials::random_independent;
use popmat::voting::{vote, vote_chain, vote_weak};
use popmat::ElemSet;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Partition), Just(Family::Graphic), Just(Family::Explicit)]
}

fn graph() -> impl Strategy<Value = BipartiteWeightedGraph> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(l, r)| {
            let cells = proptest::collection::vec(proptest::option::weighted(0.6, -4i64..=4), l * r);
            (Just(l), Just(r), cells)
        })
        .prop_map(|(l, r, cells)| {
            let mut g = BipartiteWeightedGraph::new(l, r);
            for (k, c) in cells.into_iter().enumerate() {
                if let Some(w) = c {
                    g.add_edge(k / r, k % r, w).unwrap();
                }
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elemset_matches_btreeset(a in proptest::collection::btree_set(0usize..130, 0..20),
                                b in proptest::collection::btree_set(0usize..130, 0..20)) {
        let x = ElemSet::from_indices(130, a.iter().copied());
        let y = ElemSet::from_indices(130, b.iter().copied());
        let set = |s: &ElemSet| s.iter().collect::<BTreeSet<_>>();
        prop_assert_eq!(set(&x.union(&y)), a.union(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(set(&x.intersection(&y)), a.intersection(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(set(&x.difference(&y)), a.difference(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(x.is_subset(&y), a.is_subset(&b));
        prop_assert_eq!(x.len(), a.len());
    }

    #[test]
    fn perfect_matchings_match_enumeration(g in graph()) {
        let weights: Vec<i64> = brute::all_perfect_matchings(&g).iter().map(|m| brute::weight_of(&g, m)).collect();
        let best = max_weight_perfect_matching(&g);
        prop_assert_eq!(best.as_ref().map(|c| c.matching.weight), weights.iter().copied().max());
        if let Some(c) = best {
            prop_assert!(c.certificate.certifies(&g, c.matching.weight));
        }
        prop_assert_eq!(min_weight_perfect_matching(&g).map(|m| m.weight), weights.iter().copied().min());
    }

    #[test]
    fn cover_matching_matches_enumeration(g in graph(), ml in proptest::collection::vec(0usize..5, 0..3),
                                          mr in proptest::collection::vec(0usize..5, 0..3)) {
        let ml: Vec<usize> = ml.into_iter().filter(|&l| l < g.left()).collect();
        let mr: Vec<usize> = mr.into_iter().filter(|&r| r < g.right()).collect();
        let best = brute::all_matchings(&g)
            .into_iter()
            .filter(|m| ml.iter().all(|l| m.iter().any(|p| p.0 == *l)) && mr.iter().all(|r| m.iter().any(|p| p.1 == *r)))
            .map(|m| brute::weight_of(&g, &m))
            .min();
        prop_assert_eq!(min_cost_cover_matching(&g, &ml, &mr).unwrap().map(|m| m.weight), best);
    }

    #[test]
    fn generated_sides_are_matroids(f in family(), size in 0usize..=9, seed in any::<u64>()) {
        let pi = generate_random_instance(f, size, seed).unwrap().to_popular().unwrap();
        prop_assert!(check_axioms(pi.side1().matroid()).unwrap());
        prop_assert!(check_axioms(pi.side2().matroid()).unwrap());
    }

    #[test]
    fn kernel_output_is_kernel(f in family(), size in 0usize..=12, seed in any::<u64>()) {
        let pi = generate_random_instance(f, size, seed).unwrap().to_popular().unwrap();
        let ki = pi.kernel_instance().unwrap();
        let (k, trace) = find_kernel(&ki).unwrap();
        prop_assert!(is_kernel(&ki, &k).is_kernel);
        prop_assert!(trace.rounds.len() <= size + 1);
    }

    #[test]
    fn solver_output_is_common_independent(f in family(), size in 0usize..=12, seed in any::<u64>()) {
        let pi = generate_random_instance(f, size, seed).unwrap().to_popular().unwrap();
        let out = max_popular(&pi).unwrap();
        prop_assert!(pi.is_common_independent(&out));
        let ext = extend_instance(&pi).unwrap();
        prop_assert_eq!(ext.ground().len(), 2 * size);
    }

    #[test]
    fn votes_are_zero_on_equal_sets_and_chain_holds(f in family(), size in 1usize..=9, seed in any::<u64>()) {
        let pi = generate_random_instance(f, size, seed).unwrap().to_popular().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = pi.side(seed as usize % 2);
        let i = random_independent(&mut rng, side.matroid());
        let j = random_independent(&mut rng, side.matroid());
        prop_assert_eq!(vote(side, &i, &i).unwrap().value, 0);
        prop_assert_eq!(vote_weak(side, &i, &i).unwrap().value, 0);
        prop_assert!(vote_chain(side, &i, &j).unwrap().holds());
    }

    #[test]
    fn lex_votes_antisymmetric(seed in 0u64..500) {
        let g = random_bmatching(seed, 3, 3, 0.5, 2).unwrap();
        let all = all_b_matchings(&g, 1 << 12).unwrap();
        let a = &all[seed as usize % all.len()];
        let b = &all[(seed as usize * 7 + 3) % all.len()];
        prop_assert_eq!(lex_vote_total(&g, a, b), -lex_vote_total(&g, b, a));
        for v in 0..g.num_agents() {
            let same = g.agent(v).prefs.iter().all(|&e| a.contains(e) == b.contains(e));
            prop_assert_eq!(lex_vote_agent(&g, a, b, v) == 0, same);
        }
    }
}
