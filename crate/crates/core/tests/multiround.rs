mod common;

use common::{
    all_permutations, all_round_types, all_tuples, brute_dealer_multiround, brute_multiround_sortable,
    capacity_vectors, physical_multiround, random_permutation, rng,
};
use pileshuffle::multiround::{
    apply_multiround, dealer_search, embed_hetero_rounds, embed_queue_rounds, extract_digits, feasible_fixed,
    feasible_fixed_general, minimal_multiround_sort, unembed_hetero, virtual_type_schedule, MultiRoundPlan,
    RoundAssignment, RoundTypes, SearchFailure, SearchOptions,
};
use pileshuffle::{apply_shuffle, PileType, Permutation};
use proptest::prelude::*;
use rand::Rng;

// Every plan for the round types on `n` labels.
fn all_plans(rt: &RoundTypes, n: usize) -> impl Iterator<Item = MultiRoundPlan> + '_ {
    let caps = rt.capacities();
    let radix: usize = caps.iter().product();
    all_tuples(n, radix).map(move |codes| {
        let mut digits = vec![Vec::with_capacity(n); caps.len()];
        for mut code in codes {
            for (t, &m) in caps.iter().enumerate() {
                digits[t].push(code % m);
                code /= m;
            }
        }
        MultiRoundPlan::new(rt.clone(), digits.into_iter().map(RoundAssignment::new).collect()).unwrap()
    })
}

#[test]
fn embedding_round_trips_exhaustively() {
    for rounds in 1..=3 {
        for caps in capacity_vectors(rounds, if rounds < 3 { 3 } else { 2 }) {
            let product: usize = caps.iter().product();
            let n = match product {
                1..=6 => 5,
                7..=12 => 4,
                _ => 3,
            };
            for rt in all_round_types(&caps) {
                for plan in all_plans(&rt, n) {
                    let q = embed_queue_rounds(plan.assignments(), &caps).unwrap();
                    assert_eq!(extract_digits(&q, &caps).unwrap(), plan.assignments());
                    let v = embed_hetero_rounds(&plan).unwrap();
                    assert_eq!(unembed_hetero(&v.assignment, &rt).unwrap(), plan);
                    assert!(v.assignment.digits().iter().all(|&d| d < product));
                }
            }
        }
    }
}

#[test]
fn virtual_shuffle_simulates_every_round() {
    for rounds in 1..=3 {
        for caps in capacity_vectors(rounds, 2) {
            for rt in all_round_types(&caps) {
                for n in 0..=(6 - rounds).min(4) {
                    let perms = all_permutations(n);
                    for plan in all_plans(&rt, n) {
                        let (x, h) = embed_hetero_rounds(&plan).unwrap().to_single_round();
                        let digits: Vec<Vec<usize>> = plan.assignments().iter().map(|a| a.digits().to_vec()).collect();
                        for p in &perms {
                            let direct = apply_multiround(&plan, p).unwrap();
                            assert_eq!(apply_shuffle(&x, &h, p).unwrap(), direct, "{rt}");
                            assert_eq!(physical_multiround(rt.rounds(), &digits, p), direct, "{rt}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn virtual_pile_types_match_two_card_decks() {
    // Deal two cards together through every route of real piles: they come
    // out reversed exactly when the virtual pile is a stack. Cards on
    // different routes come out in virtual pile order.
    let deck = Permutation::identity(2);
    for rounds in 1..=3 {
        for caps in capacity_vectors(rounds, 3) {
            let product: usize = caps.iter().product();
            for rt in all_round_types(&caps) {
                let types = virtual_type_schedule(&rt, product);
                assert_eq!(types.len(), product);
                for plan in all_plans(&rt, 2) {
                    let digits: Vec<Vec<usize>> = plan.assignments().iter().map(|a| a.digits().to_vec()).collect();
                    let out = physical_multiround(rt.rounds(), &digits, &deck);
                    let v = embed_hetero_rounds(&plan).unwrap().assignment;
                    let (a, b) = (v.get(1), v.get(2));
                    if a == b {
                        let expected = if out.is_identity() { PileType::Queue } else { PileType::Stack };
                        assert_eq!(types[a], expected, "{rt} pile {a}");
                    } else {
                        assert_eq!(out.is_identity(), a < b, "{rt} piles {a} {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn closed_forms_agree_with_the_general_recurrence() {
    for n in 0..=7 {
        let perms = all_permutations(n);
        for rounds in 1..=3 {
            for caps in capacity_vectors(rounds, 3) {
                for t in [PileType::Queue, PileType::Stack] {
                    let rt = RoundTypes::homogeneous(t, &caps).unwrap();
                    for p in &perms {
                        assert_eq!(feasible_fixed(p, &rt), feasible_fixed_general(p, &rt), "{p} on {rt}");
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_round_feasibility_matches_brute_force() {
    for rounds in 1..=2 {
        for caps in capacity_vectors(rounds, 2) {
            for rt in all_round_types(&caps) {
                for n in 1..=4 {
                    for p in all_permutations(n) {
                        let brute = brute_multiround_sortable(&p, &rt);
                        assert_eq!(feasible_fixed(&p, &rt), brute, "{p} on {rt}");
                        match minimal_multiround_sort(&p, &rt) {
                            Ok(plan) => assert!(apply_multiround(&plan, &p).unwrap().is_identity()),
                            Err(_) => assert!(!brute),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn two_queue_rounds_of_two_sort_four_runs() {
    let rt = RoundTypes::homogeneous(PileType::Queue, &[2, 2]).unwrap();
    for n in 1..=6 {
        for p in all_permutations(n) {
            let brute = brute_multiround_sortable(&p, &rt);
            assert_eq!(brute, p.ascending_runs() <= 4, "{p}");
            assert_eq!(feasible_fixed(&p, &rt), brute);
        }
    }
}

#[test]
fn random_heterogeneous_sorts_end_to_end() {
    let mut rng = rng(31);
    for _ in 0..300 {
        let p = random_permutation(&mut rng, 9);
        let rounds = rng.random_range(1..=3);
        let rt = RoundTypes::new(
            (0..rounds)
                .map(|_| {
                    (0..rng.random_range(1..=3))
                        .map(|_| PileType::from_indicator(rng.random_range(0..=1)))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        match minimal_multiround_sort(&p, &rt) {
            Ok(plan) => {
                assert!(apply_multiround(&plan, &p).unwrap().is_identity());
                let text = serde_json::to_string(&plan).unwrap();
                assert_eq!(serde_json::from_str::<MultiRoundPlan>(&text).unwrap(), plan);
            }
            Err(e) => {
                assert!(!feasible_fixed(&p, &rt));
                assert_eq!(e.piles_available, rt.saturating_product(9));
            }
        }
    }
}

#[test]
fn dealer_search_matches_brute_force() {
    let unpruned = SearchOptions { budget: None, prune: false };
    let pruned = SearchOptions { budget: None, prune: true };
    for rounds in 1..=2 {
        for caps in capacity_vectors(rounds, 2) {
            for n in 1..=4 {
                for p in all_permutations(n) {
                    let a = dealer_search(&p, &caps, &unpruned);
                    let b = dealer_search(&p, &caps, &pruned);
                    assert_eq!(a.is_ok(), brute_dealer_multiround(&p, &caps), "{p} {caps:?}");
                    match (a, b) {
                        (Ok(x), Ok(y)) => {
                            assert_eq!(x, y);
                            assert!(apply_multiround(&x, &p).unwrap().is_identity());
                        }
                        (Err(SearchFailure::Infeasible { .. }), Err(SearchFailure::Infeasible { .. })) => {}
                        other => panic!("{p} {caps:?}: {other:?}"),
                    }
                }
            }
        }
    }
}

#[test]
fn pruning_never_changes_the_answer() {
    let mut rng = rng(32);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let p = random_permutation(&mut rng, n);
        let caps: Vec<usize> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(1..=3)).collect();
        let a = dealer_search(&p, &caps, &SearchOptions { budget: None, prune: false });
        let b = dealer_search(&p, &caps, &SearchOptions { budget: None, prune: true });
        match (a, b) {
            (Ok(x), Ok(y)) => assert_eq!(x, y),
            (Err(SearchFailure::Infeasible { schedules_tried: full }), Err(SearchFailure::Infeasible { schedules_tried: fewer })) => {
                assert!(fewer <= full)
            }
            other => panic!("{p} {caps:?}: {other:?}"),
        }
    }
}

#[test]
fn search_budget_is_reported_separately() {
    let p = Permutation::from_embedding(vec![4, 3, 2, 1, 8, 7, 6, 5]).unwrap();
    let tight = SearchOptions { budget: Some(1), prune: false };
    assert_eq!(
        dealer_search(&p, &[2, 1], &tight),
        Err(SearchFailure::BudgetExceeded { budget: 1 })
    );
    assert!(dealer_search(&p, &[2, 1], &SearchOptions::default()).is_ok());
}

proptest! {
    #[test]
    fn hetero_embedding_round_trips(
        caps in proptest::collection::vec(1usize..=4, 1..=4),
        seed in any::<u64>(),
        n in 0usize..=12,
    ) {
        let mut rng = rng(seed);
        let rt = RoundTypes::new(
            caps.iter().map(|&m| (0..m).map(|_| PileType::from_indicator(rng.random_range(0..=1))).collect()).collect(),
        ).unwrap();
        let assignments = caps.iter().map(|&m| RoundAssignment::new((0..n).map(|_| rng.random_range(0..m)).collect())).collect();
        let plan = MultiRoundPlan::new(rt.clone(), assignments).unwrap();
        let v = embed_hetero_rounds(&plan).unwrap();
        prop_assert_eq!(unembed_hetero(&v.assignment, &rt).unwrap(), plan.clone());
        let p = random_permutation(&mut rng, n);
        let (x, h) = v.to_single_round();
        prop_assert_eq!(apply_shuffle(&x, &h, &p).unwrap(), apply_multiround(&plan, &p).unwrap());
    }
}
