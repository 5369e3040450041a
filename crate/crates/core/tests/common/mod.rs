//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the shuffle/sort code under test except where a
//! function says so; the simulators deal real piles and pick them up.

#![allow(dead_code)]

use pileshuffle::multiround::{apply_multiround, MultiRoundPlan, RoundAssignment, RoundTypes};
use pileshuffle::{apply_shuffle, PileAssignment, PileType, Permutation, TypeSchedule};

/// Every permutation of `1..=n`, as embeddings, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn extend(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Permutation::from_embedding(prefix.clone()).unwrap());
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every sequence of length `len` over `0..radix`, in lexicographic order.
pub fn all_tuples(len: usize, radix: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if radix == 0 && len > 0 { 0 } else { radix.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for d in t.iter_mut().rev() {
            *d = code % radix;
            code /= radix;
        }
        t
    })
}

/// Every assignment of `n` labels to piles `1..=k`.
pub fn all_assignments(n: usize, k: usize) -> impl Iterator<Item = PileAssignment> {
    all_tuples(n, k).map(|t| PileAssignment::new(t.into_iter().map(|d| d + 1).collect()).unwrap())
}

/// Every type schedule of exactly `k` piles.
pub fn all_type_strings(k: usize) -> impl Iterator<Item = Vec<PileType>> {
    all_tuples(k, 2).map(|t| {
        t.into_iter()
            .map(|b| if b == 0 { PileType::Queue } else { PileType::Stack })
            .collect()
    })
}

/// Deals the deck card by card onto physical piles, then picks them up in
/// pile order, flipping stacks. Returns the new deck as a permutation.
pub fn physical_shuffle(type_of: impl Fn(usize) -> PileType, assignment: &[usize], p: &Permutation) -> Permutation {
    let deck = p.sequence();
    let max_pile = assignment.iter().copied().max().unwrap_or(0);
    let mut piles: Vec<Vec<usize>> = vec![Vec::new(); max_pile + 1];
    for &label in &deck {
        piles[assignment[label - 1]].push(label);
    }
    let mut new_deck = Vec::with_capacity(deck.len());
    for (pile, cards) in piles.iter().enumerate().filter(|(_, c)| !c.is_empty()) {
        match type_of(pile) {
            PileType::Queue => new_deck.extend(cards.iter().copied()),
            PileType::Stack => new_deck.extend(cards.iter().rev().copied()),
        }
    }
    Permutation::from_sequence(&new_deck).unwrap()
}

/// Physical simulation of a multi-round plan given as raw 0-based digits.
pub fn physical_multiround(rounds: &[Vec<PileType>], digits: &[Vec<usize>], p: &Permutation) -> Permutation {
    rounds.iter().zip(digits).fold(p.clone(), |deck, (types, h)| {
        physical_shuffle(|pile| types[pile], h, &deck)
    })
}

fn sorts(x: &TypeSchedule, h: &PileAssignment, p: &Permutation) -> bool {
    apply_shuffle(x, h, p).unwrap().is_identity()
}

/// Fewest piles of one type that sort `p`: the smallest `k` for which some
/// assignment into `1..=k` sorts, checked with `apply_shuffle`.
pub fn brute_min_homogeneous(p: &Permutation, pile_type: PileType) -> usize {
    let x = match pile_type {
        PileType::Queue => TypeSchedule::AllQueues,
        PileType::Stack => TypeSchedule::AllStacks,
    };
    let n = p.len();
    (1..=n.max(1))
        .find(|&k| all_assignments(n, k).any(|h| sorts(&x, &h, p)))
        .unwrap()
}

/// Smallest highest pile index over all sorts of `p` on the fixed types,
/// or `None` if no assignment into the schedule sorts.
pub fn brute_min_on_types(p: &Permutation, types: &[PileType]) -> Option<usize> {
    let n = p.len();
    (1..=types.len()).find(|&k| {
        let x = TypeSchedule::Piles(types[..k].to_vec());
        all_assignments(n, k).any(|h| sorts(&x, &h, p))
    })
}

/// Fewest piles over every type schedule and every assignment.
pub fn brute_min_dealer(p: &Permutation) -> usize {
    let n = p.len();
    (1..=n.max(1))
        .find(|&k| {
            all_type_strings(k).any(|types| {
                let x = TypeSchedule::Piles(types);
                all_assignments(n, k).any(|h| sorts(&x, &h, p))
            })
        })
        .unwrap()
}

/// All `(X, H)` for the capacities; `true` if any sorts `p` when simulated
/// with `apply_multiround`.
pub fn brute_multiround_sortable(p: &Permutation, rounds: &RoundTypes) -> bool {
    let n = p.len();
    let caps = rounds.capacities();
    let radix: usize = caps.iter().product();
    all_tuples(n, radix).any(|codes| {
        let mut digits = vec![Vec::with_capacity(n); caps.len()];
        for mut code in codes {
            for (t, &m) in caps.iter().enumerate() {
                digits[t].push(code % m);
                code /= m;
            }
        }
        let plan = MultiRoundPlan::new(rounds.clone(), digits.into_iter().map(RoundAssignment::new).collect()).unwrap();
        apply_multiround(&plan, p).unwrap().is_identity()
    })
}

/// Dealer's choice over several rounds by enumerating every type schedule
/// and every assignment.
pub fn brute_dealer_multiround(p: &Permutation, capacities: &[usize]) -> bool {
    let total: usize = capacities.iter().sum();
    all_type_strings(total).any(|flat| {
        let mut k = 0;
        let rounds = capacities
            .iter()
            .map(|&m| {
                let r = flat[k..k + m].to_vec();
                k += m;
                r
            })
            .collect();
        brute_multiround_sortable(p, &RoundTypes::new(rounds).unwrap())
    })
}

/// Every capacity vector with `rounds` rounds and `1..=max_m` piles per round.
pub fn capacity_vectors(rounds: usize, max_m: usize) -> Vec<Vec<usize>> {
    all_tuples(rounds, max_m).map(|t| t.into_iter().map(|d| d + 1).collect()).collect()
}

/// Every assignment of round types for the capacities.
pub fn all_round_types(capacities: &[usize]) -> Vec<RoundTypes> {
    let total: usize = capacities.iter().sum();
    all_type_strings(total)
        .map(|flat| {
            let mut k = 0;
            let rounds = capacities
                .iter()
                .map(|&m| {
                    let r = flat[k..k + m].to_vec();
                    k += m;
                    r
                })
                .collect();
            RoundTypes::new(rounds).unwrap()
        })
        .collect()
}

/// Seeded generator for randomized sweeps outside proptest.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation<R: rand::Rng>(rng: &mut R, n: usize) -> Permutation {
    use rand::seq::SliceRandom;
    let mut deck: Vec<usize> = (1..=n).collect();
    deck.shuffle(rng);
    Permutation::from_sequence(&deck).unwrap()
}
