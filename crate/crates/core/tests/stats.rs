mod common;

use common::all_permutations;
use num_bigint::BigUint;
use num_rational::BigRational;
use pileshuffle::stats::{
    eulerian, factorial, format_rational, normal_approx_probability, probability_report, rational_to_f64,
    sortable_probability_exact, sortable_probability_mc, standard_normal_cdf, EulerianTable,
};
use pileshuffle::{feasible, Mode, PileType};

#[test]
fn eulerian_numbers_count_descents() {
    let table = EulerianTable::new(8);
    for n in 1..=8 {
        let mut counts = vec![0u64; n];
        for p in all_permutations(n) {
            counts[p.descents()] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(table.get(n, k).unwrap(), &BigUint::from(c), "<{n},{k}>");
            assert_eq!(eulerian(n, k).unwrap(), eulerian(n, n - 1 - k).unwrap());
        }
        let total: BigUint = table.row(n).iter().sum();
        assert_eq!(total, factorial(n));
    }
}

#[test]
fn exact_probability_is_the_exhaustive_fraction() {
    for n in 1..=7 {
        let perms = all_permutations(n);
        let total = perms.len();
        for m in 1..=n + 1 {
            for (t, mode) in [(PileType::Queue, Mode::AllQueues), (PileType::Stack, Mode::AllStacks)] {
                let hits = perms.iter().filter(|p| feasible(p, m, mode)).count();
                let expected = BigRational::new(hits.into(), total.into());
                assert_eq!(sortable_probability_exact(n, m, t).unwrap(), expected, "n={n} m={m}");
            }
        }
    }
}

#[test]
fn probability_falls_as_the_deck_grows() {
    let values: Vec<f64> = (8..=16)
        .map(|n| rational_to_f64(&sortable_probability_exact(n, 4, PileType::Queue).unwrap()))
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn zero_piles_is_rejected() {
    assert!(sortable_probability_exact(5, 0, PileType::Queue).is_err());
    assert!(probability_report(5, 0, Mode::AllQueues, true, None).is_err());
}

#[test]
fn rationals_format_with_a_denominator() {
    assert_eq!(format_rational(&sortable_probability_exact(3, 3, PileType::Queue).unwrap()), "1/1");
    assert_eq!(format_rational(&sortable_probability_exact(3, 1, PileType::Queue).unwrap()), "1/6");
}

#[test]
fn monte_carlo_brackets_the_exact_value() {
    for (n, m) in [(10, 3), (12, 6), (20, 10)] {
        let exact = rational_to_f64(&sortable_probability_exact(n, m, PileType::Queue).unwrap());
        for mode in [Mode::AllQueues, Mode::AllStacks] {
            let est = sortable_probability_mc(n, m, mode, 40_000, 99);
            assert!((est.estimate - exact).abs() <= 4.0 * est.stderr, "n={n} m={m}: {est:?} vs {exact}");
        }
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let a = sortable_probability_mc(15, 5, Mode::DealerChoice, 50_000, 7);
    let b = sortable_probability_mc(15, 5, Mode::DealerChoice, 50_000, 7);
    assert_eq!(a, b);
    let c = sortable_probability_mc(15, 5, Mode::DealerChoice, 50_000, 8);
    assert_ne!(a.hits, c.hits);
}

#[test]
fn dealer_choice_beats_one_type() {
    let queues = sortable_probability_mc(14, 4, Mode::AllQueues, 30_000, 3);
    let dealer = sortable_probability_mc(14, 4, Mode::DealerChoice, 30_000, 3);
    assert!(dealer.hits >= queues.hits);
}

#[test]
fn normal_cdf_reference_points() {
    assert_eq!(standard_normal_cdf(0.0), 0.5);
    assert!((standard_normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
    assert!((standard_normal_cdf(-2.0) - 0.022_750_131_948_179_2).abs() < 1e-15);
    assert!((normal_approx_probability(100, 51) - 0.5).abs() < 1e-12);
}
