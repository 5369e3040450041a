//! How likely is a uniformly random deck to be sortable on `m` piles?
//!
//! `m` queues sort a deck iff it has at most `m - 1` descents, and `m`
//! stacks iff it has at most `m - 1` ascents. Both statistics follow the
//! Eulerian distribution, so the probability is a partial row sum of
//! Eulerian numbers divided by `n!`.
//!
//! Monte Carlo estimates are reproducible: samples are drawn in shards of
//! [`MC_SHARD_SIZE`]; shard `i` uses `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `i` (rand_chacha 0.9), and each deck is an in-place Fisher–Yates
//! shuffle of `1..=n` drawing `j` uniformly from `0..=i` for `i = n-1` down
//! to `1` with rand 0.9's `random_range`. The result does not depend on how
//! many threads run the shards.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shuffle::PileType;
use crate::sorter::{feasible, Mode};

/// Eulerian numbers `<n, k>` for `n` up to a bound.
///
/// Row 0 is `[1]` (the empty permutation); row `n ≥ 1` holds `k = 0..n`.
#[derive(Debug, Clone)]
pub struct EulerianTable {
    rows: Vec<Vec<BigUint>>,
}

// <n,k> = (k+1)<n-1,k> + (n-k)<n-1,k-1>, truncated to the first `width` entries.
fn next_row(prev: &[BigUint], n: usize, width: usize) -> Vec<BigUint> {
    (0..width.min(n))
        .map(|k| {
            let stay = prev.get(k).map_or_else(BigUint::zero, |e| e * (k + 1));
            let rise = match k.checked_sub(1).and_then(|j| prev.get(j)) {
                Some(e) => e * (n - k),
                None => BigUint::zero(),
            };
            stay + rise
        })
        .collect()
}

impl EulerianTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows = vec![vec![BigUint::one()]];
        for n in 1..=max_n {
            let row = if n == 1 {
                vec![BigUint::one()]
            } else {
                next_row(&rows[n - 1], n, n)
            };
            rows.push(row);
        }
        EulerianTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Row `n`; panics if `n` exceeds the table bound.
    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigUint> {
        self.rows
            .get(n)
            .and_then(|row| row.get(k))
            .ok_or(Error::EulerianOutOfRange { n, k })
    }
}

// The first `width` entries of Eulerian row `n`, in O(n · width) big-integer steps.
fn eulerian_prefix(n: usize, width: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for j in 2..=n {
        row = next_row(&row, j, width);
    }
    row.truncate(width.max(1));
    row
}

/// Number of permutations of length `n` with exactly `k` descents.
pub fn eulerian(n: usize, k: usize) -> Result<BigUint> {
    if k >= n.max(1) {
        return Err(Error::EulerianOutOfRange { n, k });
    }
    Ok(eulerian_prefix(n, k + 1).swap_remove(k))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Exact probability that `m` piles of one type sort a uniformly random
/// deck of `n` cards: `Σ_{k < m} <n, k> / n!`, in lowest terms.
///
/// Queues and stacks give the same value.
pub fn sortable_probability_exact(n: usize, m: usize, _pile_type: PileType) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::ZeroPileBudget { m });
    }
    if m >= n {
        return Ok(BigRational::one());
    }
    let count: BigUint = eulerian_prefix(n, m).into_iter().sum();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(factorial(n))))
}

/// Formats a rational as `p/q`, always with the denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to scaled integer division for huge numerators/denominators.
        let scale = BigInt::from(10u64).pow(17);
        let (q, _) = (r.numer() * &scale).div_rem(r.denom());
        q.to_f64().unwrap_or(f64::NAN) / 1e17
    })
}

pub const MC_SHARD_SIZE: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    /// Binomial standard error `sqrt(p(1-p)/samples)`.
    pub stderr: f64,
    pub seed: u64,
}

/// Uniform random deck of `n` labels by Fisher–Yates.
pub fn random_deck<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut deck: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        deck.swap(i, j);
    }
    deck
}

fn shard_hits(n: usize, m: usize, mode: Mode, seed: u64, shard: u64, count: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    (0..count)
        .filter(|_| {
            let deck = random_deck(n, &mut rng);
            let p = Permutation::from_sequence(&deck).expect("shuffled deck is a permutation");
            feasible(&p, m, mode)
        })
        .count() as u64
}

/// Monte Carlo estimate of the probability that `m` piles sort a random deck.
pub fn sortable_probability_mc(n: usize, m: usize, mode: Mode, samples: u64, seed: u64) -> McEstimate {
    assert!(samples >= 1, "at least one sample is required");
    let shards = samples.div_ceil(MC_SHARD_SIZE);
    let shard_len = |i: u64| MC_SHARD_SIZE.min(samples - i * MC_SHARD_SIZE);
    let run = |i: u64| shard_hits(n, m, mode, seed, i, shard_len(i));
    #[cfg(feature = "parallel")]
    let hits: u64 = {
        use rayon::prelude::*;
        (0..shards).into_par_iter().map(run).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let hits: u64 = (0..shards).map(run).sum();
    let estimate = hits as f64 / samples as f64;
    McEstimate {
        samples,
        hits,
        estimate,
        stderr: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        seed,
    }
}

/// Standard normal distribution function, `Φ(x) = erfc(-x/√2)/2`.
///
/// Uses the fdlibm-derived `erfc` from `libm`, accurate to about one ulp,
/// comfortably beyond ten significant digits.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Central-limit approximation of the probability that `m` queues (or
/// stacks) sort a random deck of `n`: `Φ((m - 1 - n/2) / sqrt(n/12))`.
///
/// This is an approximation only; it carries no continuity correction.
pub fn normal_approx_probability(n: usize, m: usize) -> f64 {
    assert!(n >= 1, "the approximation needs n >= 1");
    let n = n as f64;
    standard_normal_cdf((m as f64 - 1.0 - n / 2.0) / (n / 12.0).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub samples: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Everything known about the sortable probability for one `(n, m, mode)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityReport {
    pub n: usize,
    pub m: usize,
    pub mode: &'static str,
    /// `p/q`; absent for dealer's choice or when skipped.
    pub exact: Option<String>,
    pub float: Option<f64>,
    /// Absent for dealer's choice, which has no closed form.
    pub normal_approx: Option<f64>,
    pub mc: Option<McReport>,
}

/// Assembles a report; `exact` is computed only for homogeneous modes when
/// `with_exact` is set, Monte Carlo only when `mc` gives `(samples, seed)`.
pub fn probability_report(
    n: usize,
    m: usize,
    mode: Mode,
    with_exact: bool,
    mc: Option<(u64, u64)>,
) -> Result<ProbabilityReport> {
    if m == 0 {
        return Err(Error::ZeroPileBudget { m });
    }
    let pile_type = match mode {
        Mode::AllQueues => Some(PileType::Queue),
        Mode::AllStacks => Some(PileType::Stack),
        Mode::DealerChoice => None,
    };
    let exact = match pile_type {
        Some(t) if with_exact => Some(sortable_probability_exact(n, m, t)?),
        _ => None,
    };
    Ok(ProbabilityReport {
        n,
        m,
        mode: mode.name(),
        float: exact.as_ref().map(rational_to_f64),
        exact: exact.as_ref().map(format_rational),
        normal_approx: pile_type.filter(|_| n >= 1).map(|_| normal_approx_probability(n, m)),
        mc: mc.map(|(samples, seed)| {
            let est = sortable_probability_mc(n, m, mode, samples, seed);
            McReport {
                samples: est.samples,
                estimate: est.estimate,
                stderr: est.stderr,
                seed: est.seed,
            }
        }),
    })
}
