//! Multi-round shuffles and their single-round "virtual pile" equivalents.
//!
//! Pile numbers in this module are 0-based digits: round `t` deals each
//! label onto a pile `h_t(s) ∈ 0..m_t`. Reading the per-round digits as a
//! mixed-radix number, with round 1 least significant, gives a single-round
//! shuffle on `m_1 · ... · m_T` virtual piles with the same effect. When
//! stacks are involved a digit is mirrored (`d ↦ m - 1 - d`) whenever the
//! label still meets an odd number of stacks in later rounds, and the type
//! of every virtual pile follows from the round types alone.
//!
//! Conversions to and from the 1-based single-round types go through
//! [`to_single_round`] and [`from_single_round`] only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shuffle::{apply_shuffle, format_types, parse_types, PileAssignment, PileType, TypeSchedule};
use crate::sorter::{minimal_sort_on_types, Infeasible};

/// Pile types of every round, in round order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoundTypes(Vec<Vec<PileType>>);

impl RoundTypes {
    pub fn new(rounds: Vec<Vec<PileType>>) -> Result<Self> {
        if let Some(t) = rounds.iter().position(Vec::is_empty) {
            return Err(Error::EmptyRound { round: t + 1 });
        }
        Ok(RoundTypes(rounds))
    }

    /// Rounds with `capacities[t]` piles each, all of one type.
    pub fn homogeneous(pile_type: PileType, capacities: &[usize]) -> Result<Self> {
        RoundTypes::new(capacities.iter().map(|&m| vec![pile_type; m]).collect())
    }

    /// Parses rounds written as `QS,SQQ` (commas, slashes or spaces between rounds).
    pub fn parse(s: &str) -> Result<Self> {
        let rounds = s
            .split(|c: char| c == ',' || c == '/' || c.is_whitespace())
            .filter(|r| !r.is_empty())
            .map(parse_types)
            .collect::<Result<Vec<_>>>()?;
        RoundTypes::new(rounds)
    }

    pub fn rounds(&self) -> &[Vec<PileType>] {
        &self.0
    }

    pub fn round_count(&self) -> usize {
        self.0.len()
    }

    pub fn capacities(&self) -> Vec<usize> {
        self.0.iter().map(Vec::len).collect()
    }

    /// `Π m_t`, or `None` if it does not fit in a `usize`.
    pub fn capacity_product(&self) -> Option<usize> {
        self.0.iter().try_fold(1usize, |acc, r| acc.checked_mul(r.len()))
    }

    /// `min(Π m_t, cap)`, computed without overflow.
    pub fn saturating_product(&self, cap: usize) -> usize {
        let mut acc = 1usize;
        for r in &self.0 {
            acc = acc.saturating_mul(r.len());
            if acc >= cap {
                return cap;
            }
        }
        acc
    }

    /// The single pile type used everywhere, if the rounds are homogeneous.
    /// Zero rounds count as homogeneous queues.
    pub fn uniform_type(&self) -> Option<PileType> {
        let mut all = self.0.iter().flatten();
        let first = all.next().copied().unwrap_or(PileType::Queue);
        all.all(|&t| t == first).then_some(first)
    }
}

impl std::fmt::Display for RoundTypes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rounds: Vec<String> = self.0.iter().map(|r| format_types(r)).collect();
        f.write_str(&rounds.join(","))
    }
}

/// One round's deal as 0-based pile digits: `digits[s - 1] = h_t(s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoundAssignment(Vec<usize>);

impl RoundAssignment {
    pub fn new(digits: Vec<usize>) -> Self {
        RoundAssignment(digits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Digit of the 1-based `label`.
    pub fn get(&self, label: usize) -> usize {
        self.0[label - 1]
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }
}

/// 0-based round digits to a 1-based single-round assignment.
pub fn to_single_round(assignment: &RoundAssignment) -> PileAssignment {
    PileAssignment::new(assignment.0.iter().map(|&d| d + 1).collect()).expect("shifted digits are positive")
}

/// 1-based single-round assignment to 0-based round digits.
pub fn from_single_round(assignment: &PileAssignment) -> RoundAssignment {
    RoundAssignment(assignment.piles().iter().map(|&h| h - 1).collect())
}

/// A multi-round shuffle: types and deal for each round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRoundPlan {
    round_types: RoundTypes,
    assignments: Vec<RoundAssignment>,
}

impl MultiRoundPlan {
    pub fn new(round_types: RoundTypes, assignments: Vec<RoundAssignment>) -> Result<Self> {
        if assignments.len() != round_types.round_count() {
            return Err(Error::RoundCountMismatch {
                expected: round_types.round_count(),
                found: assignments.len(),
            });
        }
        let n = assignments.first().map_or(0, RoundAssignment::len);
        for (t, (h, types)) in assignments.iter().zip(round_types.rounds()).enumerate() {
            if h.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: h.len(),
                });
            }
            if let Some(i) = h.0.iter().position(|&d| d >= types.len()) {
                return Err(Error::DigitOutOfRange {
                    round: t + 1,
                    label: i + 1,
                    digit: h.0[i],
                    capacity: types.len(),
                });
            }
        }
        Ok(MultiRoundPlan {
            round_types,
            assignments,
        })
    }

    pub fn round_types(&self) -> &RoundTypes {
        &self.round_types
    }

    pub fn assignments(&self) -> &[RoundAssignment] {
        &self.assignments
    }

    /// Each round as a 1-based single-round shuffle.
    pub fn single_rounds(&self) -> impl Iterator<Item = (TypeSchedule, PileAssignment)> + '_ {
        self.round_types
            .rounds()
            .iter()
            .zip(&self.assignments)
            .map(|(x, h)| (TypeSchedule::Piles(x.clone()), to_single_round(h)))
    }
}

#[derive(Serialize, Deserialize)]
struct RoundDoc {
    types: String,
    assignment: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MultiRoundPlanDoc {
    capacities: Vec<usize>,
    rounds: Vec<RoundDoc>,
}

impl Serialize for MultiRoundPlan {
    /// Assignments are written 1-based.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MultiRoundPlanDoc {
            capacities: self.round_types.capacities(),
            rounds: self
                .single_rounds()
                .map(|(x, h)| RoundDoc {
                    types: x.to_string(),
                    assignment: h.into(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiRoundPlan {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = MultiRoundPlanDoc::deserialize(deserializer)?;
        let mut types = Vec::with_capacity(doc.rounds.len());
        let mut assignments = Vec::with_capacity(doc.rounds.len());
        for round in doc.rounds {
            types.push(parse_types(&round.types).map_err(D::Error::custom)?);
            let h = PileAssignment::new(round.assignment).map_err(D::Error::custom)?;
            assignments.push(from_single_round(&h));
        }
        let round_types = RoundTypes::new(types).map_err(D::Error::custom)?;
        if round_types.capacities() != doc.capacities {
            return Err(D::Error::custom(format!(
                "capacities {:?} do not match the round types {}",
                doc.capacities, round_types
            )));
        }
        MultiRoundPlan::new(round_types, assignments).map_err(D::Error::custom)
    }
}

/// Runs every round in order; zero rounds leave the deck unchanged.
pub fn apply_multiround(plan: &MultiRoundPlan, p: &Permutation) -> Result<Permutation> {
    plan.single_rounds()
        .try_fold(p.clone(), |deck, (x, h)| apply_shuffle(&x, &h, &deck))
}

/// Mixed-radix embedding of all-queue rounds: `ĥ = h_1 + m_1·(h_2 + m_2·(...))`.
pub fn embed_queue_rounds(assignments: &[RoundAssignment], capacities: &[usize]) -> Result<RoundAssignment> {
    if assignments.len() != capacities.len() {
        return Err(Error::RoundCountMismatch {
            expected: capacities.len(),
            found: assignments.len(),
        });
    }
    let n = assignments.first().map_or(0, RoundAssignment::len);
    let mut virtual_digits = vec![0usize; n];
    for (t, (h, &m)) in assignments.iter().zip(capacities).enumerate().rev() {
        if h.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: h.len(),
            });
        }
        for (label, (acc, &d)) in virtual_digits.iter_mut().zip(&h.0).enumerate() {
            if d >= m {
                return Err(Error::DigitOutOfRange {
                    round: t + 1,
                    label: label + 1,
                    digit: d,
                    capacity: m,
                });
            }
            *acc = acc.checked_mul(m).and_then(|v| v.checked_add(d)).ok_or(Error::Overflow)?;
        }
    }
    Ok(RoundAssignment(virtual_digits))
}

// Mixed-radix digits of `value`, round 1 first; the last digit takes the remainder.
fn split_digits(mut value: usize, capacities: &[usize]) -> Option<Vec<usize>> {
    let mut digits = Vec::with_capacity(capacities.len());
    for (t, &m) in capacities.iter().enumerate() {
        if t + 1 == capacities.len() {
            digits.push(value);
            value = 0;
        } else {
            digits.push(value % m);
            value /= m;
        }
    }
    let fits = match capacities.last() {
        Some(&m) => digits[capacities.len() - 1] < m,
        None => value == 0,
    };
    fits.then_some(digits)
}

/// Inverse of [`embed_queue_rounds`]: recovers the per-round digits.
pub fn extract_digits(virtual_assignment: &RoundAssignment, capacities: &[usize]) -> Result<Vec<RoundAssignment>> {
    let t_count = capacities.len();
    if let Some(t) = capacities.iter().position(|&m| m == 0) {
        return Err(Error::EmptyRound { round: t + 1 });
    }
    let mut rounds = vec![Vec::with_capacity(virtual_assignment.len()); t_count];
    for (label, &v) in virtual_assignment.0.iter().enumerate() {
        let digits = split_digits(v, capacities).ok_or_else(|| Error::DigitOutOfRange {
            round: t_count.max(1),
            label: label + 1,
            digit: v,
            capacity: capacities.iter().fold(1usize, |acc, &m| acc.saturating_mul(m)),
        })?;
        for (round, d) in rounds.iter_mut().zip(digits) {
            round.push(d);
        }
    }
    Ok(rounds.into_iter().map(RoundAssignment).collect())
}

// Mirror a digit when the label still meets an odd number of stacks.
fn reflect(digit: usize, capacity: usize, parity: usize) -> usize {
    if parity == 1 {
        capacity - 1 - digit
    } else {
        digit
    }
}

// Type of virtual pile `index`, reporting every real pile `(round, pile)` it
// depends on to `visit`. Requires `index < Π m_t`.
fn virtual_pile_type(rt: &RoundTypes, index: usize, mut visit: impl FnMut(usize, usize)) -> PileType {
    let rounds = rt.rounds();
    let capacities = rt.capacities();
    let digits = split_digits(index, &capacities).expect("virtual pile index within Π m_t");
    let mut parity = 0;
    for t in (0..rounds.len()).rev() {
        let pile = reflect(digits[t], capacities[t], parity);
        visit(t, pile);
        parity ^= rounds[t][pile].indicator();
    }
    PileType::from_indicator(parity)
}

/// Types of the first `limit` virtual piles, from the round types alone.
///
/// `limit` is clamped to `Π m_t`. Callers sorting `n` labels pass
/// `min(n, Π m_t)`, since no sort needs more than `n` piles.
pub fn virtual_type_schedule(rt: &RoundTypes, limit: usize) -> Vec<PileType> {
    let limit = rt.saturating_product(limit);
    (0..limit).map(|i| virtual_pile_type(rt, i, |_, _| {})).collect()
}

/// A multi-round shuffle folded into one round on virtual piles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualShuffle {
    /// `Π m_t`, or `None` on overflow.
    pub pile_count: Option<usize>,
    /// Types of virtual piles `0..=max(ĥ)`.
    pub types: Vec<PileType>,
    /// `ĥ_1`, 0-based.
    pub assignment: RoundAssignment,
}

impl VirtualShuffle {
    pub fn to_single_round(&self) -> (TypeSchedule, PileAssignment) {
        (TypeSchedule::Piles(self.types.clone()), to_single_round(&self.assignment))
    }
}

/// Folds a heterogeneous multi-round shuffle into a single round.
///
/// Walking the rounds backwards, each digit is mirrored by the parity of
/// stacks still ahead of the label, then packed as a mixed-radix number.
pub fn embed_hetero_rounds(plan: &MultiRoundPlan) -> Result<VirtualShuffle> {
    let rt = plan.round_types();
    let capacities = rt.capacities();
    let n = plan.assignments().first().map_or(0, RoundAssignment::len);
    let mut virtual_digits = Vec::with_capacity(n);
    for label in 1..=n {
        let mut acc = 0usize;
        let mut parity = 0;
        for t in (0..capacities.len()).rev() {
            let pile = plan.assignments()[t].get(label);
            let ordered = reflect(pile, capacities[t], parity);
            acc = acc
                .checked_mul(capacities[t])
                .and_then(|v| v.checked_add(ordered))
                .ok_or(Error::Overflow)?;
            parity ^= rt.rounds()[t][pile].indicator();
        }
        virtual_digits.push(acc);
    }
    let used = virtual_digits.iter().max().map_or(0, |&v| v + 1);
    Ok(VirtualShuffle {
        pile_count: rt.capacity_product(),
        types: virtual_type_schedule(rt, used),
        assignment: RoundAssignment(virtual_digits),
    })
}

/// Inverse of [`embed_hetero_rounds`]: splits virtual piles back into
/// per-round piles, undoing the mirroring from the last round down.
pub fn unembed_hetero(virtual_assignment: &RoundAssignment, rt: &RoundTypes) -> Result<MultiRoundPlan> {
    let capacities = rt.capacities();
    let t_count = capacities.len();
    let ordered = extract_digits(virtual_assignment, &capacities)?;
    let mut rounds = vec![Vec::with_capacity(virtual_assignment.len()); t_count];
    for label in 1..=virtual_assignment.len() {
        let mut parity = 0;
        for t in (0..t_count).rev() {
            let pile = reflect(ordered[t].get(label), capacities[t], parity);
            rounds[t].push(pile);
            parity ^= rt.rounds()[t][pile].indicator();
        }
    }
    MultiRoundPlan::new(rt.clone(), rounds.into_iter().map(RoundAssignment).collect())
}

/// Sort on the fewest virtual piles for fixed round types, or the first
/// label that overflows the `Π m_t` virtual piles.
pub fn minimal_multiround_sort(p: &Permutation, rt: &RoundTypes) -> std::result::Result<MultiRoundPlan, Infeasible> {
    let n = p.len();
    let limit = rt.saturating_product(n);
    let types = virtual_type_schedule(rt, limit);
    let plan = minimal_sort_on_types(p, &TypeSchedule::Piles(types))?;
    let virtual_assignment = from_single_round(&plan.assignment);
    Ok(unembed_hetero(&virtual_assignment, rt).expect("minimal sort stays within the virtual piles"))
}

/// Whether the fixed round types can sort `p`, using the closed-form run
/// bounds for homogeneous rounds.
pub fn feasible_fixed(p: &Permutation, rt: &RoundTypes) -> bool {
    let capacity = rt.saturating_product(p.len().saturating_add(1));
    match rt.uniform_type() {
        Some(PileType::Queue) => p.ascending_runs() <= capacity,
        Some(PileType::Stack) if rt.round_count().is_multiple_of(2) => p.ascending_runs() <= capacity,
        Some(PileType::Stack) => p.descending_runs() <= capacity,
        None => feasible_fixed_general(p, rt),
    }
}

/// [`feasible_fixed`] through the virtual-pile recurrence only.
pub fn feasible_fixed_general(p: &Permutation, rt: &RoundTypes) -> bool {
    minimal_multiround_sort(p, rt).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest number of type schedules to try; `None` for no limit.
    pub budget: Option<u64>,
    /// Skip schedules that share every real pile type an earlier failure depended on.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Some(1 << 24),
            prune: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFailure {
    /// Every type schedule was tried.
    Infeasible { schedules_tried: u64 },
    BudgetExceeded { budget: u64 },
}

impl std::fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchFailure::Infeasible { schedules_tried } => {
                write!(f, "no type schedule sorts the deck ({schedules_tried} tried)")
            }
            SearchFailure::BudgetExceeded { budget } => write!(f, "search budget of {budget} schedules exhausted"),
        }
    }
}

// Last position, in enumeration order, of a real pile that the first
// `limit` virtual pile types depend on.
fn last_dependency(rt: &RoundTypes, limit: usize, offsets: &[usize]) -> usize {
    let mut last = 0;
    for i in 0..limit {
        virtual_pile_type(rt, i, |t, pile| last = last.max(offsets[t] + pile));
    }
    last
}

/// Dealer's choice over several rounds with the given pile capacities.
///
/// Tries every type schedule in lexicographic order (round 1 first, pile 1
/// first, queue before stack) and returns the minimal plan on the first one
/// that sorts `p`.
pub fn dealer_search(
    p: &Permutation,
    capacities: &[usize],
    options: &SearchOptions,
) -> std::result::Result<MultiRoundPlan, SearchFailure> {
    assert!(
        capacities.iter().all(|&m| m > 0),
        "every round needs at least one pile"
    );
    let offsets: Vec<usize> = capacities
        .iter()
        .scan(0, |acc, &m| {
            let start = *acc;
            *acc += m;
            Some(start)
        })
        .collect();
    let total: usize = capacities.iter().sum();
    let limit = {
        let probe = RoundTypes::homogeneous(PileType::Queue, capacities).expect("capacities are positive");
        probe.saturating_product(p.len())
    };
    // bits[k] is the type of the k-th pile in enumeration order; true = stack.
    let mut bits = vec![false; total];
    let mut tried = 0u64;
    loop {
        if let Some(budget) = options.budget {
            if tried >= budget {
                return Err(SearchFailure::BudgetExceeded { budget });
            }
        }
        tried += 1;
        let mut k = 0;
        let rounds = capacities
            .iter()
            .map(|&m| {
                let round = bits[k..k + m]
                    .iter()
                    .map(|&b| PileType::from_indicator(usize::from(b)))
                    .collect();
                k += m;
                round
            })
            .collect();
        let rt = RoundTypes::new(rounds).expect("capacities are positive");
        if let Ok(plan) = minimal_multiround_sort(p, &rt) {
            return Ok(plan);
        }
        // Advance to the next schedule; with pruning, jump past every
        // schedule that agrees on the piles this failure depended on.
        let mut pos = if options.prune {
            last_dependency(&rt, limit, &offsets)
        } else {
            total.wrapping_sub(1)
        };
        for b in bits.iter_mut().skip(pos.wrapping_add(1)) {
            *b = false;
        }
        loop {
            if pos >= total {
                return Err(SearchFailure::Infeasible { schedules_tried: tried });
            }
            if bits[pos] {
                bits[pos] = false;
                pos = pos.wrapping_sub(1);
            } else {
                bits[pos] = true;
                break;
            }
        }
    }
}
