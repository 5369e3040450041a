//! Minimal single-round sorting shuffles.
//!
//! Every sort on a type schedule `x` satisfies `h(s+1) ≥ h(s) + [π(s+1) ≺ π(s)]`
//! where `≺` is the order of pile `h(s)`. Taking every inequality with
//! equality from `h(1) = 1` gives the pointwise-smallest sort, so one scan of
//! the deck yields a sort on the fewest piles, or proves none exists.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shuffle::{format_types, parse_types, PileAssignment, PileType, TypeSchedule};

/// A single-round sort: pile types and the deal.
///
/// Plans built by this module are minimal: piles are numbered `1..=piles_used`
/// with no gaps and `types` has exactly `piles_used` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortPlan {
    pub types: Vec<PileType>,
    pub assignment: PileAssignment,
    pub piles_used: usize,
}

impl SortPlan {
    pub fn empty() -> Self {
        SortPlan {
            types: Vec::new(),
            assignment: PileAssignment::single_pile(0),
            piles_used: 0,
        }
    }

    pub fn schedule(&self) -> TypeSchedule {
        TypeSchedule::Piles(self.types.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct SortPlanDoc {
    #[serde(default)]
    piles_used: Option<usize>,
    types: String,
    assignment: Vec<usize>,
}

impl Serialize for SortPlan {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SortPlanDoc {
            piles_used: Some(self.piles_used),
            types: format_types(&self.types),
            assignment: self.assignment.piles().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SortPlan {
    /// Accepts any plan whose types cover its assignment; `piles_used`
    /// defaults to the number of distinct piles.
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = SortPlanDoc::deserialize(deserializer)?;
        let types = parse_types(&doc.types).map_err(D::Error::custom)?;
        let assignment = PileAssignment::new(doc.assignment).map_err(D::Error::custom)?;
        if assignment.max_pile() > types.len() {
            return Err(D::Error::custom(Error::PileOutOfRange {
                label: assignment.piles().iter().position(|&h| h > types.len()).unwrap_or(0) + 1,
                pile: assignment.max_pile(),
                piles: types.len(),
            }));
        }
        let piles_used = doc.piles_used.unwrap_or_else(|| assignment.distinct_piles());
        Ok(SortPlan {
            types,
            assignment,
            piles_used,
        })
    }
}

/// No sort exists on the given piles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Infeasible {
    /// First label the minimal recurrence could not place.
    pub label: usize,
    pub piles_available: usize,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "label {} needs pile {}, beyond the {} available",
            self.label,
            self.piles_available + 1,
            self.piles_available
        )
    }
}

/// Which pile types the dealer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    AllQueues,
    AllStacks,
    /// The dealer picks each pile's type during the deal.
    DealerChoice,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::AllQueues => "queues",
            Mode::AllStacks => "stacks",
            Mode::DealerChoice => "dealer",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "queues" | "queue" | "q" => Ok(Mode::AllQueues),
            "stacks" | "stack" | "s" => Ok(Mode::AllStacks),
            "dealer" | "dealer-choice" => Ok(Mode::DealerChoice),
            _ => Err(format!("unknown mode {s:?}; expected queues, stacks or dealer")),
        }
    }
}

// Cumulative count of steps where `breaks(π(s), π(s+1))`, starting at pile 1.
fn cumulative_runs(p: &Permutation, breaks: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut piles = Vec::with_capacity(p.len());
    let mut pile = 1;
    for (i, &pos) in p.embedding().iter().enumerate() {
        if i > 0 && breaks(p.embedding()[i - 1], pos) {
            pile += 1;
        }
        piles.push(pile);
    }
    piles
}

fn homogeneous_plan(piles: Vec<usize>, pile_type: PileType) -> SortPlan {
    let piles_used = piles.last().copied().unwrap_or(0);
    SortPlan {
        types: vec![pile_type; piles_used],
        assignment: PileAssignment::new(piles).expect("piles start at 1"),
        piles_used,
    }
}

/// The cumulative ascending runs function: a new queue at every descent.
pub fn minimal_queue_sort(p: &Permutation) -> SortPlan {
    homogeneous_plan(cumulative_runs(p, |a, b| b < a), PileType::Queue)
}

/// The cumulative descending runs function: a new stack at every ascent.
pub fn minimal_stack_sort(p: &Permutation) -> SortPlan {
    homogeneous_plan(cumulative_runs(p, |a, b| b > a), PileType::Stack)
}

/// The pointwise-minimal sort of `p` on the fixed schedule `x`.
///
/// Any other sort `h` on `x` with `h(1) ≥ 1` has `h(s) ≥ h*(s)` for every
/// label, so if this fails no sort on `x` exists.
pub fn minimal_sort_on_types(p: &Permutation, x: &TypeSchedule) -> std::result::Result<SortPlan, Infeasible> {
    let n = p.len();
    if n == 0 {
        return Ok(SortPlan::empty());
    }
    let available = x.pile_count().unwrap_or(usize::MAX);
    let overflow = |label| Infeasible {
        label,
        piles_available: available,
    };
    let mut current = x.type_of(1).ok_or(overflow(1))?;
    let mut piles = Vec::with_capacity(n);
    let mut pile = 1;
    piles.push(pile);
    for s in 1..n {
        if current.precedes(p.get(s + 1), p.get(s)) {
            pile += 1;
            current = x.type_of(pile).ok_or(overflow(s + 1))?;
        }
        piles.push(pile);
    }
    Ok(SortPlan {
        types: x.materialize(pile),
        assignment: PileAssignment::new(piles).expect("piles start at 1"),
        piles_used: pile,
    })
}

/// Minimal sort when the dealer chooses pile types.
///
/// Each time a label opens a new pile, the pile gets the type that lets the
/// next label join it: a queue if the next label is dealt later, a stack if
/// earlier. A pile opened by the last label is a queue.
pub fn dealer_choice_minimal_sort(p: &Permutation) -> SortPlan {
    let n = p.len();
    if n == 0 {
        return SortPlan::empty();
    }
    let choose = |s: usize| {
        if s < n && p.get(s + 1) < p.get(s) {
            PileType::Stack
        } else {
            PileType::Queue
        }
    };
    let mut types = vec![choose(1)];
    let mut piles = Vec::with_capacity(n);
    piles.push(1);
    for s in 1..n {
        let pile = types.len();
        if types[pile - 1].precedes(p.get(s + 1), p.get(s)) {
            types.push(choose(s + 1));
        }
        piles.push(types.len());
    }
    SortPlan {
        piles_used: types.len(),
        types,
        assignment: PileAssignment::new(piles).expect("piles start at 1"),
    }
}

/// The minimal plan for `mode`; homogeneous modes never fail.
pub fn minimal_sort(p: &Permutation, mode: Mode) -> SortPlan {
    match mode {
        Mode::AllQueues => minimal_queue_sort(p),
        Mode::AllStacks => minimal_stack_sort(p),
        Mode::DealerChoice => dealer_choice_minimal_sort(p),
    }
}

/// Whether `p` can be sorted in one round on at most `budget` piles.
pub fn feasible(p: &Permutation, budget: usize, mode: Mode) -> bool {
    match mode {
        Mode::AllQueues => p.ascending_runs() <= budget,
        Mode::AllStacks => p.descending_runs() <= budget,
        Mode::DealerChoice => dealer_choice_minimal_sort(p).piles_used <= budget,
    }
}

/// [`minimal_sort_on_types`] for a schedule given as a `QS...` string.
pub fn minimal_sort_on_type_string(p: &Permutation, types: &str) -> Result<std::result::Result<SortPlan, Infeasible>> {
    Ok(minimal_sort_on_types(p, &TypeSchedule::Piles(parse_types(types)?)))
}
