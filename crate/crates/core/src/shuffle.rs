//! Single-round pile shuffles on queues, stacks, and mixtures of the two.
//!
//! A shuffle deals every card onto a pile chosen by its label, then picks
//! the piles up in increasing pile number. A queue keeps its cards in deal
//! order, a stack reverses them. The resulting deck `σ` orders the labels
//! lexicographically by `(h(s), ±π(s))`, with the sign negative for labels
//! dealt onto a stack.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PileType {
    Queue,
    Stack,
}

impl PileType {
    /// The stack indicator: 0 for a queue, 1 for a stack.
    pub fn indicator(self) -> usize {
        match self {
            PileType::Queue => 0,
            PileType::Stack => 1,
        }
    }

    pub fn from_indicator(bit: usize) -> Self {
        if bit & 1 == 0 {
            PileType::Queue
        } else {
            PileType::Stack
        }
    }

    pub fn letter(self) -> char {
        match self {
            PileType::Queue => 'Q',
            PileType::Stack => 'S',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'Q' => Ok(PileType::Queue),
            'S' => Ok(PileType::Stack),
            _ => Err(Error::InvalidPileType(c)),
        }
    }

    /// Whether a card at deal position `a` comes out ahead of one at `b`
    /// when both sit in a pile of this type.
    pub fn precedes(self, a: usize, b: usize) -> bool {
        match self {
            PileType::Queue => a < b,
            PileType::Stack => a > b,
        }
    }
}

/// Types of the piles in collection order.
///
/// The homogeneous variants stand for an unbounded supply of piles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeSchedule {
    AllQueues,
    AllStacks,
    Piles(Vec<PileType>),
}

impl TypeSchedule {
    /// Type of the 1-based `pile`, or `None` past the end of a finite schedule.
    pub fn type_of(&self, pile: usize) -> Option<PileType> {
        match self {
            TypeSchedule::AllQueues => Some(PileType::Queue),
            TypeSchedule::AllStacks => Some(PileType::Stack),
            TypeSchedule::Piles(types) => pile.checked_sub(1).and_then(|i| types.get(i).copied()),
        }
    }

    /// Number of piles available; `None` when unbounded.
    pub fn pile_count(&self) -> Option<usize> {
        match self {
            TypeSchedule::Piles(types) => Some(types.len()),
            _ => None,
        }
    }

    /// The first `count` types as a finite schedule.
    pub fn materialize(&self, count: usize) -> Vec<PileType> {
        match self {
            TypeSchedule::AllQueues => vec![PileType::Queue; count],
            TypeSchedule::AllStacks => vec![PileType::Stack; count],
            TypeSchedule::Piles(types) => types.iter().copied().take(count).collect(),
        }
    }

    /// Strict shelf shuffle on `m` shelves: `Q^m`.
    pub fn shelf_strict(m: usize) -> Self {
        TypeSchedule::Piles(vec![PileType::Queue; m])
    }

    /// Standard shelf shuffle on `m` shelves: `(SQ)^m`.
    pub fn shelf_standard(m: usize) -> Self {
        TypeSchedule::Piles([PileType::Stack, PileType::Queue].repeat(m))
    }

    /// Lazy shelf shuffle on `m` shelves: `Q(SQ)^m`.
    pub fn shelf_lazy(m: usize) -> Self {
        let mut types = vec![PileType::Queue];
        types.extend([PileType::Stack, PileType::Queue].repeat(m));
        TypeSchedule::Piles(types)
    }
}

/// Parses a `QS...` string into pile types.
pub fn parse_types(s: &str) -> Result<Vec<PileType>> {
    s.trim().chars().map(PileType::from_letter).collect()
}

/// Formats pile types as a `QS...` string.
pub fn format_types(types: &[PileType]) -> String {
    types.iter().map(|t| t.letter()).collect()
}

impl FromStr for TypeSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(TypeSchedule::Piles(parse_types(s)?))
    }
}

impl fmt::Display for TypeSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeSchedule::AllQueues => f.write_str("Q*"),
            TypeSchedule::AllStacks => f.write_str("S*"),
            TypeSchedule::Piles(types) => f.write_str(&format_types(types)),
        }
    }
}

/// The deal of one round: `piles[s - 1]` is the 1-based pile of label `s`.
///
/// Pile numbers need not be contiguous; unused numbers are empty piles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PileAssignment(Vec<usize>);

impl PileAssignment {
    pub fn new(piles: Vec<usize>) -> Result<Self> {
        if let Some(i) = piles.iter().position(|&h| h == 0) {
            return Err(Error::ZeroPile { label: i + 1 });
        }
        Ok(PileAssignment(piles))
    }

    /// Every label on pile 1.
    pub fn single_pile(n: usize) -> Self {
        PileAssignment(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pile of `label`, both 1-based.
    pub fn get(&self, label: usize) -> usize {
        self.0[label - 1]
    }

    pub fn piles(&self) -> &[usize] {
        &self.0
    }

    pub fn max_pile(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Number of non-empty piles.
    pub fn distinct_piles(&self) -> usize {
        let mut piles = self.0.clone();
        piles.sort_unstable();
        piles.dedup();
        piles.len()
    }

    /// The relabelled assignment `s ↦ h(r(s))`.
    pub fn compose(&self, r: &Permutation) -> Result<Self> {
        if self.len() != r.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: r.len(),
            });
        }
        Ok(PileAssignment(r.embedding().iter().map(|&rs| self.0[rs - 1]).collect()))
    }
}

impl TryFrom<Vec<usize>> for PileAssignment {
    type Error = Error;

    fn try_from(piles: Vec<usize>) -> Result<Self> {
        PileAssignment::new(piles)
    }
}

impl From<PileAssignment> for Vec<usize> {
    fn from(h: PileAssignment) -> Self {
        h.0
    }
}

fn validate(types: &TypeSchedule, assignment: &PileAssignment, p: &Permutation) -> Result<()> {
    if assignment.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: assignment.len(),
        });
    }
    if let Some(piles) = types.pile_count() {
        if let Some(i) = assignment.piles().iter().position(|&h| h > piles) {
            return Err(Error::PileOutOfRange {
                label: i + 1,
                pile: assignment.piles()[i],
                piles,
            });
        }
    }
    Ok(())
}

/// Runs one pile shuffle of deck `p` and returns the new deck.
///
/// Labels are ranked by `(h(s), π(s))`, with `π(s)` reversed on stacks.
pub fn apply_shuffle(
    types: &TypeSchedule,
    assignment: &PileAssignment,
    p: &Permutation,
) -> Result<Permutation> {
    validate(types, assignment, p)?;
    let n = p.len();
    let key = |s: usize| {
        let pile = assignment.get(s);
        let pos = p.get(s);
        match types.type_of(pile) {
            Some(PileType::Stack) => (pile, n + 1 - pos),
            _ => (pile, pos),
        }
    };
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.sort_unstable_by_key(|&s| key(s));
    let mut sigma = vec![0; n];
    for (rank, &s) in labels.iter().enumerate() {
        sigma[s - 1] = rank + 1;
    }
    Permutation::from_embedding(sigma)
}

/// Whether `(types, assignment)` sorts `p`, by a single scan of the
/// adjacent-label condition `h(s+1) ≥ h(s) + [π(s+1) ≺ π(s)]`, where `≺`
/// is the order of the pile holding `s`.
pub fn check_sort(types: &TypeSchedule, assignment: &PileAssignment, p: &Permutation) -> Result<bool> {
    validate(types, assignment, p)?;
    Ok((1..p.len()).all(|s| {
        let here = assignment.get(s);
        let next = assignment.get(s + 1);
        let order = types.type_of(here).unwrap_or(PileType::Queue);
        let step = usize::from(order.precedes(p.get(s + 1), p.get(s)));
        next >= here + step
    }))
}

/// Relabels a shuffle by a third permutation `r`.
///
/// Returns `(h∘r, π∘r, σ∘r)` where `σ` is the result of shuffling `p`; the
/// relabelled assignment shuffles `π∘r` into `σ∘r`.
pub fn shift_shuffle(
    types: &TypeSchedule,
    assignment: &PileAssignment,
    p: &Permutation,
    r: &Permutation,
) -> Result<(PileAssignment, Permutation, Permutation)> {
    let sigma = apply_shuffle(types, assignment, p)?;
    Ok((
        assignment.compose(r)?,
        Permutation::compose(p, r)?,
        Permutation::compose(&sigma, r)?,
    ))
}

/// Turns "shuffle `p` into `target`" into a sorting problem.
///
/// Returns `p∘target⁻¹`. If `(x, h')` sorts the returned permutation, then
/// `(x, h'∘target)` shuffles `p` into `target`.
pub fn reduce_to_sort(p: &Permutation, target: &Permutation) -> Result<Permutation> {
    Permutation::compose(p, &target.invert())
}

/// One row of a [`ShuffleTableau`]: the cards of a single pile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauRow {
    pub pile: usize,
    pub pile_type: PileType,
    /// `(deal position, label)` pairs in deal order.
    pub cells: Vec<(usize, usize)>,
}

impl TableauRow {
    /// Labels in the order they are picked up.
    pub fn collected(&self) -> Vec<usize> {
        let labels = self.cells.iter().map(|&(_, s)| s);
        match self.pile_type {
            PileType::Queue => labels.collect(),
            PileType::Stack => labels.rev().collect(),
        }
    }
}

/// Grid layout of a deal: label `s` sits in row `h(s)`, column `π(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleTableau {
    pub n: usize,
    pub rows: Vec<TableauRow>,
}

impl ShuffleTableau {
    /// The new deck, top to bottom: rows in order, queue rows left to right,
    /// stack rows right to left.
    pub fn collect(&self) -> Vec<usize> {
        self.rows.iter().flat_map(TableauRow::collected).collect()
    }

    /// Fixed-width text grid with a header of deal positions and one row
    /// per pile, labelled `P1..Pm` followed by the pile type.
    pub fn render_text(&self) -> String {
        let width = self.n.max(1).to_string().len();
        let label_width = format!("P{}", self.rows.len().max(1)).len();
        let mut out = String::new();
        let mut line = " ".repeat(label_width + 2);
        for pos in 1..=self.n {
            line.push_str(&format!(" {pos:>width$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![None; self.n];
            for &(pos, s) in &row.cells {
                cells[pos - 1] = Some(s);
            }
            let mut line = format!("{:<label_width$} {}", format!("P{}", row.pile), row.pile_type.letter());
            for cell in cells {
                match cell {
                    Some(s) => line.push_str(&format!(" {s:>width$}")),
                    None => line.push_str(&" ".repeat(width + 1)),
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Lays out the deal of `p` by `assignment` as a tableau, one row for every
/// pile number from 1 to the largest one used.
pub fn render_tableau(
    p: &Permutation,
    assignment: &PileAssignment,
    types: &TypeSchedule,
) -> Result<ShuffleTableau> {
    validate(types, assignment, p)?;
    let mut rows: Vec<TableauRow> = (1..=assignment.max_pile())
        .map(|pile| TableauRow {
            pile,
            pile_type: types.type_of(pile).unwrap_or(PileType::Queue),
            cells: Vec::new(),
        })
        .collect();
    for (i, s) in p.sequence().into_iter().enumerate() {
        rows[assignment.get(s) - 1].cells.push((i + 1, s));
    }
    Ok(ShuffleTableau { n: p.len(), rows })
}

#[derive(Serialize, Deserialize)]
struct TableauRowDoc {
    pile: usize,
    #[serde(rename = "type")]
    pile_type: String,
    labels: Vec<usize>,
    positions: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableauDoc {
    n: usize,
    rows: Vec<TableauRowDoc>,
}

impl Serialize for ShuffleTableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TableauDoc {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|row| TableauRowDoc {
                    pile: row.pile,
                    pile_type: row.pile_type.letter().to_string(),
                    labels: row.cells.iter().map(|c| c.1).collect(),
                    positions: row.cells.iter().map(|c| c.0).collect(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}
