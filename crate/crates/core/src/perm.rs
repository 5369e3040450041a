//! Permutations in the embedding convention and the run statistics that
//! decide whether a deck can be sorted by a pile shuffle.
//!
//! A deck of `n` distinct cards labelled `1..=n` is represented by the
//! permutation `π` where `π(s)` is the (1-based) position of label `s`.
//! Under this convention `s` precedes `t` in the deck iff `π(s) < π(t)`, and
//! the sorted deck is the identity. The more familiar *sequence* convention
//! (the labels as read off the deck, top to bottom) is the inverse
//! permutation; [`Permutation::from_sequence`] converts from it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How a list of integers should be read as a deck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Labels in deck order: entry `k` is the label at position `k`.
    #[default]
    Sequence,
    /// Positions by label: entry `s` is the position of label `s`.
    Embedding,
}

/// A permutation of `1..=n` in the embedding convention.
///
/// Permutations are immutable; every operation returns a fresh value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // pos[s - 1] = π(s), 1-based values.
    pos: Vec<usize>,
}

fn validate(values: &[usize]) -> Result<()> {
    let n = values.len();
    let mut seen = vec![false; n];
    for &v in values {
        if v == 0 || v > n {
            return Err(Error::LabelOutOfRange { value: v, n });
        }
        if std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::DuplicateLabel { value: v });
        }
    }
    Ok(())
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            pos: (1..=n).collect(),
        }
    }

    /// The deck `n, n-1, ..., 1`; self-inverse, so the convention does not matter.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            pos: (1..=n).rev().collect(),
        }
    }

    /// Builds `π` directly from its values `π(1), ..., π(n)`.
    pub fn from_embedding(pos: Vec<usize>) -> Result<Self> {
        validate(&pos)?;
        Ok(Permutation { pos })
    }

    /// Builds `π` from the labels of a deck listed top to bottom, so that
    /// `π(deck[k]) = k + 1`.
    pub fn from_sequence(deck: &[usize]) -> Result<Self> {
        validate(deck)?;
        let mut pos = vec![0; deck.len()];
        for (k, &label) in deck.iter().enumerate() {
            pos[label - 1] = k + 1;
        }
        Ok(Permutation { pos })
    }

    /// Parses whitespace- or comma-separated integers under the given convention.
    pub fn parse(text: &str, convention: Convention) -> Result<Self> {
        let values = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(index, token)| {
                token.parse::<usize>().map_err(|_| Error::Parse {
                    index: index + 1,
                    token: token.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        match convention {
            Convention::Sequence => Self::from_sequence(&values),
            Convention::Embedding => Self::from_embedding(values),
        }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.pos.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    /// `π(label)`, both 1-based. Panics if `label` is not in `1..=n`.
    pub fn get(&self, label: usize) -> usize {
        self.pos[label - 1]
    }

    /// The values `π(1), ..., π(n)`.
    pub fn embedding(&self) -> &[usize] {
        &self.pos
    }

    /// The deck read top to bottom, i.e. the values of `π⁻¹`.
    pub fn sequence(&self) -> Vec<usize> {
        self.invert().pos
    }

    pub fn invert(&self) -> Self {
        let mut inv = vec![0; self.pos.len()];
        for (i, &p) in self.pos.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Permutation { pos: inv }
    }

    /// The composition `f(g)`: `s ↦ f(g(s))`.
    pub fn compose(f: &Permutation, g: &Permutation) -> Result<Self> {
        if f.len() != g.len() {
            return Err(Error::LengthMismatch {
                expected: f.len(),
                found: g.len(),
            });
        }
        Ok(Permutation {
            pos: g.pos.iter().map(|&gs| f.pos[gs - 1]).collect(),
        })
    }

    /// Number of `s` with `π(s+1) < π(s)`.
    pub fn descents(&self) -> usize {
        self.pos.windows(2).filter(|w| w[1] < w[0]).count()
    }

    /// Number of `s` with `π(s+1) > π(s)`.
    pub fn ascents(&self) -> usize {
        self.pos.windows(2).filter(|w| w[1] > w[0]).count()
    }

    /// Maximal increasing runs of `π`; zero for the empty permutation.
    pub fn ascending_runs(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.descents() + 1
        }
    }

    /// Maximal decreasing runs of `π`; zero for the empty permutation.
    pub fn descending_runs(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.ascents() + 1
        }
    }
}

/// Number of passes over `deck`, never backtracking, needed to pick up the
/// labels `1, 2, ..., n` in order.
///
/// This is a direct simulation, `O(n · passes)`. It agrees with
/// [`Permutation::ascending_runs`] of the deck's embedding.
pub fn readings(deck: &[usize]) -> Result<usize> {
    validate(deck)?;
    let n = deck.len();
    let mut next = 1;
    let mut passes = 0;
    while next <= n {
        passes += 1;
        for &label in deck {
            if label == next {
                next += 1;
            }
        }
    }
    Ok(passes)
}

impl fmt::Display for Permutation {
    /// Writes the embedding values separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pos.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the embedding convention, matching [`fmt::Display`].
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s, Convention::Embedding)
    }
}
