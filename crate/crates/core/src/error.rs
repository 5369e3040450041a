use thiserror::Error;

/// Errors raised by the pile shuffle library.
///
/// Infeasibility of a sort is not an error; see [`crate::sorter::Infeasible`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} is out of range 1..={n}")]
    LabelOutOfRange { value: usize, n: usize },

    #[error("value {value} appears more than once")]
    DuplicateLabel { value: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("label {label} is assigned to pile 0; piles are numbered from 1")]
    ZeroPile { label: usize },

    #[error("label {label} is assigned to pile {pile}, but the type schedule has only {piles} piles")]
    PileOutOfRange {
        label: usize,
        pile: usize,
        piles: usize,
    },

    #[error("round {round}: label {label} has digit {digit}, but the round has only {capacity} piles")]
    DigitOutOfRange {
        round: usize,
        label: usize,
        digit: usize,
        capacity: usize,
    },

    #[error("round {round} has no piles")]
    EmptyRound { round: usize },

    #[error("expected {expected} rounds of assignments, found {found}")]
    RoundCountMismatch { expected: usize, found: usize },

    #[error("cannot parse token {index} ({token:?}) as a label")]
    Parse { index: usize, token: String },

    #[error("invalid pile type {0:?}; expected 'Q' or 'S'")]
    InvalidPileType(char),

    #[error("Eulerian number <{n}, {k}> is undefined; need k < max(n, 1)")]
    EulerianOutOfRange { n: usize, k: usize },

    #[error("pile count {m} must be at least 1")]
    ZeroPileBudget { m: usize },

    #[error("virtual pile index overflows the machine word")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
