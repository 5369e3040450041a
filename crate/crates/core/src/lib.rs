//! Pile shuffle as a sorting device.
//!
//! A deck is dealt onto piles that behave as queues (cards flipped over) or
//! stacks (cards kept face down), and the piles are picked up in order. This
//! crate decides which decks a shuffle can sort, builds sorts on the fewest
//! piles, folds multi-round shuffles into single-round shuffles on "virtual
//! piles", and computes how likely a random deck is to be sortable.

pub mod error;
pub mod multiround;
pub mod perm;
pub mod shuffle;
pub mod sorter;
pub mod stats;

pub use error::{Error, Result};
pub use perm::{readings, Convention, Permutation};
pub use shuffle::{
    apply_shuffle, check_sort, reduce_to_sort, render_tableau, shift_shuffle, PileAssignment, PileType,
    ShuffleTableau, TypeSchedule,
};
pub use sorter::{
    dealer_choice_minimal_sort, feasible, minimal_queue_sort, minimal_sort, minimal_sort_on_types,
    minimal_stack_sort, Infeasible, Mode, SortPlan,
};
