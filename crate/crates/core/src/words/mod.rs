//! Compositions, binary words and the two quadratic products.
//!
//! A composition `(k_1, ..., k_p)` indexes the series
//! `sum_{n_1 > ... > n_p > 0} 1 / (n_1^k_1 ... n_p^k_p)`, which converges
//! exactly when `k_1 >= 2` (the composition is then *admissible*). Its
//! binary word lists, for each part in order, `k_i - 1` zeros followed by a
//! single one.
//!
//! The stuffle product recurses on the *last* parts of both compositions,
//! so the first parts of admissible inputs are never consumed except by the
//! final merge, and every output term stays admissible.

mod composition;
mod formal_sum;
mod products;
mod relation;
mod word;

pub use composition::Composition;
pub use formal_sum::{CanonicalTerm, FormalSum, SumEntry};
pub use products::{
    delannoy, shuffle, shuffle_by_enumeration, stuffle, stuffle_terms, ShufflePermutation,
    StuffleEntry, StuffleTerm,
};
pub use relation::{shuffle_relation, stuffle_relation, ProductKind, Relation};
pub use word::BinaryWord;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid composition {0:?}: parts must be positive and the list non-empty")]
    InvalidComposition(Vec<u32>),
    #[error("invalid letter {0} in binary word (expected 0 or 1)")]
    InvalidLetter(u32),
    #[error("word {0} cannot be converted to a composition: it must be non-empty and end with 1")]
    NotConvertible(String),
    #[error("composition {0} is not admissible (first part must be at least 2)")]
    NotAdmissible(Composition),
    #[error("stuffle term provenance does not arise from the given compositions")]
    ForeignStuffleTerm,
}
