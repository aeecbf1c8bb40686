//! Exact rational functions whose denominators are products of factors
//! `1 - M` with `M` a square-free monomial, the cube integrands `f_k`, and
//! the splitting of `f_k(x) f_l(x')` into one integrand per stuffle term.
//!
//! In a product `f_k(x) f_l(x')` with `n = weight(k)`, the right-hand
//! variables `x'_j` are the ids `n + j - 1`; [`VariableArrangement`] keeps
//! the `x` / `x'` labelling for display.

mod decompose;
mod monomial;
mod polynomial;
mod rational;

pub use decompose::{
    arrangement_for, build_f, cartier_decompose, expand_by_key_identity, key_identity,
    CartierDecomposition, CartierSummand, KeyIdentity, VariableArrangement,
};
pub use monomial::{var_range, Monomial, Var};
pub use polynomial::Polynomial;
pub use rational::{
    agree_at_fixed_points, eval_rational, parse_rational, rational_eq, rational_to_f64, RationalFn,
};

use thiserror::Error;

use crate::words::WordError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartierError {
    #[error("unsupported representation: {0}")]
    Representation(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("no value given for variable {0}")]
    MissingVariable(String),
    #[error("expected {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("monomials {0} and {1} share a variable")]
    OverlappingSupports(String, String),
    #[error("stuffle term {0} does not arise from the given compositions")]
    ForeignTerm(String),
    #[error(transparent)]
    Word(#[from] WordError),
}
