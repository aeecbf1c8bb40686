//! Floating-point evaluation of multiple zeta values and numerical checks
//! of the shuffle and stuffle relations.
//!
//! Every value carries an error bound. Plain truncated series use a
//! rigorous majorant for the neglected tail; [`mzv`] sums a short head
//! exactly in floating point and replaces the sums over large indices by
//! their Euler-Maclaurin expansions, which reaches about `1e-14`.

mod quadrature;
mod series;
mod tail;
mod verify;

pub use quadrature::{gauss_legendre, mzv_cube_quadrature, MAX_QUADRATURE_WEIGHT};
pub use series::{mzv, mzv_series, Method, MzvValue, MIN_TOLERANCE};
pub use tail::bernoulli_numbers;
pub use verify::{
    admissible_pairs, double_shuffle_relations, verify_double_shuffle_up_to, verify_relation,
    verify_relations, RelationReport, ZetaTable, EVAL_TOL,
};

use thiserror::Error;

use crate::words::Composition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("zeta{0} diverges: the first part must be at least 2")]
    Divergent(Composition),
    #[error("cutoff {cutoff} is smaller than the depth {depth}")]
    Cutoff { cutoff: usize, depth: usize },
    #[error("tolerance {0} is below the supported floor of 1e-10")]
    Tolerance(f64),
    #[error("tolerance {tol} not reached within the iteration budget (best bound {achieved})")]
    Budget { tol: f64, achieved: f64 },
    #[error("quadrature of weight {weight} exceeds the cost limit {max}")]
    Cost { weight: u32, max: u32 },
    #[error("quadrature order {0} must be even and at least 2")]
    Order(usize),
    #[error("maximum weight {0} outside the supported range 4..=10")]
    MaxWeight(u32),
}
