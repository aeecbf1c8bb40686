//! Executable double shuffle machinery for multiple zeta values.
//!
//! The crate is split by concern:
//!
//! - [`words`]: compositions, binary words, and the shuffle and stuffle
//!   products as integer formal sums.
//! - [`cartier`]: exact sparse rational functions whose denominators are
//!   products of `1 - M` factors, the cube integrands `f_k`, and the exact
//!   decomposition of `f_k(x) f_l(x')` into one integrand per stuffle term.
//! - [`numerics`]: nested-series evaluation of MZVs with tail control, cube
//!   quadrature, and batch verification of both families of relations.
//! - [`strata`]: intersections of the divisors `1 - prod x_i = 0`, Smith
//!   normal forms, stratum posets, flag blow-up schedules and the boundary
//!   clearance computation.
//! - [`coords`]: simplicial and cubical coordinates, the iterated-integral
//!   form and its pullback, and the forgetful maps on marked points.

pub mod cartier;
pub mod coords;
pub mod numerics;
pub mod strata;
pub mod words;

pub use num_rational::BigRational;
