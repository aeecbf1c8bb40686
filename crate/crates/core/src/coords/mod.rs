//! Simplicial and cubical coordinates on the standard simplex, the iterated
//! integral form of a composition and its pullback to the cube, and the
//! forgetful maps on configurations `(0, z_1, ..., z_r, 1, inf)`.

mod config;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartier::{build_f, rational_eq, var_range, CartierError, Monomial, Polynomial, RationalFn};
use crate::words::{BinaryWord, Composition, WordError};

pub use config::{beta_map, cell_classify, delta_map, CellLabel, MarkedPointConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoordsError {
    #[error("not an interior point of the simplex: {0}")]
    Domain(String),
    #[error("cubical coordinate out of (0,1): {0}")]
    Range(String),
    #[error("configuration on a boundary stratum: {0}")]
    Boundary(String),
    #[error("expected {expected} points, got {got}")]
    Size { expected: usize, got: usize },
    #[error("configuration is not in the product of standard cells: {0}")]
    NotInCell(String),
    #[error("bad rational `{0}`")]
    Parse(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Cartier(#[from] CartierError),
}

fn in_open_unit(v: &BigRational) -> bool {
    v.is_positive() && *v < BigRational::one()
}

/// `x_1 = t_n`, `x_i = t_{n-i+1} / t_{n-i+2}` for `0 < t_1 < ... < t_n < 1`.
pub fn simplicial_to_cubical(t: &[BigRational]) -> Result<Vec<BigRational>, CoordsError> {
    let n = t.len();
    let increasing = t.windows(2).all(|w| w[0] < w[1]);
    if !increasing || !t.iter().all(in_open_unit) {
        let shown: Vec<String> = t.iter().map(ToString::to_string).collect();
        return Err(CoordsError::Domain(shown.join(", ")));
    }
    Ok((1..=n)
        .map(|i| {
            if i == 1 {
                t[n - 1].clone()
            } else {
                &t[n - i] / &t[n - i + 1]
            }
        })
        .collect())
}

/// `t_{n-i+1} = x_1 ... x_i` for `x` in the open cube.
pub fn cubical_to_simplicial(x: &[BigRational]) -> Result<Vec<BigRational>, CoordsError> {
    if let Some(bad) = x.iter().find(|v| !in_open_unit(v)) {
        return Err(CoordsError::Range(bad.to_string()));
    }
    let mut t = vec![BigRational::zero(); x.len()];
    let mut prod = BigRational::one();
    for (i, xi) in x.iter().enumerate() {
        prod *= xi;
        t[x.len() - 1 - i] = prod.clone();
    }
    Ok(t)
}

/// `dt_var / (t_var - epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormFactor {
    pub var: usize,
    pub epsilon: u8,
}

/// `sign * dt_1/(t_1 - e_1) ^ ... ^ dt_n/(t_n - e_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicForm {
    pub sign: i8,
    pub factors: Vec<FormFactor>,
}

impl SymbolicForm {
    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    /// Evaluates the coefficient of `dt_1 ... dt_n` at an interior point.
    pub fn coefficient(&self, t: &[BigRational]) -> BigRational {
        self.factors.iter().fold(BigRational::from_integer(self.sign.into()), |acc, f| {
            acc / (&t[f.var - 1] - BigRational::from_integer(f.epsilon.into()))
        })
    }
}

impl std::fmt::Display for SymbolicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x.epsilon {
                0 => format!("dt{0}/t{0}", x.var),
                _ => format!("dt{0}/(t{0}-1)", x.var),
            })
            .collect();
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{}", body.join(" ^ "))
    }
}

/// Factor `i` is `dt_i/(t_i - e_i)` where `e_i` is read from the binary
/// word of `k` backwards; the sign is `(-1)^depth`.
pub fn kontsevich_form(k: &Composition) -> Result<SymbolicForm, CoordsError> {
    k.require_admissible()?;
    let word = BinaryWord::from_composition(k);
    Ok(SymbolicForm {
        sign: if k.depth().is_multiple_of(2) { 1 } else { -1 },
        factors: (1..=word.len())
            .map(|i| FormFactor {
                var: i,
                epsilon: word.epsilon(i),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackReport {
    pub composition: Composition,
    /// Global sign relating the pulled-back form to `f_k dx_1 ... dx_n`.
    pub sign: i8,
    pub integrand: RationalFn,
    pub matches: bool,
}

pub const MAX_PULLBACK_WEIGHT: u32 = 8;

/// Substitutes `t_i = x_1 ... x_{n-i+1}` into the form, multiplies by the
/// Jacobian and compares with `f_k` up to a sign, which is reported.
pub fn pullback_check(k: &Composition) -> Result<PullbackReport, CoordsError> {
    let form = kontsevich_form(k)?;
    let n = form.weight();
    if k.weight() > MAX_PULLBACK_WEIGHT {
        return Err(CoordsError::Size {
            expected: MAX_PULLBACK_WEIGHT as usize,
            got: n,
        });
    }
    let x = var_range(0, n);
    let t = |i: usize| Monomial::product_of(&x[..n - i + 1]);

    // dt_i contributes dt_i/dx_{n-i+1} = x_1 ... x_{n-i}; reordering
    // dx_n ^ ... ^ dx_1 costs the sign of the reversal.
    let mut sign: i8 = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
    sign *= form.sign;
    let mut num = Monomial::one();
    for i in 1..=n {
        num = num.mul(&Monomial::product_of(&x[..n - i]));
    }
    let mut num = Polynomial::monomial(num, BigRational::one());
    let mut den = Vec::new();
    for f in &form.factors {
        let ti = t(f.var);
        if f.epsilon == 0 {
            num = num
                .div_monomial(&ti)
                .ok_or_else(|| CoordsError::Domain(format!("t{} does not cancel", f.var)))?;
        } else {
            // 1/(t - 1) = -1/(1 - t)
            sign = -sign;
            den.push(ti);
        }
    }
    let integrand = RationalFn::new(num, den)?;
    let matches = rational_eq(&integrand, &build_f(k, &x)?);
    Ok(PullbackReport {
        composition: k.clone(),
        sign,
        integrand,
        matches,
    })
}
