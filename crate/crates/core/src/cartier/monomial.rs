use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A polynomial variable. Displayed as `x{id+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    pub fn name(self) -> String {
        format!("x{}", self.0 + 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// `vars[0] ... vars[len-1]` for consecutive ids starting at `first`.
pub fn var_range(first: u32, len: usize) -> Vec<Var> {
    (first..first + len as u32).map(Var).collect()
}

/// A monic monomial, stored as `(variable, exponent)` pairs sorted by
/// variable with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self {
            powers: vec![(v, 1)],
        }
    }

    /// Product of the given variables; repeated variables raise the power.
    pub fn product_of(vars: &[Var]) -> Self {
        vars.iter()
            .fold(Monomial::one(), |acc, &v| acc.mul(&Monomial::var(v)))
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Self {
            powers: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.powers
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = Var> + '_ {
        self.powers.iter().map(|&(v, _)| v)
    }

    /// Every exponent is 0 or 1.
    pub fn is_square_free(&self) -> bool {
        self.powers.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_disjoint(&self, other: &Monomial) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            match self.powers[i].0.cmp(&other.powers[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() || j < other.powers.len() {
            if j == other.powers.len()
                || (i < self.powers.len() && self.powers[i].0 < other.powers[j].0)
            {
                out.push(self.powers[i]);
                i += 1;
            } else if i == self.powers.len() || other.powers[j].0 < self.powers[i].0 {
                out.push(other.powers[j]);
                j += 1;
            } else {
                out.push((self.powers[i].0, self.powers[i].1 + other.powers[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial { powers: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.powers.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial::from_powers(other.powers.iter().map(|&(v, e)| (v, e - self.exponent(v)))))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            powers: if k == 0 {
                Vec::new()
            } else {
                self.powers.iter().map(|&(v, e)| (v, e * k)).collect()
            },
        }
    }

    /// Renames variables; the map must be injective on the support.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_powers(self.powers.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn eval(&self, value: impl Fn(Var) -> Option<BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::one();
        for &(v, e) in &self.powers {
            let x = value(v)?;
            acc *= num_traits::pow(x, e as usize);
        }
        Some(acc)
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.powers
            .iter()
            .map(|&(v, e)| value(v).powi(e as i32))
            .product()
    }

    /// Display with a custom variable naming.
    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.powers.is_empty() {
            return "1".to_string();
        }
        self.powers
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    name(v)
                } else {
                    format!("{}^{}", name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|v| v.name()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_merges_exponents() {
        let a = Monomial::product_of(&[Var(0), Var(2)]);
        let b = Monomial::product_of(&[Var(1), Var(2)]);
        let ab = a.mul(&b);
        assert_eq!(ab.powers(), &[(Var(0), 1), (Var(1), 1), (Var(2), 2)]);
        assert!(!ab.is_square_free());
        assert!(a.divides(&ab));
        assert_eq!(a.quotient_of(&ab).unwrap(), Monomial::product_of(&[Var(1), Var(2)]));
        assert!(!a.is_disjoint(&b));
        assert!(Monomial::var(Var(0)).is_disjoint(&Monomial::var(Var(1))));
    }

    #[test]
    fn unit_monomial() {
        assert!(Monomial::one().is_one());
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(Monomial::product_of(&[Var(0), Var(1)]).to_string(), "x1*x2");
    }
}
