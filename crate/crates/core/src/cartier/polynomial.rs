use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Var};

/// Sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), BigRational::one())
    }

    /// `1 - m`.
    pub fn one_minus(m: &Monomial) -> Self {
        let mut p = Self::one();
        p.add_term(m.clone(), -BigRational::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The monomial and coefficient when the polynomial has a single term.
    pub fn as_single_term(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (t, a) in &self.terms {
            terms.insert(m.quotient_of(t)?, a.clone());
        }
        Some(Polynomial { terms })
    }

    pub fn add_assign_scaled(&mut self, other: &Polynomial, c: &BigRational) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            out.add_term(m.rename(&f), a.clone());
        }
        out
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.support()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn eval(&self, value: &impl Fn(Var) -> Option<BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, a) in &self.terms {
            acc += m.eval(value)? * a;
        }
        Some(acc)
    }

    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, a)) in self.terms.iter().enumerate() {
            let neg = a.is_negative();
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let abs = a.abs();
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&m.display_with(name));
            } else {
                out.push_str(&format!("{}*{}", abs, m.display_with(name)));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|v| v.name()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &BigRational::one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, a1) in &self.terms {
            for (m2, a2) in &rhs.terms {
                out.add_term(m1.mul(m2), a1 * a2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..3, 0..4), -4i64..5),
            0..5,
        )
        .prop_map(|terms| {
            let mut p = Polynomial::zero();
            for (vars, c) in terms {
                let m = Monomial::product_of(&vars.into_iter().map(Var).collect::<Vec<_>>());
                p.add_term(m, q(c, 1));
            }
            p
        })
    }

    #[test]
    fn one_minus_and_division() {
        let m = Monomial::product_of(&[Var(0), Var(1)]);
        let p = Polynomial::one_minus(&m);
        assert_eq!(p.to_string(), "1 - x1*x2");
        let shifted = p.mul_monomial(&Monomial::var(Var(0)));
        assert_eq!(shifted.div_monomial(&Monomial::var(Var(0))).unwrap(), p);
        assert!(p.div_monomial(&Monomial::var(Var(0))).is_none());
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_under_evaluation(
            a in poly_strategy(), b in poly_strategy(), c in poly_strategy(),
            pt in proptest::collection::vec((1i64..50, 51i64..97), 3),
        ) {
            let point = |v: Var| Some(q(pt[v.0 as usize].0, pt[v.0 as usize].1));
            let ev = |p: &Polynomial| p.eval(&point).unwrap();
            prop_assert_eq!(&(&a * &b), &(&b * &a));
            prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
            prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
            prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        }
    }
}
