//! Asymptotic expansions in `1/N` of the tail sums
//! `t_N(a_1..a_j) = sum_{n_1 > ... > n_j > N} n_1^-a_1 ... n_j^-a_j`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest `r` for which `B_2r / (2r)!` is tabulated.
const MAX_R: usize = 40;

/// `B_{2r} / (2r)!` for `r = 0..=MAX_R`, from the exact recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_numbers(2 * MAX_R);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(MAX_R + 1);
        for (n, bn) in b.iter().enumerate() {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            if n % 2 == 0 {
                out.push((bn / BigRational::from_integer(fact.clone())).to_f64().unwrap());
            }
        }
        out
    })
}

/// `B_0..=B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `sum_e coeffs[e] * N^-e`.
#[derive(Debug, Clone)]
pub(crate) struct Expansion {
    coeffs: Vec<f64>,
}

impl Expansion {
    fn zero(max_exp: usize) -> Self {
        Self {
            coeffs: vec![0.0; max_exp + 1],
        }
    }

    /// Euler-Maclaurin expansion of `sum_{n > N} n^-b`, `b >= 2`:
    /// `N^(1-b)/(b-1) - N^-b/2 + sum_r B_2r/(2r)! (b)_(2r-1) N^(-b-2r+1)`.
    fn single_tail(b: usize, max_exp: usize) -> Self {
        debug_assert!(b >= 2);
        let mut e = Self::zero(max_exp);
        if b - 1 <= max_exp {
            e.coeffs[b - 1] += 1.0 / (b as f64 - 1.0);
        }
        if b <= max_exp {
            e.coeffs[b] -= 0.5;
        }
        let table = bernoulli_over_factorial();
        let mut rising = b as f64; // (b)_(2r-1)
        for r in 1..=MAX_R {
            let exp = b + 2 * r - 1;
            if exp > max_exp {
                break;
            }
            e.coeffs[exp] += table[r] * rising;
            rising *= (b + 2 * r - 1) as f64 * (b + 2 * r) as f64;
        }
        e
    }

    /// Expansion of `t_N(a_1..a_j)`; nesting uses
    /// `t_N(a_1..a_j) = sum_{m > N} m^-a_j t_m(a_1..a_{j-1})`.
    pub(crate) fn tail(parts: &[u32], max_exp: usize) -> Self {
        let mut current: Option<Expansion> = None;
        for &a in parts {
            current = Some(match current {
                None => Self::single_tail(a as usize, max_exp),
                Some(inner) => {
                    let mut out = Self::zero(max_exp);
                    for (e, &c) in inner.coeffs.iter().enumerate() {
                        if c == 0.0 {
                            continue;
                        }
                        let t = Self::single_tail(a as usize + e, max_exp);
                        for (f, &d) in t.coeffs.iter().enumerate() {
                            out.coeffs[f] += c * d;
                        }
                    }
                    out
                }
            });
        }
        current.unwrap_or_else(|| {
            let mut one = Self::zero(max_exp);
            one.coeffs[0] = 1.0;
            one
        })
    }

    /// Value at `N` and the size of the contributions from the highest
    /// `tail_terms` exponents, used as a truncation estimate.
    pub(crate) fn eval(&self, n: f64, tail_terms: usize) -> (f64, f64) {
        let cut = self.coeffs.len().saturating_sub(tail_terms);
        let mut value = 0.0;
        let mut last = 0.0;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            let term = c * n.powi(-(e as i32));
            value += term;
            if e >= cut {
                last += term.abs();
            }
        }
        (value, last)
    }
}
