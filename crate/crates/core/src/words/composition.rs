use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::WordError;

/// An ordered tuple of positive integers `(k_1, ..., k_p)`.
///
/// The empty composition exists only as the unit of the products; it can be
/// built with [`Composition::empty`] but not through [`Composition::new`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, WordError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(WordError::InvalidComposition(parts));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Builds a possibly empty composition; parts must still be positive.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&k| k > 0));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.parts.first().is_some_and(|&k| k >= 2)
    }

    pub fn require_admissible(&self) -> Result<(), WordError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(WordError::NotAdmissible(self.clone()))
        }
    }

    /// Prefix `(k_1, ..., k_i)`.
    pub fn prefix(&self, i: usize) -> Composition {
        Composition {
            parts: self.parts[..i].to_vec(),
        }
    }

    /// Partial sums `k_1 + ... + k_i` for `i = 1..=p`.
    pub fn partial_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0usize, |acc, &k| {
                *acc += k as usize;
                Some(*acc)
            })
            .collect()
    }

    /// Every composition of the given weight, in lexicographic order.
    pub fn all_of_weight(weight: u32) -> Vec<Composition> {
        fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition {
                    parts: cur.clone(),
                });
                return;
            }
            for k in 1..=rest {
                cur.push(k);
                rec(rest - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if weight > 0 {
            rec(weight, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Admissible compositions of the given weight, in lexicographic order.
    pub fn admissible_of_weight(weight: u32) -> Vec<Composition> {
        Self::all_of_weight(weight)
            .into_iter()
            .filter(Composition::is_admissible)
            .collect()
    }
}

impl TryFrom<Vec<u32>> for Composition {
    type Error = WordError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        if parts.contains(&0) {
            return Err(WordError::InvalidComposition(parts));
        }
        Ok(Self { parts })
    }
}

impl From<Composition> for Vec<u32> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Parses `2,1`, `(2,1)` or `2 1`.
impl FromStr for Composition {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Result<Vec<u32>, _> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse::<u32>)
            .collect();
        match parts {
            Ok(parts) => Composition::new(parts),
            Err(_) => Err(WordError::InvalidComposition(Vec::new())),
        }
    }
}
