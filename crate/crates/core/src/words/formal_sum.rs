use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BinaryWord, Composition, WordError};

/// Terms that have a canonical integer-list form, used for ordering and
/// serialization of formal sums.
pub trait CanonicalTerm: Ord + Clone {
    fn to_list(&self) -> Vec<u32>;
    fn from_list(list: Vec<u32>) -> Result<Self, WordError>;
}

impl CanonicalTerm for Composition {
    fn to_list(&self) -> Vec<u32> {
        self.parts().to_vec()
    }

    fn from_list(list: Vec<u32>) -> Result<Self, WordError> {
        Composition::try_from(list)
    }
}

impl CanonicalTerm for BinaryWord {
    fn to_list(&self) -> Vec<u32> {
        self.letters().iter().map(|&b| b as u32).collect()
    }

    fn from_list(list: Vec<u32>) -> Result<Self, WordError> {
        BinaryWord::try_from(list)
    }
}

/// A finite integer combination of terms. Zero coefficients are never
/// stored, and iteration is in the terms' `Ord` order, which for words and
/// compositions is lexicographic on the canonical list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum<T: Ord> {
    terms: BTreeMap<T, i64>,
}

impl<T: Ord> Default for FormalSum<T> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> FormalSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(term: T, coeff: i64) -> Self {
        let mut s = Self::new();
        s.add_term(term, coeff);
        s
    }

    pub fn add_term(&mut self, term: T, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(term);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_sum(&mut self, other: &FormalSum<T>, scale: i64) {
        for (t, &c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn coefficient(&self, term: &T) -> i64 {
        self.terms.get(term).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn map_terms<U: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&T) -> Result<U, E>,
    ) -> Result<FormalSum<U>, E> {
        let mut out = FormalSum::new();
        for (t, &c) in &self.terms {
            out.add_term(f(t)?, c);
        }
        Ok(out)
    }

    /// Bilinear extension of a product defined on terms.
    pub fn product_with(
        &self,
        other: &FormalSum<T>,
        mut f: impl FnMut(&T, &T) -> FormalSum<T>,
    ) -> FormalSum<T> {
        let mut out = FormalSum::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_sum(&f(a, b), ca * cb);
            }
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<(T, i64)> for FormalSum<T> {
    fn from_iter<I: IntoIterator<Item = (T, i64)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (t, c) in iter {
            s.add_term(t, c);
        }
        s
    }
}

impl<T: Ord + Clone + fmt::Display> fmt::Display for FormalSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            write!(f, "{}*{}", c.abs(), t)?;
        }
        Ok(())
    }
}

/// One `{term, coeff}` row of the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumEntry {
    pub term: Vec<u32>,
    pub coeff: i64,
}

impl<T: CanonicalTerm> FormalSum<T> {
    pub fn entries(&self) -> Vec<SumEntry> {
        let mut rows: Vec<SumEntry> = self
            .terms
            .iter()
            .map(|(t, &c)| SumEntry {
                term: t.to_list(),
                coeff: c,
            })
            .collect();
        rows.sort_by(|a, b| a.term.cmp(&b.term));
        rows
    }
}

impl<T: CanonicalTerm> Serialize for FormalSum<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(serializer)
    }
}

impl<'de, T: CanonicalTerm> Deserialize<'de> for FormalSum<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<SumEntry>::deserialize(deserializer)?;
        let mut s = FormalSum::new();
        for row in rows {
            let term = T::from_list(row.term).map_err(serde::de::Error::custom)?;
            s.add_term(term, row.coeff);
        }
        Ok(s)
    }
}
