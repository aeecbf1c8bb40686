use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Composition, WordError};

/// A word over the alphabet `{0, 1}`, stored in reading order.
///
/// The word of `(k_1, ..., k_p)` is the block of `k_1 - 1` zeros and a one,
/// then the block for `k_2`, and so on. In the iterated-integral form the
/// letters are indexed from the right: letter `i` of a weight-`n` word is
/// the `epsilon_{n+1-i}` attached to the variable `t_{n+1-i}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct BinaryWord {
    letters: Vec<u8>,
}

impl BinaryWord {
    pub fn new(letters: Vec<u8>) -> Result<Self, WordError> {
        if let Some(&bad) = letters.iter().find(|&&b| b > 1) {
            return Err(WordError::InvalidLetter(bad as u32));
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self {
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word of a composition; admissibility is not required.
    pub fn from_composition(c: &Composition) -> Self {
        let mut letters = Vec::with_capacity(c.weight() as usize);
        for &k in c.parts() {
            letters.extend(std::iter::repeat_n(0u8, k as usize - 1));
            letters.push(1);
        }
        Self { letters }
    }

    pub fn to_composition(&self) -> Result<Composition, WordError> {
        if self.letters.last() != Some(&1) {
            return Err(WordError::NotConvertible(self.to_string()));
        }
        let mut parts = Vec::new();
        let mut run = 1u32;
        for &b in &self.letters {
            if b == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        Composition::new(parts)
    }

    /// The `epsilon` value attached to variable `t_i`, `1 <= i <= len`.
    pub fn epsilon(&self, i: usize) -> u8 {
        self.letters[self.letters.len() - i]
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Self {
        Self { letters }
    }
}

impl TryFrom<Vec<u32>> for BinaryWord {
    type Error = WordError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        let letters = v
            .into_iter()
            .map(|b| u8::try_from(b).map_err(|_| WordError::InvalidLetter(b)))
            .collect::<Result<Vec<_>, _>>()?;
        BinaryWord::new(letters)
    }
}

impl From<BinaryWord> for Vec<u32> {
    fn from(w: BinaryWord) -> Self {
        w.letters.into_iter().map(u32::from).collect()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    fn word(l: &[u8]) -> BinaryWord {
        BinaryWord::new(l.to_vec()).unwrap()
    }

    #[test]
    fn composition_to_word_examples() {
        assert_eq!(BinaryWord::from_composition(&comp(&[2])), word(&[0, 1]));
        assert_eq!(BinaryWord::from_composition(&comp(&[2, 1])), word(&[0, 1, 1]));
        assert_eq!(
            BinaryWord::from_composition(&comp(&[3, 2])),
            word(&[0, 0, 1, 0, 1])
        );
    }

    #[test]
    fn word_to_composition_examples() {
        assert_eq!(word(&[0, 1]).to_composition().unwrap(), comp(&[2]));
        assert_eq!(word(&[0, 0, 1, 1]).to_composition().unwrap(), comp(&[3, 1]));
        assert!(matches!(
            word(&[0, 1, 0]).to_composition(),
            Err(WordError::NotConvertible(_))
        ));
        assert!(BinaryWord::empty().to_composition().is_err());
    }

    #[test]
    fn epsilon_reads_from_the_right() {
        let w = word(&[0, 1]);
        assert_eq!(w.epsilon(1), 1);
        assert_eq!(w.epsilon(2), 0);
    }

    #[test]
    fn invalid_letter() {
        assert_eq!(BinaryWord::new(vec![0, 2]), Err(WordError::InvalidLetter(2)));
    }

    #[test]
    fn round_trip_up_to_weight_12() {
        for w in 1..=12 {
            for c in Composition::all_of_weight(w) {
                let back = BinaryWord::from_composition(&c).to_composition().unwrap();
                assert_eq!(back, c);
            }
        }
    }
}
