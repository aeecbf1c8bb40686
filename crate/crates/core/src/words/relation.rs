use std::fmt;

use serde::{Deserialize, Serialize};

use super::{shuffle, stuffle, BinaryWord, Composition, FormalSum, WordError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Shuffle,
    Stuffle,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Shuffle => "shuffle",
            ProductKind::Stuffle => "stuffle",
        })
    }
}

/// `zeta(left) * zeta(right) = sum coeff * zeta(term)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub product: ProductKind,
    pub left: Composition,
    pub right: Composition,
    pub rhs: FormalSum<Composition>,
}

impl Relation {
    /// Ordering key used for deterministic output.
    pub fn key(&self) -> (ProductKind, u32, &Composition, &Composition) {
        (
            self.product,
            self.left.weight() + self.right.weight(),
            &self.left,
            &self.right,
        )
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: z{} z{} = {}",
            self.product, self.left, self.right, self.rhs
        )
    }
}

pub fn shuffle_relation(k: &Composition, l: &Composition) -> Result<Relation, WordError> {
    k.require_admissible()?;
    l.require_admissible()?;
    let words = shuffle(&BinaryWord::from_composition(k), &BinaryWord::from_composition(l));
    let rhs = words.map_terms(BinaryWord::to_composition)?;
    Ok(Relation {
        product: ProductKind::Shuffle,
        left: k.clone(),
        right: l.clone(),
        rhs,
    })
}

pub fn stuffle_relation(k: &Composition, l: &Composition) -> Result<Relation, WordError> {
    k.require_admissible()?;
    l.require_admissible()?;
    Ok(Relation {
        product: ProductKind::Stuffle,
        left: k.clone(),
        right: l.clone(),
        rhs: stuffle(k, l),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn shuffle_relation_examples() {
        let r = shuffle_relation(&comp(&[2]), &comp(&[2])).unwrap();
        let expected: FormalSum<_> = [(comp(&[2, 2]), 2), (comp(&[3, 1]), 4)].into_iter().collect();
        assert_eq!(r.rhs, expected);

        assert!(matches!(
            shuffle_relation(&comp(&[2]), &Composition::empty()),
            Err(WordError::NotAdmissible(_))
        ));

        let r = shuffle_relation(&comp(&[3]), &comp(&[2])).unwrap();
        assert_eq!(r.rhs.mass(), 10);
        assert!(r.rhs.iter().all(|(c, _)| c.is_admissible() && c.weight() == 5));
    }

    #[test]
    fn stuffle_relation_examples() {
        let r = stuffle_relation(&comp(&[2]), &comp(&[2])).unwrap();
        let expected: FormalSum<_> = [(comp(&[2, 2]), 2), (comp(&[4]), 1)].into_iter().collect();
        assert_eq!(r.rhs, expected);

        let r = stuffle_relation(&comp(&[2]), &comp(&[3])).unwrap();
        let expected: FormalSum<_> = [(comp(&[2, 3]), 1), (comp(&[3, 2]), 1), (comp(&[5]), 1)]
            .into_iter()
            .collect();
        assert_eq!(r.rhs, expected);

        let r = stuffle_relation(&comp(&[2, 1]), &comp(&[2, 1])).unwrap();
        assert_eq!(r.rhs.mass(), 13);

        assert!(stuffle_relation(&comp(&[1, 2]), &comp(&[2])).is_err());
    }

    #[test]
    fn relation_json_shape() {
        let r = stuffle_relation(&comp(&[2]), &comp(&[2])).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["product"], "stuffle");
        assert_eq!(v["left"], serde_json::json!([2]));
        assert_eq!(v["rhs"][1]["term"], serde_json::json!([4]));
    }
}
