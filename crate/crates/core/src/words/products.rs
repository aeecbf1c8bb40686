use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BinaryWord, Composition, FormalSum};

/// Shuffle product of two words.
///
/// Follows the first-letter recursion
/// `(a.u) sh (b.v) = a.(u sh b.v) + b.(a.u sh v)` with the empty word as
/// unit, memoized over suffix pairs.
pub fn shuffle(u: &BinaryWord, v: &BinaryWord) -> FormalSum<BinaryWord> {
    let (a, b) = (u.letters(), v.letters());
    let (n, m) = (a.len(), b.len());
    // table[i][j] = shuffle of a[i..] and b[j..]
    let mut table: Vec<Vec<FormalSum<BinaryWord>>> = vec![vec![FormalSum::new(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            table[i][j] = if i == n {
                FormalSum::singleton(BinaryWord::from_letters_unchecked(b[j..].to_vec()), 1)
            } else if j == m {
                FormalSum::singleton(BinaryWord::from_letters_unchecked(a[i..].to_vec()), 1)
            } else {
                let mut s = prepend(a[i], &table[i + 1][j]);
                s.add_sum(&prepend(b[j], &table[i][j + 1]), 1);
                s
            };
        }
    }
    table.swap_remove(0).swap_remove(0)
}

fn prepend(letter: u8, sum: &FormalSum<BinaryWord>) -> FormalSum<BinaryWord> {
    sum.iter()
        .map(|(w, c)| {
            let mut letters = Vec::with_capacity(w.len() + 1);
            letters.push(letter);
            letters.extend_from_slice(w.letters());
            (BinaryWord::from_letters_unchecked(letters), c)
        })
        .collect()
}

/// Shuffle by direct enumeration of the position sets occupied by `u`.
pub fn shuffle_by_enumeration(u: &BinaryWord, v: &BinaryWord) -> FormalSum<BinaryWord> {
    ShufflePermutation::all(u.len(), v.len())
        .into_iter()
        .map(|s| (s.apply(u, v), 1))
        .collect()
}

/// Where a part of a stuffle term comes from (1-based part indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StuffleEntry {
    Left(usize),
    Right(usize),
    Merged(usize, usize),
}

/// One term of `k * l` together with the parts of `k` and `l` it uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StuffleTerm {
    pub entries: Vec<StuffleEntry>,
}

impl StuffleTerm {
    pub fn composition(&self, k: &Composition, l: &Composition) -> Composition {
        let (kp, lp) = (k.parts(), l.parts());
        Composition::from_parts_unchecked(
            self.entries
                .iter()
                .map(|e| match *e {
                    StuffleEntry::Left(i) => kp[i - 1],
                    StuffleEntry::Right(j) => lp[j - 1],
                    StuffleEntry::Merged(i, j) => kp[i - 1] + lp[j - 1],
                })
                .collect(),
        )
    }

    /// True iff the entries use parts `1..=p` of `k` and `1..=q` of `l`
    /// each exactly once, in increasing order on both sides.
    pub fn arises_from(&self, p: usize, q: usize) -> bool {
        let (mut next_left, mut next_right) = (1usize, 1usize);
        for e in &self.entries {
            let (left, right) = match *e {
                StuffleEntry::Left(i) => (Some(i), None),
                StuffleEntry::Right(j) => (None, Some(j)),
                StuffleEntry::Merged(i, j) => (Some(i), Some(j)),
            };
            if let Some(i) = left {
                if i != next_left {
                    return false;
                }
                next_left += 1;
            }
            if let Some(j) = right {
                if j != next_right {
                    return false;
                }
                next_right += 1;
            }
        }
        next_left == p + 1 && next_right == q + 1
    }

    pub fn merge_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, StuffleEntry::Merged(..)))
            .count()
    }
}

impl fmt::Display for StuffleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match e {
                StuffleEntry::Left(i) => write!(f, "k{i}")?,
                StuffleEntry::Right(j) => write!(f, "l{j}")?,
                StuffleEntry::Merged(i, j) => write!(f, "k{i}+l{j}")?,
            }
        }
        write!(f, "]")
    }
}

/// All terms of `k * l` with provenance, one per unit coefficient.
///
/// The recursion consumes the last parts:
/// `k*l = (k * l') . l_q + (k' * l) . k_p + (k' * l') . (k_p + l_q)`,
/// with `k * () = () * k = k`. The result has `D(p, q)` entries.
pub fn stuffle_terms(k: &Composition, l: &Composition) -> Vec<StuffleTerm> {
    let (p, q) = (k.depth(), l.depth());
    let mut table: Vec<Vec<Vec<StuffleTerm>>> = vec![vec![Vec::new(); q + 1]; p + 1];
    for i in 0..=p {
        for j in 0..=q {
            table[i][j] = if j == 0 {
                vec![StuffleTerm {
                    entries: (1..=i).map(StuffleEntry::Left).collect(),
                }]
            } else if i == 0 {
                vec![StuffleTerm {
                    entries: (1..=j).map(StuffleEntry::Right).collect(),
                }]
            } else {
                let mut out = Vec::new();
                out.extend(extend_all(&table[i][j - 1], StuffleEntry::Right(j)));
                out.extend(extend_all(&table[i - 1][j], StuffleEntry::Left(i)));
                out.extend(extend_all(&table[i - 1][j - 1], StuffleEntry::Merged(i, j)));
                out
            };
        }
    }
    std::mem::take(&mut table[p][q])
}

fn extend_all(terms: &[StuffleTerm], last: StuffleEntry) -> impl Iterator<Item = StuffleTerm> + '_ {
    terms.iter().map(move |t| {
        let mut entries = t.entries.clone();
        entries.push(last);
        StuffleTerm { entries }
    })
}

/// Stuffle product as a formal sum of compositions.
pub fn stuffle(k: &Composition, l: &Composition) -> FormalSum<Composition> {
    stuffle_terms(k, l)
        .into_iter()
        .map(|t| (t.composition(k, l), 1))
        .collect()
}

/// Delannoy number `D(p, q)`, by the three-term recursion.
pub fn delannoy(p: usize, q: usize) -> u64 {
    let mut d = vec![vec![1u64; q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            d[i][j] = d[i - 1][j] + d[i][j - 1] + d[i - 1][j - 1];
        }
    }
    d[p][q]
}

/// A permutation of `{1, ..., n+m}` increasing on `{1..n}` and on
/// `{n+1..n+m}`; `image[i-1]` is the position of letter `i` in the merged
/// word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShufflePermutation {
    n: usize,
    m: usize,
    image: Vec<usize>,
}

impl ShufflePermutation {
    pub fn new(n: usize, m: usize, image: Vec<usize>) -> Option<Self> {
        let s = Self { n, m, image };
        s.is_valid().then_some(s)
    }

    /// Builds the permutation from the positions (1-based, increasing) taken
    /// by the first word.
    pub fn from_left_positions(n: usize, m: usize, left: &[usize]) -> Option<Self> {
        if left.len() != n {
            return None;
        }
        let mut taken = vec![false; n + m + 1];
        for &p in left {
            if p == 0 || p > n + m || taken[p] {
                return None;
            }
            taken[p] = true;
        }
        let right: Vec<usize> = (1..=n + m).filter(|&p| !taken[p]).collect();
        let mut image = left.to_vec();
        image.extend(right);
        Self::new(n, m, image)
    }

    pub fn is_valid(&self) -> bool {
        let total = self.n + self.m;
        if self.image.len() != total {
            return false;
        }
        let mut seen = vec![false; total + 1];
        for &p in &self.image {
            if p == 0 || p > total || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.image[..self.n].windows(2).all(|w| w[0] < w[1])
            && self.image[self.n..].windows(2).all(|w| w[0] < w[1])
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// All `C(n+m, n)` shuffle permutations, ordered by the left positions.
    pub fn all(n: usize, m: usize) -> Vec<ShufflePermutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(start: usize, n: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for p in start..=total {
                if total - p < n - cur.len() - 1 {
                    break;
                }
                cur.push(p);
                rec(p + 1, n, total, cur, out);
                cur.pop();
            }
        }
        let mut lefts = Vec::new();
        rec(1, n, n + m, &mut cur, &mut lefts);
        for left in lefts {
            out.push(Self::from_left_positions(n, m, &left).expect("valid positions"));
        }
        out
    }

    /// The merged word: letter `i` of `u` goes to position `image[i-1]`.
    pub fn apply(&self, u: &BinaryWord, v: &BinaryWord) -> BinaryWord {
        assert_eq!((u.len(), v.len()), (self.n, self.m), "word lengths do not match");
        let mut letters = vec![0u8; self.n + self.m];
        for (i, &b) in u.letters().iter().chain(v.letters()).enumerate() {
            letters[self.image[i] - 1] = b;
        }
        BinaryWord::from_letters_unchecked(letters)
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
    fn shuffle_examples() {
        let s = shuffle(&BinaryWord::empty(), &word(&[0, 1]));
        assert_eq!(s, FormalSum::singleton(word(&[0, 1]), 1));

        let s = shuffle(&word(&[0, 1]), &word(&[0, 1]));
        let expected: FormalSum<_> = [(word(&[0, 1, 0, 1]), 2), (word(&[0, 0, 1, 1]), 4)]
            .into_iter()
            .collect();
        assert_eq!(s, expected);

        let s = shuffle(&word(&[0]), &word(&[1]));
        let expected: FormalSum<_> = [(word(&[0, 1]), 1), (word(&[1, 0]), 1)].into_iter().collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn stuffle_examples() {
        assert_eq!(
            stuffle(&comp(&[2]), &Composition::empty()),
            FormalSum::singleton(comp(&[2]), 1)
        );
        let expected: FormalSum<_> = [(comp(&[2, 2]), 2), (comp(&[4]), 1)].into_iter().collect();
        assert_eq!(stuffle(&comp(&[2]), &comp(&[2])), expected);

        let expected: FormalSum<_> = [
            (comp(&[2, 1, 3]), 1),
            (comp(&[2, 3, 1]), 1),
            (comp(&[3, 2, 1]), 1),
            (comp(&[2, 4]), 1),
            (comp(&[5, 1]), 1),
        ]
        .into_iter()
        .collect();
        let s = stuffle(&comp(&[2, 1]), &comp(&[3]));
        assert_eq!(s, expected);
        assert_eq!(s.mass() as u64, delannoy(2, 1));
    }

    #[test]
    fn delannoy_values() {
        assert_eq!(delannoy(1, 1), 3);
        assert_eq!(delannoy(2, 1), 5);
        assert_eq!(delannoy(2, 2), 13);
        assert_eq!(delannoy(3, 3), 63);
        assert_eq!(delannoy(0, 5), 1);
    }

    #[test]
    fn provenance_of_a_merged_term() {
        let terms = stuffle_terms(&comp(&[2, 1]), &comp(&[4]));
        let target = StuffleTerm {
            entries: vec![StuffleEntry::Left(1), StuffleEntry::Right(1), StuffleEntry::Left(2)],
        };
        assert!(terms.contains(&target));
        assert_eq!(target.composition(&comp(&[2, 1]), &comp(&[4])), comp(&[2, 4, 1]));
        assert!(terms.iter().all(|t| t.arises_from(2, 1)));
        assert!(!target.arises_from(2, 2));
    }

    #[test]
    fn shuffle_permutation_validity() {
        assert!(ShufflePermutation::new(2, 1, vec![1, 3, 2]).is_some());
        assert!(ShufflePermutation::new(2, 1, vec![3, 1, 2]).is_none());
        assert_eq!(ShufflePermutation::all(3, 2).len(), 10);
        let s = ShufflePermutation::new(1, 1, vec![2, 1]).unwrap();
        assert_eq!(s.apply(&word(&[0]), &word(&[1])), word(&[1, 0]));
    }
}
