use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CoordsError;
use crate::cartier::parse_rational;
use crate::words::ShufflePermutation;

/// A point `(0, z_1, ..., z_r, 1, inf)` of the moduli space; only the
/// finite coordinates `z_i` are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedPointConfig {
    z: Vec<BigRational>,
}

impl MarkedPointConfig {
    /// Rejects coincident points, which lie on the boundary.
    pub fn new(z: Vec<BigRational>) -> Result<Self, CoordsError> {
        for (i, v) in z.iter().enumerate() {
            if v.is_zero() || v.is_one() {
                return Err(CoordsError::Boundary(format!("z{} = {v}", i + 1)));
            }
            if let Some(j) = z[..i].iter().position(|w| w == v) {
                return Err(CoordsError::Boundary(format!("z{} = z{} = {v}", j + 1, i + 1)));
            }
        }
        Ok(Self { z })
    }

    pub fn values(&self) -> &[BigRational] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Membership in the standard cell `0 < z_1 < ... < z_r < 1`.
    pub fn in_standard_cell(&self) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        std::iter::once(&zero)
            .chain(&self.z)
            .zip(self.z.iter().chain(std::iter::once(&one)))
            .all(|(a, b)| a < b)
    }

    /// `u_1 = z_r`, `u_i = z_{r-i+1} / z_{r-i+2}`.
    pub fn cubical(&self) -> Vec<BigRational> {
        let r = self.z.len();
        (1..=r)
            .map(|i| {
                if i == 1 {
                    self.z[r - 1].clone()
                } else {
                    &self.z[r - i] / &self.z[r - i + 1]
                }
            })
            .collect()
    }
}

impl fmt::Display for MarkedPointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.z.iter().map(ToString::to_string).collect();
        if inner.is_empty() {
            write!(f, "(0, 1, inf)")
        } else {
            write!(f, "(0, {}, 1, inf)", inner.join(", "))
        }
    }
}

impl Serialize for MarkedPointConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.z.iter().map(ToString::to_string).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MarkedPointConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let z = strings
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        MarkedPointConfig::new(z).map_err(D::Error::custom)
    }
}

fn check_size(z: &MarkedPointConfig, n: usize, m: usize) -> Result<(), CoordsError> {
    if z.len() != n + m {
        return Err(CoordsError::Size {
            expected: n + m,
            got: z.len(),
        });
    }
    Ok(())
}

/// Forgets the last `m` points, respectively the first `n`.
pub fn beta_map(
    z: &MarkedPointConfig,
    n: usize,
    m: usize,
) -> Result<(MarkedPointConfig, MarkedPointConfig), CoordsError> {
    check_size(z, n, m)?;
    Ok((
        MarkedPointConfig { z: z.z[..n].to_vec() },
        MarkedPointConfig { z: z.z[n..].to_vec() },
    ))
}

/// `(0, z_{m+1}, ..., z_{m+n}, 1, inf) x (0, z_1, ..., z_m, z_{m+1}, inf)`,
/// the second factor moved to its representative with `z_{m+1}` sent to 1.
pub fn delta_map(
    z: &MarkedPointConfig,
    n: usize,
    m: usize,
) -> Result<(MarkedPointConfig, MarkedPointConfig), CoordsError> {
    check_size(z, n, m)?;
    if n == 0 {
        return Err(CoordsError::Size {
            expected: m + 1,
            got: z.len(),
        });
    }
    let pivot = &z.z[m];
    Ok((
        MarkedPointConfig { z: z.z[m..].to_vec() },
        MarkedPointConfig {
            z: z.z[..m].iter().map(|v| v / pivot).collect(),
        },
    ))
}

/// Total order of the points `z_1, ..., z_{n+m}`: `order[k]` is the index of
/// the `k`-th smallest point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellLabel {
    pub n: usize,
    pub m: usize,
    pub order: Vec<usize>,
}

impl CellLabel {
    pub fn to_shuffle(&self) -> ShufflePermutation {
        let mut image = vec![0; self.order.len()];
        for (pos, &idx) in self.order.iter().enumerate() {
            image[idx - 1] = pos + 1;
        }
        ShufflePermutation::new(self.n, self.m, image).expect("cell labels are shuffles")
    }
}

/// The shuffle cell containing `z`, which must map into the product of the
/// standard cells under [`beta_map`].
pub fn cell_classify(z: &MarkedPointConfig, n: usize, m: usize) -> Result<CellLabel, CoordsError> {
    let (left, right) = beta_map(z, n, m)?;
    if !left.in_standard_cell() || !right.in_standard_cell() {
        return Err(CoordsError::NotInCell(z.to_string()));
    }
    let mut order: Vec<usize> = (1..=n + m).collect();
    order.sort_by(|&a, &b| z.z[a - 1].cmp(&z.z[b - 1]));
    Ok(CellLabel { n, m, order })
}
