//! Arrangements of the divisors `A_I = {prod_{i in I} x_i = 1}` and the
//! coordinate hyperplanes in affine `n`-space: lattice normal forms,
//! intersection types, stratum posets with blow-up and flag schedules, and
//! the positivity check at the boundary of the cube.

mod clearance;
mod intersection;
pub mod lattice;
mod poset;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use clearance::{
    boundary_clearance_check, clearance_bracket, clearance_value, literal_bracket,
    sigma_identity_check, ClearanceReport, ClearanceSetup,
};
pub use intersection::{
    char_matrix, clean_intersection_check, intersection_type, phase_order, solve_components,
    tate_certificate, IntersectionClass, Phase, Stratum, TateCertificate,
};
pub use lattice::{hermite_normal_form, smith_normal_form, Matrix, SmithForm};
pub use poset::{
    b0_certificate, blowup_schedule, build_poset, flag_partition, interval_flag_family,
    interval_poset, interval_stratum, singleton_flags, validate_flags, B0Certificate, B0Entry,
    FlagSchedule, FlagViolation, Poset, PosetConditions, StratumPoset, MAX_POSET_DIMENSION,
};

pub const MAX_SUBSET_SIZE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("subsets must be non-empty")]
    EmptySubset,
    #[error("at least one subset is required")]
    EmptyFamily,
    #[error("subset {0} appears twice")]
    DuplicateSubset(Subset),
    #[error("subset {subset} is not contained in 1..={n}")]
    OutOfRange { subset: Subset, n: usize },
    #[error("dimension {n} outside the supported range 2..={max}")]
    Dimension { n: usize, max: usize },
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("clearance needs |I| >= 2, got {0}")]
    SmallSubset(Subset),
    #[error("sigma identity is checked for 1 <= p <= 6, got {0}")]
    SigmaDegree(usize),
}

/// A subset of `{1, ..., 64}` as a bitmask; bit `i - 1` stands for `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Self {
        assert!((1..=MAX_SUBSET_SIZE).contains(&i), "element {i} out of range");
        Subset(1 << (i - 1))
    }

    pub fn from_elements(elements: &[usize]) -> Self {
        elements
            .iter()
            .fold(Subset::EMPTY, |s, &i| s.union(Subset::singleton(i)))
    }

    pub fn range(first: usize, last: usize) -> Self {
        Subset::from_elements(&(first..=last).collect::<Vec<_>>())
    }

    /// All non-empty subsets of `1..=n`.
    pub fn all_nonempty(n: usize) -> Vec<Subset> {
        (1..(1u64 << n)).map(Subset).collect()
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_SUBSET_SIZE).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> Vec<usize> {
        (1..=MAX_SUBSET_SIZE).filter(|&i| self.contains(i)).collect()
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn validate(self, n: usize) -> Result<(), StrataError> {
        if self.is_empty() {
            return Err(StrataError::EmptySubset);
        }
        if self.max_element().unwrap_or(0) > n {
            return Err(StrataError::OutOfRange { subset: self, n });
        }
        Ok(())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

impl std::str::FromStr for Subset {
    type Err = String;

    /// Accepts `1,2,3` or `{1,2,3}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = Subset::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = part.parse().map_err(|_| format!("bad element `{part}`"))?;
            if !(1..=MAX_SUBSET_SIZE).contains(&i) {
                return Err(format!("element {i} out of range"));
            }
            out = out.union(Subset::singleton(i));
        }
        Ok(out)
    }
}

/// The divisors of the arrangement: `A(I) = {prod_I x_i = 1}`,
/// `B0(i) = {x_i = 0}` and `B1(i) = {x_i = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisorKind {
    A(Subset),
    B0(usize),
    B1(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivisorLabel {
    pub kind: DivisorKind,
    pub n: usize,
}

impl DivisorLabel {
    pub fn new(kind: DivisorKind, n: usize) -> Result<Self, StrataError> {
        match kind {
            DivisorKind::A(set) => set.validate(n)?,
            DivisorKind::B0(i) | DivisorKind::B1(i) => Subset::singleton(i).validate(n)?,
        }
        Ok(Self { kind, n })
    }

    /// `B1(i)` and `A({i})` are the same divisor.
    pub fn canonical(self) -> Self {
        match self.kind {
            DivisorKind::B1(i) => Self {
                kind: DivisorKind::A(Subset::singleton(i)),
                n: self.n,
            },
            _ => self,
        }
    }

    pub fn same_divisor(self, other: DivisorLabel) -> bool {
        self.canonical() == other.canonical()
    }

    /// The stratum of an `A`-type divisor; coordinate hyperplanes `x_i = 0`
    /// are not of this form.
    pub fn stratum(self) -> Option<Stratum> {
        match self.canonical().kind {
            DivisorKind::A(set) => Some(Stratum::divisor(set, self.n)),
            _ => None,
        }
    }
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DivisorKind::A(set) => write!(f, "A_{set}"),
            DivisorKind::B0(i) => write!(f, "B0_{i}"),
            DivisorKind::B1(i) => write!(f, "B1_{i}"),
        }
    }
}
