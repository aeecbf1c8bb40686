use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::intersection::{Phase, Stratum};
use super::lattice::{rational_rank, smith_normal_form};
use super::{StrataError, Subset};

/// A finite poset given by its strict order relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    less: Vec<Vec<bool>>,
    rank: Vec<usize>,
}

impl Poset {
    /// `less(i, j)` must be a strict partial order; ranks are the lengths of
    /// the longest chains below each element.
    pub fn from_fn(size: usize, less: impl Fn(usize, usize) -> bool) -> Result<Self, StrataError> {
        let less: Vec<Vec<bool>> = (0..size)
            .map(|i| (0..size).map(|j| i != j && less(i, j)).collect())
            .collect();
        for i in 0..size {
            for j in 0..size {
                if less[i][j] && less[j][i] {
                    return Err(StrataError::NotAPoset(format!("{i} and {j} are mutually below")));
                }
                if less[i][j] {
                    for k in 0..size {
                        if less[j][k] && !less[i][k] {
                            return Err(StrataError::NotAPoset(format!(
                                "{i} < {j} < {k} but not {i} < {k}"
                            )));
                        }
                    }
                }
            }
        }
        let mut rank = vec![usize::MAX; size];
        fn visit(i: usize, less: &[Vec<bool>], rank: &mut [usize]) -> usize {
            if rank[i] != usize::MAX {
                return rank[i];
            }
            let r = (0..less.len())
                .filter(|&j| less[j][i])
                .map(|j| visit(j, less, rank) + 1)
                .max()
                .unwrap_or(0);
            rank[i] = r;
            r
        }
        for i in 0..size {
            visit(i, &less, &mut rank);
        }
        Ok(Self { less, rank })
    }

    /// Poset from explicit strict relations, closed transitively.
    pub fn from_relations(size: usize, pairs: &[(usize, usize)]) -> Result<Self, StrataError> {
        let mut reach = vec![vec![false; size]; size];
        for &(a, b) in pairs {
            reach[a][b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if reach[i][k] {
                    for j in 0..size {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_fn(size, |i, j| reach[i][j])
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less[i][j] || self.less[j][i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn predecessors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.less[j][i])
    }

    /// `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less[i][j] && !(0..n).any(|k| self.less[i][k] && self.less[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Result of checking the three hypotheses of the blow-up theorem on a
/// stratum poset. `disjoint_union` is `None` when it was not computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PosetConditions {
    pub smooth: bool,
    pub clean: bool,
    pub disjoint_union: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct StratumPoset {
    pub n: usize,
    pub strata: Vec<Stratum>,
    pub order: Poset,
    pub conditions: Option<PosetConditions>,
}

pub const MAX_POSET_DIMENSION: usize = 4;

impl StratumPoset {
    /// Orders strata by inclusion. Nodes are sorted by codimension
    /// (smallest strata first) and then by their normal form.
    pub fn from_strata(n: usize, strata: impl IntoIterator<Item = Stratum>) -> Self {
        let set: BTreeSet<Stratum> = strata.into_iter().collect();
        let mut strata: Vec<Stratum> = set.into_iter().collect();
        strata.sort_by(|a, b| b.codimension().cmp(&a.codimension()).then(a.cmp(b)));
        let order = Poset::from_fn(strata.len(), |i, j| {
            strata[i].codimension() > strata[j].codimension() && strata[i].is_contained_in(&strata[j])
        })
        .expect("inclusion is a partial order");
        Self {
            n,
            strata,
            order,
            conditions: None,
        }
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn index_of(&self, s: &Stratum) -> Option<usize> {
        self.strata.iter().position(|t| t == s)
    }

    /// Re-checks smoothness, clean pairwise intersections and, if requested,
    /// that every pairwise intersection is a disjoint union of nodes.
    pub fn check_conditions(&self, check_disjoint_union: bool) -> PosetConditions {
        // A stratum is a translated subtorus times an affine space exactly
        // when its lattice is saturated.
        let smooth = self
            .strata
            .iter()
            .all(|s| smith_normal_form(&s.lattice).invariant_factors.iter().all(|&c| c == 1));
        let mut clean = true;
        let mut disjoint = true;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let (a, b) = (&self.strata[i], &self.strata[j]);
                let comps = a.intersect(b);
                let mut rows = a.lattice.clone();
                rows.extend(b.lattice.iter().cloned());
                let normal_rank = rational_rank(&rows);
                if comps.iter().any(|c| c.codimension() != normal_rank) {
                    clean = false;
                }
                if check_disjoint_union && comps.iter().any(|c| self.index_of(c).is_none()) {
                    disjoint = false;
                }
            }
        }
        PosetConditions {
            smooth,
            clean,
            disjoint_union: check_disjoint_union.then_some(disjoint),
        }
    }

    pub fn label(&self, i: usize) -> String {
        self.strata[i].label()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
        for (i, s) in self.strata.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\", rank_value={}];",
                i,
                s.label(),
                self.order.rank(i)
            );
        }
        for (a, b) in self.order.covers() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .strata
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "id": i,
                    "label": s.label(),
                    "rank": self.order.rank(i),
                    "codimension": s.codimension(),
                    "lattice": s.lattice,
                    "phases": s.phases,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "nodes": nodes,
            "covers": self.order.covers(),
            "conditions": self.conditions,
        })
    }
}

/// All irreducible components (over the algebraic closure) of all
/// intersections of the divisors `A_I`, `I` a non-empty subset of `1..=n`,
/// ordered by inclusion. Strata are generated by intersecting known strata
/// with each divisor until nothing new appears.
pub fn build_poset(n: usize) -> Result<StratumPoset, StrataError> {
    if !(2..=MAX_POSET_DIMENSION).contains(&n) {
        return Err(StrataError::Dimension {
            n,
            max: MAX_POSET_DIMENSION,
        });
    }
    let divisors: Vec<Subset> = Subset::all_nonempty(n);
    let mut seen: BTreeSet<Stratum> = divisors.iter().map(|&d| Stratum::divisor(d, n)).collect();
    let mut frontier: Vec<Stratum> = seen.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for &d in &divisors {
            for c in s.intersect_divisor(d) {
                if seen.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
    }
    let mut poset = StratumPoset::from_strata(n, seen);
    poset.conditions = Some(poset.check_conditions(true));
    Ok(poset)
}

/// The strata `S_{i,j} = {x_i = ... = x_j = 1}` for `1 <= i <= j <= n`.
pub fn interval_stratum(i: usize, j: usize, n: usize) -> Stratum {
    let rows: Vec<Vec<i64>> = (i..=j)
        .map(|k| (1..=n).map(|c| i64::from(c == k)).collect())
        .collect();
    super::intersection::solve_components(&rows, &vec![Phase::zero(); rows.len()], n)
        .pop()
        .expect("coordinate subspaces are irreducible")
}

/// Sub-poset of the interval strata `S_{i,j}`.
pub fn interval_poset(n: usize) -> StratumPoset {
    let strata = (1..=n).flat_map(|i| (i..=n).map(move |j| interval_stratum(i, j, n)));
    StratumPoset::from_strata(n, strata)
}

/// Rank levels: level `r` holds the nodes of rank `r`.
pub fn blowup_schedule(poset: &Poset) -> Vec<Vec<usize>> {
    let mut levels = vec![Vec::new(); if poset.is_empty() { 0 } else { poset.max_rank() + 1 }];
    for i in 0..poset.len() {
        levels[poset.rank(i)].push(i);
    }
    levels
}

/// Ordered flags, each listed from its smallest stratum upwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagSchedule {
    pub flags: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagViolation {
    UnknownNode(usize),
    NotAChain { flag: usize },
    Duplicate(usize),
    Missing(usize),
    /// `predecessor < node` but the predecessor is scheduled in a later flag.
    Order { node: usize, predecessor: usize },
}

/// Checks that the flags are chains partitioning the poset and that every
/// stratum below a stratum of flag `i` lies in some flag `j <= i`.
pub fn validate_flags(poset: &Poset, schedule: &FlagSchedule) -> Result<(), FlagViolation> {
    let mut flag_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (f, flag) in schedule.flags.iter().enumerate() {
        for w in flag.windows(2) {
            if w[0] >= poset.len() || w[1] >= poset.len() || !poset.less(w[0], w[1]) {
                if let Some(&bad) = w.iter().find(|&&x| x >= poset.len()) {
                    return Err(FlagViolation::UnknownNode(bad));
                }
                return Err(FlagViolation::NotAChain { flag: f });
            }
        }
        for &node in flag {
            if node >= poset.len() {
                return Err(FlagViolation::UnknownNode(node));
            }
            if flag_of.insert(node, f).is_some() {
                return Err(FlagViolation::Duplicate(node));
            }
        }
    }
    if let Some(missing) = (0..poset.len()).find(|i| !flag_of.contains_key(i)) {
        return Err(FlagViolation::Missing(missing));
    }
    for (&node, &f) in &flag_of {
        for pred in poset.predecessors(node) {
            if flag_of[&pred] > f {
                return Err(FlagViolation::Order {
                    node,
                    predecessor: pred,
                });
            }
        }
    }
    Ok(())
}

/// A valid flag schedule: nodes are taken in rank order and appended to the
/// current flag when they lie above its top, otherwise they open a new flag.
pub fn flag_partition(poset: &Poset) -> FlagSchedule {
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by_key(|&i| (poset.rank(i), i));
    let mut flags: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match flags.last_mut() {
            Some(flag) if poset.less(*flag.last().expect("flags are non-empty"), i) => flag.push(i),
            _ => flags.push(vec![i]),
        }
    }
    FlagSchedule { flags }
}

/// One flag per node, in rank order.
pub fn singleton_flags(poset: &Poset) -> FlagSchedule {
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by_key(|&i| (poset.rank(i), i));
    FlagSchedule {
        flags: order.into_iter().map(|i| vec![i]).collect(),
    }
}

/// The chains `F_i = {S_{i,n} < S_{i,n-1} < ... < S_{i,i}}`, `i = 1..=n`, on
/// the interval poset, which they partition.
pub fn interval_flag_family(n: usize) -> (StratumPoset, FlagSchedule) {
    let poset = interval_poset(n);
    let flags = (1..=n)
        .map(|i| {
            (i..=n)
                .rev()
                .map(|j| {
                    poset
                        .index_of(&interval_stratum(i, j, n))
                        .expect("interval strata are nodes")
                })
                .collect()
        })
        .collect();
    (poset, FlagSchedule { flags })
}

/// Coordinate strata `B0_K = {x_k = 0, k in K}` against the `A`-strata:
/// every `A`-stratum forces `x_j != 0` on its (non-empty) support and leaves
/// the other coordinates free, so it is contained in no `B0_K` and equals
/// none of them.
#[derive(Debug, Clone, Serialize)]
pub struct B0Certificate {
    pub n: usize,
    pub entries: Vec<B0Entry>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct B0Entry {
    pub node: usize,
    pub nonzero_coordinates: Vec<usize>,
    pub free_coordinates: Vec<usize>,
}

pub fn b0_certificate(poset: &StratumPoset) -> B0Certificate {
    let entries: Vec<B0Entry> = poset
        .strata
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let support = s.support();
            B0Entry {
                node: i,
                nonzero_coordinates: support.elements(),
                free_coordinates: (1..=poset.n).filter(|&k| !support.contains(k)).collect(),
            }
        })
        .collect();
    let holds = entries.iter().all(|e| !e.nonzero_coordinates.is_empty());
    B0Certificate {
        n: poset.n,
        entries,
        holds,
    }
}
