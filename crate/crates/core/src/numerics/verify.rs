use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::series::{mzv, MzvValue};
use super::NumericsError;
use crate::words::{shuffle_relation, stuffle_relation, Composition, ProductKind, Relation};

/// Accuracy requested for every zeta value entering a relation check.
pub const EVAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    #[serde(rename = "product_type")]
    pub product: ProductKind,
    #[serde(rename = "k")]
    pub left: Composition,
    #[serde(rename = "l")]
    pub right: Composition,
    pub lhs: f64,
    pub rhs: f64,
    pub absdiff: f64,
    pub bound: f64,
    pub tol: f64,
    pub pass: bool,
}

impl RelationReport {
    pub const TSV_HEADER: &'static str = "product_type\tk\tl\tlhs\trhs\tabsdiff\tbound\tpass";

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:.15}\t{:.15}\t{:.3e}\t{:.3e}\t{}",
            self.product,
            self.left,
            self.right,
            self.lhs,
            self.rhs,
            self.absdiff,
            self.bound,
            self.pass
        )
    }
}

/// Memoized zeta values, filled in parallel.
#[derive(Debug, Default, Clone)]
pub struct ZetaTable {
    values: BTreeMap<Composition, MzvValue>,
}

impl ZetaTable {
    pub fn for_relations(relations: &[Relation]) -> Result<Self, NumericsError> {
        let mut needed: BTreeSet<Composition> = BTreeSet::new();
        for r in relations {
            needed.insert(r.left.clone());
            needed.insert(r.right.clone());
            needed.extend(r.rhs.iter().map(|(c, _)| c.clone()));
        }
        let needed: Vec<Composition> = needed.into_iter().collect();
        let values = needed
            .par_iter()
            .map(|k| mzv(k, EVAL_TOL).map(|v| (k.clone(), v)))
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        Ok(Self { values })
    }

    pub fn get(&mut self, k: &Composition) -> Result<MzvValue, NumericsError> {
        if let Some(v) = self.values.get(k) {
            return Ok(*v);
        }
        let v = mzv(k, EVAL_TOL)?;
        self.values.insert(k.clone(), v);
        Ok(v)
    }

    fn lookup(&self, k: &Composition) -> MzvValue {
        self.values[k]
    }
}

fn report(rel: &Relation, tol: f64, table: &ZetaTable) -> RelationReport {
    let a = table.lookup(&rel.left);
    let b = table.lookup(&rel.right);
    let lhs = a.value * b.value;
    let lhs_bound =
        a.value.abs() * b.tail_bound + b.value.abs() * a.tail_bound + a.tail_bound * b.tail_bound;
    let mut rhs = 0.0;
    let mut rhs_bound = 0.0;
    for (c, coeff) in rel.rhs.iter() {
        let z = table.lookup(c);
        rhs += coeff as f64 * z.value;
        rhs_bound += (coeff as f64).abs() * z.tail_bound;
    }
    // Rounding in the products and sums above.
    let rounding = 8.0 * f64::EPSILON * (lhs.abs() + rhs.abs());
    let bound = lhs_bound + rhs_bound + rounding;
    let absdiff = (lhs - rhs).abs();
    RelationReport {
        product: rel.product,
        left: rel.left.clone(),
        right: rel.right.clone(),
        lhs,
        rhs,
        absdiff,
        bound,
        tol,
        pass: absdiff <= tol + bound,
    }
}

/// Checks `zeta(k) zeta(l) = sum c zeta(sigma)` numerically.
pub fn verify_relation(rel: &Relation, tol: f64) -> Result<RelationReport, NumericsError> {
    verify_relations(std::slice::from_ref(rel), tol).map(|mut v| v.remove(0))
}

/// Reports for a batch of relations, in the input order.
pub fn verify_relations(rels: &[Relation], tol: f64) -> Result<Vec<RelationReport>, NumericsError> {
    for r in rels {
        for c in [&r.left, &r.right].into_iter().chain(r.rhs.iter().map(|(c, _)| c)) {
            if !c.is_admissible() {
                return Err(NumericsError::Divergent(c.clone()));
            }
        }
    }
    let table = ZetaTable::for_relations(rels)?;
    Ok(rels.par_iter().map(|r| report(r, tol, &table)).collect())
}

/// Unordered pairs `{k, l}` of admissible compositions with total weight at
/// most `max_weight`, each listed once with `k <= l` in (weight, parts)
/// order.
pub fn admissible_pairs(max_weight: u32) -> Vec<(Composition, Composition)> {
    let mut all: Vec<Composition> = (2..=max_weight.saturating_sub(2))
        .flat_map(Composition::admissible_of_weight)
        .collect();
    all.sort_by(|a, b| (a.weight(), a.parts()).cmp(&(b.weight(), b.parts())));
    let mut out = Vec::new();
    for (i, k) in all.iter().enumerate() {
        for l in &all[i..] {
            if k.weight() + l.weight() <= max_weight {
                out.push((k.clone(), l.clone()));
            }
        }
    }
    out
}

/// Both products of every pair from [`admissible_pairs`].
pub fn double_shuffle_relations(max_weight: u32) -> Vec<Relation> {
    let mut rels = Vec::new();
    for (k, l) in admissible_pairs(max_weight) {
        rels.push(stuffle_relation(&k, &l).expect("admissible"));
        rels.push(shuffle_relation(&k, &l).expect("admissible"));
    }
    rels.sort_by(|a, b| a.key().cmp(&b.key()));
    rels
}

pub fn verify_double_shuffle_up_to(
    max_weight: u32,
    tol: f64,
) -> Result<Vec<RelationReport>, NumericsError> {
    if !(4..=10).contains(&max_weight) {
        return Err(NumericsError::MaxWeight(max_weight));
    }
    verify_relations(&double_shuffle_relations(max_weight), tol)
}
