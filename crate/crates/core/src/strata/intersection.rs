use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::lattice::{
    hermite_normal_form, hnf_coordinates, rational_rank, smith_normal_form, Matrix, SmithForm,
};
use super::{StrataError, Subset};

/// An element of `Q/Z`, kept in `[0, 1)`. The point value is `exp(2 pi i phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        let floor = r.floor();
        Phase(r - floor)
    }

    pub fn zero() -> Self {
        Phase(Ratio::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn add(self, other: Phase) -> Phase {
        let r = self.0 + other.0;
        Phase(r - r.floor())
    }

    pub fn scale(self, c: i64) -> Phase {
        let r = self.0 * Ratio::from_integer(c);
        Phase(r - r.floor())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "1")
        } else if *self.0.denom() == 2 {
            write!(f, "-1")
        } else {
            write!(f, "e({})", self.0)
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

/// Rows are the characteristic vectors of the subsets.
pub fn char_matrix(sets: &[Subset], n: usize) -> Result<Matrix, StrataError> {
    for &s in sets {
        s.validate(n)?;
    }
    Ok(sets
        .iter()
        .map(|s| (1..=n).map(|i| i64::from(s.contains(i))).collect())
        .collect())
}

fn validate_family(sets: &[Subset], n: usize) -> Result<(), StrataError> {
    if sets.is_empty() {
        return Err(StrataError::EmptyFamily);
    }
    for (i, a) in sets.iter().enumerate() {
        a.validate(n)?;
        if sets[..i].contains(a) {
            return Err(StrataError::DuplicateSubset(*a));
        }
    }
    Ok(())
}

/// Shape of `A_{I_1} cap ... cap A_{I_k}` in affine `n`-space: it is
/// isomorphic to `A^s x G_m^torus_rank x prod_i {x^(c_i) = 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionClass {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub torus_rank: usize,
    pub invariant_factors: Vec<i64>,
    /// Number of irreducible components over the algebraic closure.
    pub component_count: i64,
}

impl IntersectionClass {
    pub fn dimension(&self) -> usize {
        self.s + self.torus_rank
    }
}

pub fn intersection_type(sets: &[Subset], n: usize) -> Result<IntersectionClass, StrataError> {
    validate_family(sets, n)?;
    let union = sets.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
    let cols: Vec<usize> = union.elements();
    let m: Matrix = sets
        .iter()
        .map(|s| cols.iter().map(|&j| i64::from(s.contains(j))).collect())
        .collect();
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    Ok(IntersectionClass {
        n,
        s: n - cols.len(),
        r,
        torus_rank: cols.len() - r,
        component_count: snf.invariant_factors.iter().product(),
        invariant_factors: snf.invariant_factors,
    })
}

/// The normals of the `A_I` at a point of the intersection are the rows of
/// the characteristic matrix scaled by `1/x_j`, so their span has the
/// rational rank of that matrix; the intersection is clean when this
/// equals its codimension `r`.
pub fn clean_intersection_check(sets: &[Subset], n: usize) -> Result<bool, StrataError> {
    let class = intersection_type(sets, n)?;
    Ok(rational_rank(&char_matrix(sets, n)?) == class.r)
}

/// Witness for the model of [`intersection_type`]: in the coordinates
/// `y_i = x^(f_i)` given by the rows of `coordinate_change` (restricted to
/// the support), the equations become `y_i^(c_i) = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TateCertificate {
    pub class: IntersectionClass,
    pub model: String,
    /// Coordinates not involved in any equation (the affine factor).
    pub affine_coordinates: Vec<usize>,
    /// Coordinates of the support, in column order of the matrices below.
    pub support: Vec<usize>,
    /// Rows `f_i`: a unimodular change of characters on the support.
    pub coordinate_change: Matrix,
    /// `u` with `u * M * coordinate_change^-1 = diag(c)`.
    pub row_transform: Matrix,
    pub check: bool,
}

pub fn tate_certificate(sets: &[Subset], n: usize) -> Result<TateCertificate, StrataError> {
    let class = intersection_type(sets, n)?;
    let union = sets.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
    let support = union.elements();
    let m: Matrix = sets
        .iter()
        .map(|s| support.iter().map(|&j| i64::from(s.contains(j))).collect())
        .collect();
    let snf = smith_normal_form(&m);
    let check = certificate_holds(&m, &snf);
    let mut factors: Vec<String> = Vec::new();
    if class.s > 0 {
        factors.push(format!("A^{}", class.s));
    }
    if class.torus_rank > 0 {
        factors.push(format!("G_m^{}", class.torus_rank));
    }
    let torsion: Vec<i64> = class.invariant_factors.iter().copied().filter(|&c| c > 1).collect();
    for c in &torsion {
        factors.push(format!("{{y^{c} = 1}}"));
    }
    let model = if factors.is_empty() {
        "point".to_string()
    } else {
        factors.join(" x ")
    };
    Ok(TateCertificate {
        affine_coordinates: (1..=n).filter(|i| !union.contains(*i)).collect(),
        support,
        coordinate_change: snf.v_inv.clone(),
        row_transform: snf.u.clone(),
        model,
        class,
        check,
    })
}

fn certificate_holds(m: &Matrix, snf: &SmithForm) -> bool {
    use super::lattice::{determinant, identity, mat_mul};
    let cols = snf.v.len();
    mat_mul(&mat_mul(&snf.u, m), &snf.v) == snf.d
        && mat_mul(&snf.v, &snf.v_inv) == identity(cols)
        && determinant(&snf.v_inv).abs() == 1
        && determinant(&snf.u).abs() == 1
}

/// An irreducible component of an intersection of the `A_I` over the
/// algebraic closure: `{x : x^lambda = exp(2 pi i chi(lambda))}` for
/// `lambda` in a saturated lattice. The lattice is stored as its HNF rows
/// and the character by its values on those rows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    pub lattice: Matrix,
    pub phases: Vec<Phase>,
}

impl Stratum {
    /// Codimension in affine space.
    pub fn codimension(&self) -> usize {
        self.lattice.len()
    }

    pub fn n(&self) -> usize {
        self.lattice.first().map_or(0, Vec::len)
    }

    pub fn support(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for row in &self.lattice {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    s = s.union(Subset::singleton(j + 1));
                }
            }
        }
        s
    }

    /// Character value on a lattice vector, if the vector lies in the lattice.
    pub fn character(&self, v: &[i64]) -> Option<Phase> {
        let coords = hnf_coordinates(&self.lattice, v)?;
        Some(
            coords
                .iter()
                .zip(&self.phases)
                .fold(Phase::zero(), |acc, (&c, &p)| acc.add(p.scale(c))),
        )
    }

    /// True iff `self` is contained in `other` as a variety.
    pub fn is_contained_in(&self, other: &Stratum) -> bool {
        other
            .lattice
            .iter()
            .zip(&other.phases)
            .all(|(row, &p)| self.character(row) == Some(p))
    }

    /// Equation list, e.g. `x1*x2 = 1, x3 = -1`.
    pub fn label(&self) -> String {
        self.lattice
            .iter()
            .zip(&self.phases)
            .map(|(row, p)| {
                let mut parts = Vec::new();
                for (j, &e) in row.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => parts.push(format!("x{}", j + 1)),
                        _ => parts.push(format!("x{}^{}", j + 1, e)),
                    }
                }
                format!("{} = {}", parts.join("*"), p)
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Components of the intersection with another stratum.
    pub fn intersect(&self, other: &Stratum) -> Vec<Stratum> {
        let mut rows = self.lattice.clone();
        rows.extend(other.lattice.iter().cloned());
        let mut phases = self.phases.clone();
        phases.extend(other.phases.iter().copied());
        solve_components(&rows, &phases, self.n())
    }

    pub fn intersect_divisor(&self, set: Subset) -> Vec<Stratum> {
        let n = self.n();
        let mut rows = self.lattice.clone();
        rows.push((1..=n).map(|i| i64::from(set.contains(i))).collect());
        let mut phases = self.phases.clone();
        phases.push(Phase::zero());
        solve_components(&rows, &phases, n)
    }

    pub fn divisor(set: Subset, n: usize) -> Stratum {
        let row: Vec<i64> = (1..=n).map(|i| i64::from(set.contains(i))).collect();
        solve_components(&[row], &[Phase::zero()], n)
            .pop()
            .expect("a divisor A_I is irreducible")
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

/// Components of `{x : x^(g_i) = exp(2 pi i theta_i)}`. With `U G V = D`
/// and `w' = V^-1 w` (where `x_j = exp(2 pi i w_j)`), the system reads
/// `d_i w'_i = (U theta)_i mod 1`; rows with `d_i = 0` are consistency
/// conditions and each other row has `d_i` solutions.
pub fn solve_components(rows: &[Vec<i64>], phases: &[Phase], n: usize) -> Vec<Stratum> {
    let m: Matrix = rows.to_vec();
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    let u_theta: Vec<Phase> = snf
        .u
        .iter()
        .map(|urow| {
            urow.iter()
                .zip(phases)
                .fold(Phase::zero(), |acc, (&c, &p)| acc.add(p.scale(c)))
        })
        .collect();
    if u_theta[r..].iter().any(|p| !p.is_zero()) {
        return Vec::new();
    }
    let basis: Matrix = snf.v_inv[..r].to_vec();
    let (h, t) = hermite_normal_form(&basis);
    let mut out = Vec::new();
    let counts: Vec<i64> = snf.invariant_factors.clone();
    let total: i64 = counts.iter().product();
    for idx in 0..total {
        let mut rem = idx;
        let mut values = Vec::with_capacity(r);
        for i in 0..r {
            let d = counts[i];
            let shift = rem % d;
            rem /= d;
            let base = u_theta[i].ratio();
            let v = (base + Ratio::from_integer(shift)) / Ratio::from_integer(d);
            values.push(Phase::new(*v.numer(), *v.denom()));
        }
        let phases: Vec<Phase> = t
            .iter()
            .map(|trow| {
                trow.iter()
                    .zip(&values)
                    .fold(Phase::zero(), |acc, (&c, &p)| acc.add(p.scale(c)))
            })
            .collect();
        out.push(Stratum {
            lattice: h.clone(),
            phases,
        });
    }
    debug_assert!(out.iter().all(|s| s.n() == n || s.lattice.is_empty()));
    out.sort();
    out
}

/// Least common multiple of the phase denominators.
pub fn phase_order(phases: &[Phase]) -> i64 {
    phases.iter().fold(1, |acc, p| acc.lcm(p.ratio().denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e)
    }

    #[test]
    fn char_matrix_examples() {
        assert_eq!(char_matrix(&[set(&[1, 2])], 2).unwrap(), vec![vec![1, 1]]);
        assert_eq!(
            char_matrix(&[set(&[1, 2]), set(&[2, 3])], 3).unwrap(),
            vec![vec![1, 1, 0], vec![0, 1, 1]]
        );
        assert!(matches!(char_matrix(&[Subset::EMPTY], 2), Err(StrataError::EmptySubset)));
    }

    #[test]
    fn intersection_examples() {
        let c = intersection_type(&[set(&[1, 3])], 4).unwrap();
        assert_eq!((c.s, c.r, c.torus_rank, c.component_count), (2, 1, 1, 1));
        let c = intersection_type(&[set(&[1, 2]), set(&[2, 3])], 3).unwrap();
        assert_eq!((c.s, c.r, c.torus_rank), (0, 2, 1));
        assert_eq!(c.invariant_factors, vec![1, 1]);
        let c = intersection_type(&[set(&[1, 2]), set(&[2, 3]), set(&[1, 3])], 3).unwrap();
        assert_eq!((c.s, c.r, c.torus_rank), (0, 3, 0));
        assert_eq!(c.invariant_factors, vec![1, 1, 2]);
        assert_eq!(c.component_count, 2);
        assert!(matches!(
            intersection_type(&[set(&[1, 2]), set(&[1, 2])], 3),
            Err(StrataError::DuplicateSubset(_))
        ));
    }

    #[test]
    fn two_points_as_strata() {
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let comps = solve_components(&rows, &[Phase::zero(); 3], 3);
        assert_eq!(comps.len(), 2);
        let labels: Vec<String> = comps.iter().map(|c| c.label()).collect();
        assert!(labels.contains(&"x1 = 1, x2 = 1, x3 = 1".to_string()));
        assert!(labels.contains(&"x1 = -1, x2 = -1, x3 = -1".to_string()));
    }

    #[test]
    fn clean_examples() {
        assert!(clean_intersection_check(&[set(&[1, 2, 3])], 3).unwrap());
        assert!(clean_intersection_check(&[set(&[1, 2]), set(&[2, 3]), set(&[1, 3])], 3).unwrap());
        assert!(clean_intersection_check(&[set(&[1, 2]), set(&[1, 2])], 3).is_err());
    }

    #[test]
    fn tate_examples() {
        let t = tate_certificate(&[set(&[1, 2])], 3).unwrap();
        assert_eq!(t.model, "A^1 x G_m^1");
        assert!(t.check);
        let t = tate_certificate(&[set(&[1, 2]), set(&[2, 3]), set(&[1, 3])], 3).unwrap();
        assert_eq!(t.model, "{y^2 = 1}");
        assert_eq!(t.class.component_count, 2);
        assert!(t.check);
        let t = tate_certificate(&[set(&[1, 2, 3])], 4).unwrap();
        assert_eq!(t.model, "A^1 x G_m^2");
        assert_eq!(t.affine_coordinates, vec![4]);
    }

    #[test]
    fn containment() {
        let a1 = Stratum::divisor(set(&[1]), 2);
        let a12 = Stratum::divisor(set(&[1, 2]), 2);
        let pts = a1.intersect(&a12);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].label(), "x1 = 1, x2 = 1");
        assert!(pts[0].is_contained_in(&a1));
        assert!(pts[0].is_contained_in(&a12));
        assert!(!a1.is_contained_in(&a12));
    }
}
