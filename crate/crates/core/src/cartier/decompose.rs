use serde::Serialize;
use serde_json::{json, Value};

use super::{rational_eq, var_range, CartierError, Monomial, RationalFn, Var};
use crate::words::{stuffle_terms, Composition, StuffleEntry, StuffleTerm};

/// `f_k(vars) = prod_{i<p} P_i / prod_{i<=p} (1 - P_i)` where `P_i` is the
/// product of the first `k_1 + ... + k_i` variables.
pub fn build_f(k: &Composition, vars: &[Var]) -> Result<RationalFn, CartierError> {
    if vars.len() != k.weight() as usize {
        return Err(CartierError::VariableCount {
            expected: k.weight() as usize,
            got: vars.len(),
        });
    }
    let mut den = Vec::with_capacity(k.depth());
    let mut num = Monomial::one();
    for (i, &s) in k.partial_sums().iter().enumerate() {
        let p = Monomial::product_of(&vars[..s]);
        if i + 1 < k.depth() {
            num = num.mul(&p);
        }
        den.push(p);
    }
    RationalFn::monomial_over(num, den)
}

/// The three summands of
/// `1/((1-a)(1-b)) = a/((1-a)(1-ab)) + b/((1-b)(1-ab)) + 1/(1-ab)`.
#[derive(Debug, Clone)]
pub struct KeyIdentity {
    pub lhs: RationalFn,
    pub summands: [RationalFn; 3],
    pub verified: bool,
}

pub fn key_identity(alpha: &Monomial, beta: &Monomial) -> Result<KeyIdentity, CartierError> {
    if !alpha.is_disjoint(beta) {
        return Err(CartierError::OverlappingSupports(alpha.to_string(), beta.to_string()));
    }
    let ab = alpha.mul(beta);
    let lhs = RationalFn::monomial_over(Monomial::one(), vec![alpha.clone(), beta.clone()])?;
    let summands = [
        RationalFn::monomial_over(alpha.clone(), vec![alpha.clone(), ab.clone()])?,
        RationalFn::monomial_over(beta.clone(), vec![beta.clone(), ab.clone()])?,
        RationalFn::monomial_over(Monomial::one(), vec![ab])?,
    ];
    let verified = rational_eq(&lhs, &RationalFn::sum(summands.iter()));
    Ok(KeyIdentity {
        lhs,
        summands,
        verified,
    })
}

/// Variables of a stuffle term, grouped per component of the term.
/// Ids below `left_count` belong to the left factor (`x_i`), the others to
/// the right one (`x'_j` is id `left_count + j - 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VariableArrangement {
    pub left_count: usize,
    pub groups: Vec<Vec<Var>>,
}

impl VariableArrangement {
    pub fn flatten(&self) -> Vec<Var> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn label(&self, v: Var) -> String {
        let id = v.0 as usize;
        if id < self.left_count {
            format!("x{}", id + 1)
        } else {
            format!("x'{}", id - self.left_count + 1)
        }
    }

    /// True iff every variable `0..total` occurs exactly once.
    pub fn is_permutation_of(&self, total: usize) -> bool {
        let mut flat: Vec<u32> = self.flatten().iter().map(|v| v.0).collect();
        flat.sort();
        flat == (0..total as u32).collect::<Vec<_>>()
    }

    pub fn labels(&self) -> Vec<Vec<String>> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&v| self.label(v)).collect())
            .collect()
    }
}

impl std::fmt::Display for VariableArrangement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let groups: Vec<String> = self.labels().iter().map(|g| g.join(",")).collect();
        write!(f, "({})", groups.join(" | "))
    }
}

impl Serialize for VariableArrangement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

/// Variable blocks `y^k_i` of a composition whose variables start at `first`.
fn blocks(k: &Composition, first: u32) -> Vec<Vec<Var>> {
    let mut start = first;
    k.parts()
        .iter()
        .map(|&part| {
            let b = var_range(start, part as usize);
            start += part;
            b
        })
        .collect()
}

pub fn arrangement_for(
    term: &StuffleTerm,
    k: &Composition,
    l: &Composition,
) -> Result<VariableArrangement, CartierError> {
    if !term.arises_from(k.depth(), l.depth()) {
        return Err(CartierError::ForeignTerm(term.to_string()));
    }
    let n = k.weight();
    let (yk, yl) = (blocks(k, 0), blocks(l, n));
    let groups = term
        .entries
        .iter()
        .map(|e| match *e {
            StuffleEntry::Left(i) => yk[i - 1].clone(),
            StuffleEntry::Right(j) => yl[j - 1].clone(),
            StuffleEntry::Merged(i, j) => {
                let mut g = yk[i - 1].clone();
                g.extend(yl[j - 1].iter().copied());
                g
            }
        })
        .collect();
    Ok(VariableArrangement {
        left_count: n as usize,
        groups,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CartierSummand {
    pub term: StuffleTerm,
    pub composition: Composition,
    pub arrangement: VariableArrangement,
    pub integrand: RationalFn,
}

#[derive(Debug, Clone)]
pub struct CartierDecomposition {
    pub left: Composition,
    pub right: Composition,
    pub summands: Vec<CartierSummand>,
}

impl CartierDecomposition {
    /// `f_k(x) f_l(x')`.
    pub fn product(&self) -> RationalFn {
        let n = self.left.weight();
        let fk = build_f(&self.left, &var_range(0, n as usize)).expect("weight matches");
        let fl = build_f(&self.right, &var_range(n, self.right.weight() as usize))
            .expect("weight matches");
        fk.mul(&fl)
    }

    pub fn summand_sum(&self) -> RationalFn {
        RationalFn::sum(self.summands.iter().map(|s| &s.integrand))
    }

    /// Exact check that the summands add up to the product.
    pub fn is_exact(&self) -> bool {
        rational_eq(&self.product(), &self.summand_sum())
    }

    pub fn to_json(&self, exact: Option<bool>) -> Value {
        let summands: Vec<Value> = self
            .summands
            .iter()
            .map(|s| {
                json!({
                    "sigma": s.composition,
                    "provenance": s.term.to_string(),
                    "arrangement": s.arrangement,
                    "integrand": s.integrand,
                    "display": s.integrand.display_with(&|v| s.arrangement.label(v)),
                })
            })
            .collect();
        let mut out = json!({
            "left": self.left,
            "right": self.right,
            "summand_count": self.summands.len(),
            "summands": summands,
        });
        if let Some(e) = exact {
            out["exact"] = json!(e);
        }
        out
    }
}

/// Splits `f_k(x) f_l(x')` into one summand per stuffle term.
///
/// Writing `P(a, b)` for the product of the first `k_1+..+k_a` variables
/// `x` and the first `l_1+..+l_b` variables `x'`, the summands for the
/// prefixes `(k_1..k_i)`, `(l_1..l_j)` are obtained from those of
/// `(i, j-1)`, `(i-1, j)` and `(i-1, j-1)` by multiplying with
/// `P(i, j-1)`, `P(i-1, j)` and `P(i-1, j-1)` respectively and dividing
/// by `1 - P(i, j)`. The order of summands matches [`stuffle_terms`].
pub fn cartier_decompose(
    k: &Composition,
    l: &Composition,
) -> Result<CartierDecomposition, CartierError> {
    k.require_admissible()?;
    l.require_admissible()?;
    let (p, q) = (k.depth(), l.depth());
    let n = k.weight();
    let x = var_range(0, n as usize);
    let xp = var_range(n, l.weight() as usize);
    let (sk, sl) = (k.partial_sums(), l.partial_sums());
    let prefix = |a: usize, b: usize| {
        let mut vars = if a == 0 { vec![] } else { x[..sk[a - 1] as usize].to_vec() };
        if b > 0 {
            vars.extend_from_slice(&xp[..sl[b - 1]]);
        }
        Monomial::product_of(&vars)
    };

    type Cell = Vec<(StuffleTerm, RationalFn)>;
    let mut table: Vec<Vec<Cell>> = vec![vec![Vec::new(); q + 1]; p + 1];
    for i in 0..=p {
        for j in 0..=q {
            table[i][j] = if j == 0 {
                let ki = Composition::from_parts_unchecked(k.parts()[..i].to_vec());
                vec![(
                    StuffleTerm {
                        entries: (1..=i).map(StuffleEntry::Left).collect(),
                    },
                    if i == 0 {
                        RationalFn::polynomial(super::Polynomial::one())
                    } else {
                        build_f(&ki, &x[..sk[i - 1]])?
                    },
                )]
            } else if i == 0 {
                let lj = Composition::from_parts_unchecked(l.parts()[..j].to_vec());
                vec![(
                    StuffleTerm {
                        entries: (1..=j).map(StuffleEntry::Right).collect(),
                    },
                    build_f(&lj, &xp[..sl[j - 1]])?,
                )]
            } else {
                let top = prefix(i, j);
                let mut out = Vec::new();
                for (from, num, entry) in [
                    ((i, j - 1), prefix(i, j - 1), StuffleEntry::Right(j)),
                    ((i - 1, j), prefix(i - 1, j), StuffleEntry::Left(i)),
                    ((i - 1, j - 1), prefix(i - 1, j - 1), StuffleEntry::Merged(i, j)),
                ] {
                    for (term, f) in &table[from.0][from.1] {
                        let mut entries = term.entries.clone();
                        entries.push(entry);
                        out.push((
                            StuffleTerm { entries },
                            f.mul_monomial(&num).div_one_minus(&top)?,
                        ));
                    }
                }
                out
            };
        }
    }

    let summands = std::mem::take(&mut table[p][q])
        .into_iter()
        .map(|(term, integrand)| {
            Ok(CartierSummand {
                composition: term.composition(k, l),
                arrangement: arrangement_for(&term, k, l)?,
                term,
                integrand,
            })
        })
        .collect::<Result<Vec<_>, CartierError>>()?;
    debug_assert_eq!(
        summands.iter().map(|s| &s.term).collect::<Vec<_>>(),
        stuffle_terms(k, l).iter().collect::<Vec<_>>()
    );
    Ok(CartierDecomposition {
        left: k.clone(),
        right: l.clone(),
        summands,
    })
}

/// Expands `f` by repeatedly applying [`key_identity`] to a pair of
/// denominator factors neither of which divides the other, until the
/// factors of every term form a divisibility chain. Among candidate pairs
/// the one of largest total degree is taken first.
///
/// `f` must have a single-monomial numerator.
pub fn expand_by_key_identity(f: &RationalFn) -> Result<Vec<RationalFn>, CartierError> {
    let (num, coeff) = f.numerator().as_single_term().ok_or_else(|| {
        CartierError::Representation("expansion needs a monomial numerator".into())
    })?;
    if !num_traits::One::is_one(coeff) {
        return Err(CartierError::Representation(
            "expansion needs a monic numerator".into(),
        ));
    }
    let mut pending = vec![(num.clone(), f.denominator().to_vec())];
    let mut done = Vec::new();
    while let Some((num, den)) = pending.pop() {
        let mut best: Option<(u32, usize, usize)> = None;
        for a in 0..den.len() {
            for b in a + 1..den.len() {
                if den[a].divides(&den[b]) || den[b].divides(&den[a]) {
                    continue;
                }
                let deg = den[a].degree() + den[b].degree();
                if best.is_none_or(|(d, _, _)| deg > d) {
                    best = Some((deg, a, b));
                }
            }
        }
        let Some((_, a, b)) = best else {
            done.push(RationalFn::monomial_over(num, den)?);
            continue;
        };
        let ki = key_identity(&den[a], &den[b])?;
        let rest: Vec<Monomial> = den
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, m)| m.clone())
            .collect();
        // Pushed in reverse so the first summand is expanded first.
        for s in ki.summands.iter().rev() {
            let (m, _) = s.numerator().as_single_term().expect("monomial numerator");
            let mut d = rest.clone();
            d.extend(s.denominator().iter().cloned());
            pending.push((num.mul(m), d));
        }
    }
    Ok(done)
}
