use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::{CartierError, Monomial, Polynomial, Var};

/// `numerator / prod (1 - M)` where each `M` is a square-free, non-unit
/// monomial. Factors are kept sorted; repeated factors are allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFn {
    numerator: Polynomial,
    denominator: Vec<Monomial>,
}

fn check_factor(m: &Monomial) -> Result<(), CartierError> {
    if m.is_one() {
        return Err(CartierError::Representation(
            "denominator factor 1 - 1 vanishes identically".into(),
        ));
    }
    if !m.is_square_free() {
        return Err(CartierError::Representation(format!(
            "1 - {m} is not a square-free monomial difference"
        )));
    }
    Ok(())
}

impl RationalFn {
    pub fn new(numerator: Polynomial, mut denominator: Vec<Monomial>) -> Result<Self, CartierError> {
        for m in &denominator {
            check_factor(m)?;
        }
        denominator.sort();
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            numerator: p,
            denominator: Vec::new(),
        }
    }

    /// `num / prod (1 - den_i)` with a monomial numerator.
    pub fn monomial_over(num: Monomial, den: Vec<Monomial>) -> Result<Self, CartierError> {
        Self::new(Polynomial::monomial(num, BigRational::one()), den)
    }

    /// Builds `numerator / denominator` from a general denominator
    /// polynomial, which must be a product of `1 - M` factors supplied
    /// explicitly; used to reject inputs such as `1 - x1^2`.
    pub fn from_factors(
        numerator: Polynomial,
        factors: &[Polynomial],
    ) -> Result<Self, CartierError> {
        let mut den = Vec::with_capacity(factors.len());
        for f in factors {
            den.push(as_one_minus(f).ok_or_else(|| {
                CartierError::Representation(format!("{f} is not of the form 1 - M"))
            })?);
        }
        Self::new(numerator, den)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Monomial] {
        &self.denominator
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.numerator.variables();
        vs.extend(self.denominator.iter().flat_map(|m| m.support().collect::<Vec<_>>()));
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        let mut den = self.denominator.clone();
        den.extend(other.denominator.iter().cloned());
        den.sort();
        RationalFn {
            numerator: &self.numerator * &other.numerator,
            denominator: den,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RationalFn {
        RationalFn {
            numerator: self.numerator.mul_monomial(m),
            denominator: self.denominator.clone(),
        }
    }

    /// Multiplies by `1 / (1 - m)`.
    pub fn div_one_minus(&self, m: &Monomial) -> Result<RationalFn, CartierError> {
        check_factor(m)?;
        let mut den = self.denominator.clone();
        den.push(m.clone());
        den.sort();
        Ok(RationalFn {
            numerator: self.numerator.clone(),
            denominator: den,
        })
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> RationalFn {
        let mut den: Vec<Monomial> = self.denominator.iter().map(|m| m.rename(&f)).collect();
        den.sort();
        RationalFn {
            numerator: self.numerator.rename(&f),
            denominator: den,
        }
    }

    /// Numerator of `self` once written over the common denominator `common`,
    /// which must contain this function's denominator as a sub-multiset.
    fn numerator_over(&self, common: &[Monomial]) -> Polynomial {
        let mut remaining = multiset(common);
        for m in &self.denominator {
            let c = remaining.get_mut(m).expect("common denominator must cover");
            *c -= 1;
        }
        let mut num = self.numerator.clone();
        for (m, c) in remaining {
            let factor = Polynomial::one_minus(&m);
            for _ in 0..c {
                num = &num * &factor;
            }
        }
        num
    }

    /// Sum over a least common denominator (union of factor multisets).
    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a RationalFn>) -> RationalFn {
        let terms: Vec<&RationalFn> = terms.into_iter().collect();
        let common = union_denominator(terms.iter().map(|t| t.denominator.as_slice()));
        let mut num = Polynomial::zero();
        for t in &terms {
            num.add_assign_scaled(&t.numerator_over(&common), &BigRational::one());
        }
        RationalFn {
            numerator: num,
            denominator: common,
        }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        RationalFn::sum([self, other])
    }

    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational, CartierError> {
        let value = |v: Var| point.get(&v).cloned();
        let missing = || {
            let v = self
                .variables()
                .into_iter()
                .find(|v| !point.contains_key(v))
                .expect("some variable is missing");
            CartierError::MissingVariable(v.name())
        };
        let mut den = BigRational::one();
        for m in &self.denominator {
            let d = BigRational::one() - m.eval(value).ok_or_else(missing)?;
            if d.is_zero() {
                return Err(CartierError::Pole(format!("1 - {m} vanishes")));
            }
            den *= d;
        }
        Ok(self.numerator.eval(&value).ok_or_else(missing)? / den)
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        let mut num = 0.0;
        for (m, c) in self.numerator.terms() {
            num += rational_to_f64(c) * m.eval_f64(&value);
        }
        let den: f64 = self
            .denominator
            .iter()
            .map(|m| 1.0 - m.eval_f64(&value))
            .product();
        num / den
    }

    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        let num = self.numerator.display_with(name);
        if self.denominator.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|m| format!("(1 - {})", m.display_with(name)))
            .collect();
        format!("({}) / ({})", num, den.join("*"))
    }

    pub fn to_json(&self) -> Value {
        let mono = |m: &Monomial| {
            let mut map = Map::new();
            for &(v, e) in m.powers() {
                map.insert(v.name(), json!(e));
            }
            Value::Object(map)
        };
        let num: Vec<Value> = self
            .numerator
            .terms()
            .map(|(m, c)| json!([c.to_string(), mono(m)]))
            .collect();
        let den: Vec<Value> = self.denominator.iter().map(|m| json!([mono(m)])).collect();
        json!({ "num": num, "den": den })
    }

    pub fn from_json(value: &Value) -> Result<Self, CartierError> {
        let bad = |what: &str| CartierError::Representation(format!("malformed RationalFn JSON: {what}"));
        let mono = |v: &Value| -> Result<Monomial, CartierError> {
            let obj = v.as_object().ok_or_else(|| bad("monomial must be an object"))?;
            let mut powers = Vec::new();
            for (name, e) in obj {
                let id: u32 = name
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| bad("variable names are x1, x2, ..."))?;
                let e = e.as_u64().ok_or_else(|| bad("exponent must be a non-negative integer"))?;
                powers.push((Var(id - 1), e as u32));
            }
            Ok(Monomial::from_powers(powers))
        };
        let mut num = Polynomial::zero();
        for row in value["num"].as_array().ok_or_else(|| bad("num must be a list"))? {
            let c = row[0].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            num.add_term(mono(&row[1])?, parse_rational(c).ok_or_else(|| bad("coefficient"))?);
        }
        let mut den = Vec::new();
        for row in value["den"].as_array().ok_or_else(|| bad("den must be a list"))? {
            den.push(mono(&row[0])?);
        }
        RationalFn::new(num, den)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|v| v.name()))
    }
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        RationalFn::from_json(&v).map_err(D::Error::custom)
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// If `p = 1 - M` for a monomial `M`, returns `M`.
fn as_one_minus(p: &Polynomial) -> Option<Monomial> {
    if p.len() != 2 {
        return None;
    }
    let mut constant_ok = false;
    let mut mono = None;
    for (m, c) in p.terms() {
        if m.is_one() && c.is_one() {
            constant_ok = true;
        } else if !m.is_one() && *c == -BigRational::one() {
            mono = Some(m.clone());
        }
    }
    if constant_ok {
        mono
    } else {
        None
    }
}

fn multiset(ms: &[Monomial]) -> BTreeMap<Monomial, u32> {
    let mut out = BTreeMap::new();
    for m in ms {
        *out.entry(m.clone()).or_insert(0) += 1;
    }
    out
}

fn union_denominator<'a>(dens: impl Iterator<Item = &'a [Monomial]>) -> Vec<Monomial> {
    let mut max: BTreeMap<Monomial, u32> = BTreeMap::new();
    for d in dens {
        for (m, c) in multiset(d) {
            let e = max.entry(m).or_insert(0);
            *e = (*e).max(c);
        }
    }
    max.into_iter()
        .flat_map(|(m, c)| std::iter::repeat_n(m, c as usize))
        .collect()
}

/// Exact equality: both sides are brought over the union of their
/// denominators and the numerators compared.
pub fn rational_eq(f: &RationalFn, g: &RationalFn) -> bool {
    if f == g {
        return true;
    }
    let common = union_denominator([f.denominator(), g.denominator()].into_iter());
    f.numerator_over(&common) == g.numerator_over(&common)
}

pub fn eval_rational(
    f: &RationalFn,
    point: &BTreeMap<Var, BigRational>,
) -> Result<BigRational, CartierError> {
    f.eval(point)
}

/// Compares `f` and `g` at `count` fixed rational points of `(0,1)^n`.
/// Fast but not conclusive when it returns true.
pub fn agree_at_fixed_points(f: &RationalFn, g: &RationalFn, count: usize) -> bool {
    let mut vars = f.variables();
    vars.extend(g.variables());
    vars.sort();
    vars.dedup();
    (0..count).all(|i| {
        let point: BTreeMap<Var, BigRational> = vars
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let num = ((i * 37 + j * 53 + 11) % 97) as i64 + 1;
                (v, BigRational::new(num.into(), 99.into()))
            })
            .collect();
        match (f.eval(&point), g.eval(&point)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    })
}
