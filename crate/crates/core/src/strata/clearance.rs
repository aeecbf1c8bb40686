use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{StrataError, Subset};
use crate::cartier::{Polynomial, Var};

/// `e[k]` is the k-th elementary symmetric polynomial of `xs`.
fn elementary_symmetric(xs: &[Polynomial]) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::one()];
    for x in xs {
        e.push(Polynomial::zero());
        for k in (1..e.len()).rev() {
            let add = &e[k - 1] * x;
            e[k] = &e[k] + &add;
        }
    }
    e
}

fn sigma(e: &[Polynomial], k: usize) -> Polynomial {
    e.get(k).cloned().unwrap_or_else(Polynomial::zero)
}

/// Checks `sigma_k(l, l X_1, ..., l X_p) = l^k (sigma_{k-1}(X) + sigma_k(X))`
/// for `1 <= k <= p + 1` by exact expansion.
pub fn sigma_identity_check(p: usize) -> Result<bool, StrataError> {
    if !(1..=6).contains(&p) {
        return Err(StrataError::SigmaDegree(p));
    }
    let lambda = Polynomial::var(Var(0));
    let xs: Vec<Polynomial> = (1..=p as u32).map(|i| Polynomial::var(Var(i))).collect();
    let mut scaled = vec![lambda.clone()];
    scaled.extend(xs.iter().map(|x| &lambda * x));
    let lhs = elementary_symmetric(&scaled);
    let rhs = elementary_symmetric(&xs);
    Ok((1..=p + 1).all(|k| {
        let right = &lambda.pow(k as u32) * &(&sigma(&rhs, k - 1) + &sigma(&rhs, k));
        sigma(&lhs, k) == right
    }))
}

/// For `I = {i_0 < ... < i_p}` the blocks `J_0 = {1..i_0}` and
/// `J_k = {i_0 + 1..i_k}`, with `y_i = s_1 ... s_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClearanceSetup {
    pub subset: Subset,
    pub n: usize,
    pub j0: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

impl ClearanceSetup {
    pub fn new(subset: Subset, n: usize) -> Result<Self, StrataError> {
        subset.validate(n)?;
        if subset.len() < 2 {
            return Err(StrataError::SmallSubset(subset));
        }
        let elems = subset.elements();
        let i0 = elems[0];
        Ok(Self {
            subset,
            n,
            j0: (1..=i0).collect(),
            blocks: elems[1..].iter().map(|&ik| (i0 + 1..=ik).collect()).collect(),
        })
    }

    pub fn p(&self) -> usize {
        self.blocks.len()
    }

    fn product(idx: &[usize]) -> Polynomial {
        idx.iter()
            .fold(Polynomial::one(), |acc, &i| &acc * &Polynomial::var(Var(i as u32 - 1)))
    }

    /// `prod J_0`, playing the role of the scaling variable.
    pub fn lambda(&self) -> Polynomial {
        Self::product(&self.j0)
    }

    pub fn block_products(&self) -> Vec<Polynomial> {
        self.blocks.iter().map(|b| Self::product(b)).collect()
    }

    /// `1 - prod_{i in I} (1 - y_i)`, the equation of `A_I` in `y`-coordinates.
    pub fn divisor_equation(&self) -> Polynomial {
        let prod = self.subset.elements().iter().fold(Polynomial::one(), |acc, &i| {
            let y = Self::product(&(1..=i).collect::<Vec<_>>());
            &acc * &(&Polynomial::one() - &y)
        });
        &Polynomial::one() - &prod
    }

    /// `sum_{k=1}^{p+1} (-1)^(k-1) sigma_k(y_{i_0}, ..., y_{i_p})`.
    pub fn sigma_expansion(&self) -> Polynomial {
        let lambda = self.lambda();
        let mut ys = vec![lambda.clone()];
        ys.extend(self.block_products().iter().map(|b| &lambda * b));
        alternating_sum(&elementary_symmetric(&ys), 1, self.p() + 1)
    }

    /// `(1 - prod_j (1 - l P_j)) + l prod_j (1 - l P_j)`, the rewritten form
    /// multiplied through by `l = prod J_0`.
    pub fn rewritten_times_lambda(&self) -> Polynomial {
        let lambda = self.lambda();
        let prod = self.block_products().iter().fold(Polynomial::one(), |acc, b| {
            &acc * &(&Polynomial::one() - &(&lambda * b))
        });
        &(&Polynomial::one() - &prod) + &(&lambda * &prod)
    }
}

/// `sum_{k=from}^{to} (-1)^(k-from) sigma_k`.
fn alternating_sum(e: &[Polynomial], from: usize, to: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for k in from..=to {
        let term = sigma(e, k);
        out = if (k - from).is_multiple_of(2) { &out + &term } else { &out - &term };
    }
    out
}

/// The equation of the proper transform in `s`-coordinates:
/// `sum_{k=0}^{p} (-1)^k l^k (sigma_k(P) + sigma_{k+1}(P))`.
pub fn clearance_bracket(setup: &ClearanceSetup) -> Polynomial {
    let lambda = setup.lambda();
    let e = elementary_symmetric(&setup.block_products());
    let mut out = Polynomial::zero();
    for k in 0..=setup.p() {
        let term = &lambda.pow(k as u32) * &(&sigma(&e, k) + &sigma(&e, k + 1));
        out = if k % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// The same bracket with the last term `(-1)^p sigma_p(P)` taken without its
/// factor `l^p`.
pub fn literal_bracket(setup: &ClearanceSetup) -> Polynomial {
    let lambda = setup.lambda();
    let p = setup.p();
    let e = elementary_symmetric(&setup.block_products());
    let mut out = &Polynomial::one() + &sigma(&e, 1);
    for k in 1..p {
        let term = &lambda.pow(k as u32) * &(&sigma(&e, k) + &sigma(&e, k + 1));
        out = if k % 2 == 0 { &out + &term } else { &out - &term };
    }
    let last = sigma(&e, p);
    if p.is_multiple_of(2) {
        &out + &last
    } else {
        &out - &last
    }
}

fn check_sample(setup: &ClearanceSetup, s: &[BigRational]) -> Result<(), StrataError> {
    if s.len() != setup.n {
        return Err(StrataError::InvalidSample(format!(
            "expected {} coordinates, got {}",
            setup.n,
            s.len()
        )));
    }
    let mut prefix = BigRational::one();
    for (i, v) in s.iter().enumerate() {
        if v.is_negative() {
            return Err(StrataError::InvalidSample(format!("s{} = {v} is negative", i + 1)));
        }
        if i < setup.j0.len() && *v > BigRational::one() {
            return Err(StrataError::InvalidSample(format!("s{} = {v} exceeds 1", i + 1)));
        }
        prefix *= v;
        if prefix > BigRational::one() {
            return Err(StrataError::InvalidSample(format!(
                "s1...s{} = {prefix} exceeds 1",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Exact value of the bracket at `s`; coordinates in `J_0` may be zero.
pub fn clearance_value(setup: &ClearanceSetup, s: &[BigRational]) -> Result<BigRational, StrataError> {
    check_sample(setup, s)?;
    Ok(clearance_bracket(setup)
        .eval(&|v: Var| s.get(v.0 as usize).cloned())
        .expect("all coordinates are given"))
}

pub const SAMPLE_DENOMINATOR: i64 = 1 << 16;

/// Draws `s` with `J_0` coordinates in `(0, 1]` and the others in `[0, 2]`,
/// redrawing each coordinate until the running product stays at most 1.
fn draw_sample(setup: &ClearanceSetup, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let den = BigInt::from(SAMPLE_DENOMINATOR);
    let mut prefix = BigRational::one();
    let mut out = Vec::with_capacity(setup.n);
    for i in 0..setup.n {
        let v = if i < setup.j0.len() {
            BigRational::new(BigInt::from(rng.gen_range(1..=SAMPLE_DENOMINATOR)), den.clone())
        } else {
            loop {
                let v = BigRational::new(
                    BigInt::from(rng.gen_range(0..=2 * SAMPLE_DENOMINATOR)),
                    den.clone(),
                );
                if &prefix * &v <= BigRational::one() {
                    break v;
                }
            }
        };
        prefix *= &v;
        out.push(v);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ClearanceReport {
    pub subset: Subset,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// `l` times the rewritten form equals the sigma expansion.
    pub rewrite_matches: bool,
    /// The sigma expansion equals `1 - prod (1 - y_i)`.
    pub expansion_matches: bool,
    /// `l` times the bracket equals the sigma expansion.
    pub bracket_matches: bool,
    /// Same test for the bracket whose last term lacks `l^p`.
    pub literal_bracket_matches: bool,
    /// At `l = 0` the bracket reduces to `1 + sigma_1(P)`.
    pub boundary_limit_matches: bool,
    pub positive_samples: usize,
    pub min_value: f64,
    pub pass: bool,
}

/// Symbolic identities for the bracket of `A_I` plus positivity of its
/// exact value at `samples` random points of the closed cube chart.
pub fn boundary_clearance_check(
    subset: Subset,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ClearanceReport, StrataError> {
    let setup = ClearanceSetup::new(subset, n)?;
    let lambda = setup.lambda();
    let expansion = setup.sigma_expansion();
    let bracket = clearance_bracket(&setup);
    let rewrite_matches = setup.rewritten_times_lambda() == expansion;
    let expansion_matches = setup.divisor_equation() == expansion;
    let bracket_matches = &lambda * &bracket == expansion;
    let literal_bracket_matches = &lambda * &literal_bracket(&setup) == expansion;

    let e = elementary_symmetric(&setup.block_products());
    // Generic point on the boundary component l = 0.
    let probe = |v: Var| {
        Some(if v.0 == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(7 + i64::from(v.0)), BigInt::from(13))
        })
    };
    let at_zero = bracket.eval(&probe).expect("total assignment");
    let limit = (&Polynomial::one() + &sigma(&e, 1))
        .eval(&probe)
        .expect("total assignment");
    let boundary_limit_matches = at_zero == limit;

    // Each sample gets its own stream so the result does not depend on
    // scheduling.
    let values: Vec<BigRational> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let s = draw_sample(&setup, &mut rng);
            clearance_value(&setup, &s).expect("sampler stays in the domain")
        })
        .collect();
    let positive_samples = values.iter().filter(|v| v.is_positive()).count();
    let min_value = values
        .iter()
        .map(crate::cartier::rational_to_f64)
        .fold(f64::INFINITY, f64::min);
    let pass = rewrite_matches
        && expansion_matches
        && bracket_matches
        && boundary_limit_matches
        && positive_samples == samples;
    Ok(ClearanceReport {
        subset,
        n,
        samples,
        seed,
        rewrite_matches,
        expansion_matches,
        bracket_matches,
        literal_bracket_matches,
        boundary_limit_matches,
        positive_samples,
        min_value,
        pass,
    })
}
