use serde::{Deserialize, Serialize};

use super::tail::Expansion;
use super::NumericsError;
use crate::words::Composition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "series")]
    Series,
    #[serde(rename = "series+extrapolation")]
    SeriesExtrapolation,
    #[serde(rename = "quadrature")]
    Quadrature,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::SeriesExtrapolation => "series+extrapolation",
            Method::Quadrature => "quadrature",
        })
    }
}

/// An approximation together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MzvValue {
    pub value: f64,
    pub tail_bound: f64,
    pub method: Method,
}

impl MzvValue {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.tail_bound
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `S_N(k_i..k_p)` for every `i = 1..=p+1` (the last entry, for the empty
/// suffix, is 1). Each level is one pass of running sums:
/// `A_i(m) = sum_{t <= m} t^-k_i A_{i+1}(t - 1)`.
pub(crate) fn suffix_partial_sums(parts: &[u32], n: usize) -> Vec<f64> {
    let p = parts.len();
    let mut out = vec![1.0; p + 1];
    // below[m] = A_{i+1}(m) for m = 0..=n
    let mut below = vec![1.0; n + 1];
    for i in (0..p).rev() {
        let mut level = vec![0.0; n + 1];
        let mut acc = CompensatedSum::default();
        let k = parts[i] as i32;
        for m in 1..=n {
            acc.add((m as f64).powi(-k) * below[m - 1]);
            level[m] = acc.value();
        }
        out[i] = level[n];
        below = level;
    }
    out
}

fn require_admissible(k: &Composition) -> Result<(), NumericsError> {
    if !k.is_admissible() {
        return Err(NumericsError::Divergent(k.clone()));
    }
    Ok(())
}

/// `sum_{n > N} n^-s (1 + ln n)^a`, bounded above by the integral from the
/// point where the summand starts decreasing.
fn log_power_tail(s: u32, a: u32, n: usize) -> f64 {
    let decreasing_from = ((a as f64 / s as f64) - 1.0).exp().ceil().max(1.0) as usize;
    let term = |m: usize| (m as f64).powi(-(s as i32)) * (1.0 + (m as f64).ln()).powi(a as i32);
    let mut explicit = 0.0;
    let mut start = n;
    while start < decreasing_from {
        start += 1;
        explicit += term(start);
    }
    // int_X^inf x^-s (1 + ln x)^a dx = X^-c sum_j a!/(a-j)! V^(a-j) / c^(j+1)
    let c = (s - 1) as f64;
    let x = start as f64;
    let v = 1.0 + x.ln();
    let mut sum = 0.0;
    let mut falling = 1.0;
    for j in 0..=a {
        sum += falling * v.powi((a - j) as i32) / c.powi(j as i32 + 1);
        falling *= (a - j) as f64;
    }
    explicit + x.powf(-c) * sum
}

/// Upper bound for `zeta(k)` with `k >= 2`.
fn zeta_upper(k: u32) -> f64 {
    let head: f64 = (1..=64).map(|n| (n as f64).powi(-(k as i32))).sum();
    head + 64f64.powi(1 - k as i32) / (k as f64 - 1.0) + 1e-15
}

/// Bound on `zeta(k) - S_N(k)`: the inner sums are bounded by a product of
/// `zeta(k_i)` for parts `k_i >= 2` and of `1 + ln n` for parts equal to 1.
pub(crate) fn series_tail_bound(k: &Composition, n: usize) -> f64 {
    let parts = k.parts();
    let ones = parts[1..].iter().filter(|&&x| x == 1).count() as u32;
    let z: f64 = parts[1..]
        .iter()
        .filter(|&&x| x >= 2)
        .map(|&x| zeta_upper(x))
        .product();
    z * log_power_tail(parts[0], ones, n)
}

/// Truncated nested series `sum_{N >= n_1 > ... > n_p > 0}`.
pub fn mzv_series(k: &Composition, n: usize) -> Result<MzvValue, NumericsError> {
    require_admissible(k)?;
    if n < k.depth() {
        return Err(NumericsError::Cutoff {
            cutoff: n,
            depth: k.depth(),
        });
    }
    let value = suffix_partial_sums(k.parts(), n)[0];
    Ok(MzvValue {
        value,
        tail_bound: series_tail_bound(k, n) + 4.0 * f64::EPSILON * value,
        method: Method::Series,
    })
}

pub const MIN_TOLERANCE: f64 = 1e-10;

const MAX_CUTOFF: usize = 1 << 14;

/// Extra exponents kept in the tail expansions beyond the weight.
const EXTRA_EXPONENTS: usize = 40;

fn extrapolated(k: &Composition, n: usize) -> MzvValue {
    let parts = k.parts();
    let p = parts.len();
    let heads = suffix_partial_sums(parts, n);
    let max_exp = k.weight() as usize + EXTRA_EXPONENTS;
    let mut total = CompensatedSum::default();
    let mut truncation = 0.0;
    for j in 0..=p {
        let (t, last) = Expansion::tail(&parts[..j], max_exp).eval(n as f64, 8);
        total.add(t * heads[j]);
        truncation += last * heads[j].abs();
    }
    let value = total.value();
    MzvValue {
        value,
        tail_bound: truncation + 1e-14 * (p + 1) as f64 * value.abs().max(1.0),
        method: Method::SeriesExtrapolation,
    }
}

/// `zeta(k)` to within `tol`. The sum is split according to how many of the
/// indices exceed a cutoff `N`: the indices below `N` are summed directly
/// and the sums over indices above `N` are replaced by their expansions in
/// `1/N`.
pub fn mzv(k: &Composition, tol: f64) -> Result<MzvValue, NumericsError> {
    require_admissible(k)?;
    if !(tol >= MIN_TOLERANCE) {
        return Err(NumericsError::Tolerance(tol));
    }
    let mut n = 64;
    loop {
        let v = extrapolated(k, n);
        if v.tail_bound <= tol {
            return Ok(v);
        }
        if n >= MAX_CUTOFF {
            return Err(NumericsError::Budget {
                tol,
                achieved: v.tail_bound,
            });
        }
        n *= 2;
    }
}
