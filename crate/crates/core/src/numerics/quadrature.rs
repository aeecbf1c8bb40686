use rayon::prelude::*;

use super::series::{Method, MzvValue};
use super::NumericsError;
use crate::words::Composition;

/// Largest weight accepted by [`mzv_cube_quadrature`]; the grid has
/// `order^weight` points.
pub const MAX_QUADRATURE_WEIGHT: u32 = 6;

/// Exponent of the graded substitution `x = 1 - (1 - u)^q`.
const GRADING: i32 = 4;

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Initial guess for the i-th root of P_n on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// Nodes for `int_0^1 g(x) dx` after `x = 1 - (1 - u)^q`, stored as
/// `(x, 1 - x, weight * dx/du)`; keeping `1 - x` separately avoids
/// cancellation near the singular corner.
fn graded_nodes(order: usize) -> Vec<(f64, f64, f64)> {
    gauss_legendre(order)
        .into_iter()
        .map(|(u, w)| {
            let one_minus = (1.0 - u).powi(GRADING);
            let jac = GRADING as f64 * (1.0 - u).powi(GRADING - 1);
            (1.0 - one_minus, one_minus, w * jac)
        })
        .collect()
}

/// `int_{[0,1]^n} f_k` on a tensor grid. `boundaries[d]` is true when a
/// partial product `P_i` ends after coordinate `d`.
fn tensor_integral(k: &Composition, order: usize) -> f64 {
    let nodes = graded_nodes(order);
    let n = k.weight() as usize;
    let mut boundary = vec![false; n];
    for &s in &k.partial_sums() {
        boundary[s - 1] = true;
    }
    let last = n - 1;

    // prod: P so far, rest: 1 - P so far, acc: weights and completed factors.
    fn walk(
        d: usize,
        prod: f64,
        rest: f64,
        acc: f64,
        nodes: &[(f64, f64, f64)],
        boundary: &[bool],
        last: usize,
    ) -> f64 {
        let mut sum = 0.0;
        for &(x, one_minus_x, w) in nodes {
            let p = prod * x;
            let r = rest + prod * one_minus_x;
            let mut a = acc * w;
            if boundary[d] {
                a *= if d == last { 1.0 / r } else { p / r };
            }
            sum += if d == last {
                a
            } else {
                walk(d + 1, p, r, a, nodes, boundary, last)
            };
        }
        sum
    }

    // Split the first coordinate across workers.
    nodes
        .par_iter()
        .map(|&(x, one_minus_x, w)| {
            let mut a = w;
            if boundary[0] {
                a *= if last == 0 { 1.0 / one_minus_x } else { x / one_minus_x };
            }
            if last == 0 {
                a
            } else {
                walk(1, x, one_minus_x, a, &nodes, &boundary, last)
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// Tensor-product Gauss-Legendre approximation of `zeta(k)` as the cube
/// integral of `f_k`, in graded coordinates `x = 1 - (1 - u)^4` that
/// cluster nodes at the singular corner. The error estimate is the
/// difference to the same rule at half the order.
pub fn mzv_cube_quadrature(k: &Composition, order: usize) -> Result<MzvValue, NumericsError> {
    if !k.is_admissible() {
        return Err(NumericsError::Divergent(k.clone()));
    }
    if k.weight() > MAX_QUADRATURE_WEIGHT {
        return Err(NumericsError::Cost {
            weight: k.weight(),
            max: MAX_QUADRATURE_WEIGHT,
        });
    }
    if order < 2 || !order.is_multiple_of(2) {
        return Err(NumericsError::Order(order));
    }
    let fine = tensor_integral(k, order);
    let coarse = tensor_integral(k, order / 2);
    Ok(MzvValue {
        value: fine,
        tail_bound: (fine - coarse).abs(),
        method: Method::Quadrature,
    })
}
