//! Integer matrix normal forms on small dense `i64` matrices.

use num_rational::BigRational;
use num_traits::Zero;

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Smith normal form with transforms: `u * m * v == d` where `u`, `v` are
/// unimodular and `d` is diagonal with `d[i][i]` dividing `d[i+1][i+1]`.
/// `v_inv` is the inverse of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub d: Matrix,
    /// Non-zero diagonal entries, all positive.
    pub invariant_factors: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);

    let swap_rows = |a: &mut Matrix, u: &mut Matrix, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
    };
    // row_i += c * row_j
    let add_row = |a: &mut Matrix, u: &mut Matrix, i: usize, j: usize, c: i64| {
        for k in 0..a[i].len() {
            a[i][k] += c * a[j][k];
        }
        for k in 0..u[i].len() {
            u[i][k] += c * u[j][k];
        }
    };
    let swap_cols = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    // col_i += c * col_j; the inverse gets row_j -= c * row_i
    let add_col = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, i: usize, j: usize, c: i64| {
        for row in a.iter_mut() {
            row[i] += c * row[j];
        }
        for row in v.iter_mut() {
            row[i] += c * row[j];
        }
        for k in 0..vi[j].len() {
            vi[j][k] -= c * vi[i][k];
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest non-zero absolute value in the remaining block.
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(a[t][t]);
            if q != 0 {
                add_row(&mut a, &mut u, i, t, -q);
            }
            if a[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(a[t][t]);
            if q != 0 {
                add_col(&mut a, &mut v, &mut v_inv, j, t, -q);
            }
            if a[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisibility: fold an offending row into row t and retry.
        let p = a[t][t];
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
        if let Some(i) = offending {
            add_row(&mut a, &mut u, t, i, 1);
            continue;
        }
        if p < 0 {
            for k in 0..cols {
                a[t][k] = -a[t][k];
            }
            for k in 0..rows {
                u[t][k] = -u[t][k];
            }
        }
        t += 1;
    }
    let invariant_factors = (0..rows.min(cols))
        .map(|i| a[i][i])
        .take_while(|&x| x != 0)
        .collect();
    SmithForm {
        u,
        v,
        v_inv,
        d: a,
        invariant_factors,
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`:
/// returns `(h, t)` with `h = t * rows` restricted to the non-zero rows of
/// the echelon form. Pivots are positive and entries above a pivot lie in
/// `[0, pivot)`.
pub fn hermite_normal_form(rows: &Matrix) -> (Matrix, Matrix) {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a = rows.clone();
    let mut t = identity(k);
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        if r == k {
            break;
        }
        for i in r + 1..k {
            if a[i][col] == 0 {
                continue;
            }
            let (x, y) = (a[r][col], a[i][col]);
            let (g, s, q) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            // [s q; -yg xg] is unimodular
            let row_r: Vec<i64> = (0..n).map(|c| s * a[r][c] + q * a[i][c]).collect();
            let row_i: Vec<i64> = (0..n).map(|c| -yg * a[r][c] + xg * a[i][c]).collect();
            let tr: Vec<i64> = (0..k).map(|c| s * t[r][c] + q * t[i][c]).collect();
            let ti: Vec<i64> = (0..k).map(|c| -yg * t[r][c] + xg * t[i][c]).collect();
            a[r] = row_r;
            a[i] = row_i;
            t[r] = tr;
            t[i] = ti;
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
            t[r].iter_mut().for_each(|x| *x = -*x);
        }
        let p = a[r][col];
        for i in 0..r {
            let q = a[i][col].div_euclid(p);
            if q != 0 {
                for c in 0..n {
                    a[i][c] -= q * a[r][c];
                }
                for c in 0..k {
                    t[i][c] -= q * t[r][c];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    t.truncate(r);
    (a, t)
}

/// Coordinates of `v` in the basis given by the rows of an HNF, if `v` lies
/// in the lattice.
pub fn hnf_coordinates(h: &Matrix, v: &[i64]) -> Option<Vec<i64>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.len());
    for row in h {
        let col = row.iter().position(|&x| x != 0)?;
        if rest[col] % row[col] != 0 {
            return None;
        }
        let c = rest[col] / row[col];
        for (x, &y) in rest.iter_mut().zip(row) {
            *x -= c * y;
        }
        coords.push(c);
    }
    rest.iter().all(|&x| x == 0).then_some(coords)
}

/// Rank over the rationals, by exact Gaussian elimination.
pub fn rational_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[rank][col];
            for c in col..cols {
                let sub = &f * &a[rank][c];
                a[i][c] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant(m: &Matrix) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}
