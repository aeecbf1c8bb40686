use std::f64::consts::PI;

use mzvwb::numerics::{
    mzv, mzv_cube_quadrature, mzv_series, verify_double_shuffle_up_to, verify_relation, Method,
};
use mzvwb::words::{shuffle_relation, stuffle_relation, Composition};
use proptest::prelude::*;

fn comp(p: &[u32]) -> Composition {
    Composition::new(p.to_vec()).unwrap()
}

const Z3: f64 = 1.202_056_903_159_594_2;
const Z5: f64 = 1.036_927_755_143_37;

fn closed_forms() -> Vec<(Composition, f64)> {
    let z2 = PI * PI / 6.0;
    let z4 = PI.powi(4) / 90.0;
    vec![
        (comp(&[2]), z2),
        (comp(&[3]), Z3),
        (comp(&[4]), z4),
        (comp(&[5]), Z5),
        (comp(&[2, 1]), Z3),
        (comp(&[3, 1]), PI.powi(4) / 360.0),
        (comp(&[2, 2]), PI.powi(4) / 120.0),
        (comp(&[2, 1, 1]), z4),
        (comp(&[2, 1, 1, 1]), Z5),
        (comp(&[4, 1]), 2.0 * Z5 - z2 * Z3),
        (comp(&[3, 2]), 3.0 * z2 * Z3 - 5.5 * Z5),
        (comp(&[2, 3]), 4.5 * Z5 - 2.0 * z2 * Z3),
    ]
}

#[test]
fn extrapolated_values_match_closed_forms() {
    for (k, exact) in closed_forms() {
        let v = mzv(&k, 1e-10).unwrap();
        assert_eq!(v.method, Method::SeriesExtrapolation);
        assert!(v.tail_bound <= 1e-10);
        assert!((v.value - exact).abs() <= v.tail_bound.max(4e-15), "{k}: {} vs {exact}", v.value);
    }
}

#[test]
fn spec_values() {
    assert!((mzv(&comp(&[2]), 1e-8).unwrap().value - 1.644_934_06).abs() < 1e-8);
    assert!((mzv(&comp(&[4]), 1e-8).unwrap().value - 1.082_323_23).abs() < 1e-8);
    let z22 = mzv(&comp(&[2, 2]), 1e-8).unwrap().value;
    assert!((z22 - 0.811_742_42).abs() < 1e-8);
    let z2 = mzv(&comp(&[2]), 1e-10).unwrap().value;
    let z4 = mzv(&comp(&[4]), 1e-10).unwrap().value;
    assert!((z22 - (z2 * z2 - z4) / 2.0).abs() < 1e-12);
}

#[test]
fn plain_series_examples() {
    let v = mzv_series(&comp(&[2]), 1_000_000).unwrap();
    assert_eq!(v.method, Method::Series);
    assert!((v.tail_bound - 1e-6).abs() < 1e-8);
    assert!(v.contains(PI * PI / 6.0));
    // zeta(2) - 1/N + 1/(2N^2) - ...
    assert!((v.value - (PI * PI / 6.0 - 1e-6 + 0.5e-12)).abs() < 1e-15);

    // O(N^2) double loop, summing the inner index first.
    let n = 10_000usize;
    let series = mzv_series(&comp(&[2, 1]), n).unwrap();
    let mut brute = 0.0f64;
    let mut harmonic = 0.0f64;
    for n1 in 2..=n {
        harmonic += 1.0 / (n1 - 1) as f64;
        let mut inner = 0.0f64;
        for n2 in 1..n1 {
            inner += 1.0 / n2 as f64;
        }
        assert!((inner - harmonic).abs() < 1e-12);
        brute += inner / (n1 as f64 * n1 as f64);
    }
    assert!((series.value - brute).abs() < 1e-13, "{} vs {brute}", series.value);
    assert!(series.contains(Z3));
}

/// Nested loops over `N >= n_1 > ... > n_p > 0`.
fn brute_force(parts: &[u32], upper: usize) -> f64 {
    if parts.is_empty() {
        return 1.0;
    }
    (1..=upper)
        .rev()
        .map(|n| (n as f64).powi(-(parts[0] as i32)) * brute_force(&parts[1..], n - 1))
        .sum()
}

#[test]
fn oracle_containment_up_to_weight_eight() {
    for w in 2..=8 {
        for k in Composition::admissible_of_weight(w) {
            let cutoff = match k.depth() {
                1 | 2 => 300,
                3 => 80,
                4 => 40,
                _ => 20,
            };
            let head = brute_force(k.parts(), cutoff);
            let plain = mzv_series(&k, cutoff).unwrap();
            assert!((plain.value - head).abs() <= 1e-12 * head, "{k}");
            let v = mzv(&k, 1e-10).unwrap();
            // the brute-force value is a lower bound and the tail bound closes the interval
            assert!(v.value + v.tail_bound >= head, "{k}");
            assert!(v.value - v.tail_bound <= head + plain.tail_bound, "{k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn series_is_monotone_in_cutoff(
        parts in proptest::collection::vec(1u32..4, 0..3),
        first in 2u32..4,
        n in 3usize..200,
    ) {
        let mut all = vec![first];
        all.extend(parts);
        let k = comp(&all);
        let a = mzv_series(&k, n).unwrap();
        let b = mzv_series(&k, n + 1).unwrap();
        prop_assert!(b.value >= a.value);
        let exact = mzv(&k, 1e-10).unwrap();
        prop_assert!(a.value <= exact.value + exact.tail_bound);
        prop_assert!(a.value + a.tail_bound >= exact.value - exact.tail_bound);
    }
}

fn quadrature_order(k: &Composition) -> usize {
    match k.weight() {
        0..=3 => 32,
        4 => 24,
        _ => 16,
    }
}

#[test]
fn quadrature_agrees_with_series_up_to_weight_five() {
    for w in 2..=5 {
        for k in Composition::admissible_of_weight(w) {
            let q = mzv_cube_quadrature(&k, quadrature_order(&k)).unwrap();
            let s = mzv(&k, 1e-10).unwrap();
            let diff = (q.value - s.value).abs();
            assert!(diff <= q.tail_bound + s.tail_bound, "{k}: diff {diff:e}, bound {:e}", q.tail_bound);
        }
    }
}

#[test]
fn quadrature_examples() {
    let z2 = mzv(&comp(&[2]), 1e-6).unwrap().value;
    let q = mzv_cube_quadrature(&comp(&[2]), 32).unwrap();
    assert!((q.value - z2).abs() < 1e-6);
    assert!((q.value - z2).abs() <= 2e-6);
    let q = mzv_cube_quadrature(&comp(&[3]), 32).unwrap();
    assert!((q.value - Z3).abs() < 1e-6);
    let q = mzv_cube_quadrature(&comp(&[2, 1]), 48).unwrap();
    assert!((q.value - Z3).abs() < 1e-5);
}

#[test]
fn relation_examples() {
    let r = verify_relation(&stuffle_relation(&comp(&[2]), &comp(&[2])).unwrap(), 1e-6).unwrap();
    assert!(r.pass);
    let r = verify_relation(&shuffle_relation(&comp(&[2]), &comp(&[2])).unwrap(), 1e-6).unwrap();
    assert!(r.pass);
    assert!(r.absdiff < 1e-13);
}

#[test]
fn batch_counts() {
    assert_eq!(verify_double_shuffle_up_to(4, 1e-6).unwrap().len(), 2);
    let five = verify_double_shuffle_up_to(5, 1e-6).unwrap();
    assert_eq!(five.len(), 6);
    assert!(five.iter().all(|r| r.pass));
}

#[test]
fn double_shuffle_up_to_weight_eight() {
    let reports = verify_double_shuffle_up_to(8, 1e-5).unwrap();
    for r in &reports {
        assert!(r.pass, "{}", r.tsv_row());
        if r.left.weight() + r.right.weight() <= 6 {
            assert!(r.absdiff <= 1e-6);
        }
    }
    let again = verify_double_shuffle_up_to(8, 1e-5).unwrap();
    let key = |r: &mzvwb::numerics::RelationReport| (r.product, r.left.clone(), r.right.clone());
    assert!(reports.iter().map(key).eq(again.iter().map(key)));
}
