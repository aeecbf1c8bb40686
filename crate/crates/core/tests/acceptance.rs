//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mzvwb::cartier::{build_f, cartier_decompose, rational_eq, var_range, Monomial, RationalFn};
use mzvwb::coords::{delta_map, pullback_check, MarkedPointConfig};
use mzvwb::numerics::{mzv, mzv_cube_quadrature, verify_double_shuffle_up_to};
use mzvwb::strata::{
    boundary_clearance_check, intersection_type, interval_flag_family, sigma_identity_check,
    validate_flags, Subset,
};
use mzvwb::words::{shuffle, stuffle, BinaryWord, Composition, FormalSum};
use mzvwb::BigRational;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn comp(p: &[u32]) -> Composition {
    Composition::new(p.to_vec()).unwrap()
}

fn ordered_pairs(max_weight: u32) -> Vec<(Composition, Composition)> {
    let mut out = Vec::new();
    for wk in 2..=max_weight - 2 {
        for wl in 2..=max_weight - wk {
            for k in Composition::admissible_of_weight(wk) {
                for l in Composition::admissible_of_weight(wl) {
                    out.push((k.clone(), l));
                }
            }
        }
    }
    out
}

fn stuffle_fixed_point() -> Outcome {
    let got = stuffle(&comp(&[2]), &comp(&[2]));
    let expected: FormalSum<Composition> = [(comp(&[2, 2]), 2), (comp(&[4]), 1)].into_iter().collect();
    ensure(got == expected, || format!("got {got}"))?;
    Ok(format!("(2)*(2) = {got}"))
}

fn double_shuffle() -> Outcome {
    let start = Instant::now();
    let reports = verify_double_shuffle_up_to(8, 1e-5).map_err(|e| e.to_string())?;
    let mut worst_low = 0.0f64;
    for r in &reports {
        ensure(r.pass, || format!("failed: {}", r.tsv_row()))?;
        if r.left.weight() + r.right.weight() <= 6 {
            worst_low = worst_low.max(r.absdiff);
        }
    }
    ensure(worst_low <= 1e-6, || format!("weight <= 6 absdiff {worst_low:e} above 1e-6"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} relations pass at 1e-5, max absdiff {worst_low:.1e} for weight <= 6, {elapsed:.1?}",
        reports.len()
    ))
}

fn cartier_exactness() -> Outcome {
    let start = Instant::now();
    let pairs = ordered_pairs(8);
    for (k, l) in &pairs {
        let d = cartier_decompose(k, l).map_err(|e| e.to_string())?;
        ensure(d.is_exact(), || format!("{k} * {l} is not exact"))?;
    }
    let d = cartier_decompose(&comp(&[2, 1]), &comp(&[2, 1])).unwrap();
    let u = var_range(0, 6);
    let mixed = Monomial::product_of(&[u[0], u[1], u[3], u[4]]);
    let expected = RationalFn::monomial_over(mixed.clone(), vec![mixed, Monomial::product_of(&u)]).unwrap();
    ensure(d.summands.iter().any(|s| s.integrand == expected), || {
        "summand u1u2u4u5/((1-u1u2u4u5)(1-u1...u6)) missing from (2,1)*(2,1)".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{} ordered pairs exact, mixed summand present, {elapsed:.1?}", pairs.len()))
}

fn pullback_fixed_points() -> Outcome {
    let x = var_range(0, 4);
    let p12 = Monomial::product_of(&x[..2]);
    let all = Monomial::product_of(&x);
    let cases = [
        (comp(&[2]), RationalFn::monomial_over(Monomial::one(), vec![p12.clone()]).unwrap()),
        (comp(&[4]), RationalFn::monomial_over(Monomial::one(), vec![all.clone()]).unwrap()),
        (comp(&[2, 2]), RationalFn::monomial_over(p12.clone(), vec![p12, all]).unwrap()),
    ];
    for (k, integrand) in &cases {
        let r = pullback_check(k).map_err(|e| e.to_string())?;
        ensure(r.matches && rational_eq(&r.integrand, integrand), || format!("{k}: got {}", r.integrand))?;
    }
    let mut count = 0;
    for w in 2..=6 {
        for k in Composition::admissible_of_weight(w) {
            let r = pullback_check(&k).map_err(|e| e.to_string())?;
            ensure(r.matches, || format!("{k} does not pull back to f_k"))?;
            ensure(
                rational_eq(&r.integrand, &build_f(&k, &var_range(0, w as usize)).unwrap()),
                || format!("{k}"),
            )?;
            count += 1;
        }
    }
    Ok(format!("(2), (4), (2,2) reproduce the cube integrands; {count} compositions of weight <= 6 match"))
}

fn binomial(a: u64, b: u64) -> u64 {
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

/// Lattice-path recursion, independent of the stuffle implementation.
fn delannoy_oracle(p: usize, q: usize) -> i64 {
    if p == 0 || q == 0 {
        return 1;
    }
    delannoy_oracle(p - 1, q) + delannoy_oracle(p, q - 1) + delannoy_oracle(p - 1, q - 1)
}

fn random_composition(rng: &mut ChaCha8Rng, depth: usize) -> Composition {
    let mut parts: Vec<u32> = (0..depth).map(|_| rng.gen_range(1..=3)).collect();
    parts[0] = rng.gen_range(2..=3);
    comp(&parts)
}

fn counting_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut shuffles = 0;
    for total in 0..=12usize {
        for n in 0..=total {
            for _ in 0..3 {
                let u = BinaryWord::new((0..n).map(|_| rng.gen_range(0..=1)).collect()).unwrap();
                let v = BinaryWord::new((0..total - n).map(|_| rng.gen_range(0..=1)).collect()).unwrap();
                let mass = shuffle(&u, &v).mass();
                let expected = binomial(total as u64, n as u64) as i64;
                ensure(mass == expected, || format!("|{u} sh {v}| = {mass}, expected {expected}"))?;
                shuffles += 1;
            }
        }
    }
    for (p, q, d) in [(1, 1, 3), (2, 1, 5), (2, 2, 13)] {
        ensure(delannoy_oracle(p, q) == d, || format!("D({p},{q}) oracle"))?;
    }
    for p in 1..=6 {
        for q in 1..=6 {
            let k = random_composition(&mut rng, p);
            let l = random_composition(&mut rng, q);
            let mass = stuffle(&k, &l).mass();
            ensure(mass == delannoy_oracle(p, q), || format!("|{k} * {l}| = {mass}"))?;
        }
    }
    Ok(format!("{shuffles} shuffles of total length <= 12 and 36 stuffles of depth <= 6 have the expected mass"))
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
            }
        }
        r += 1;
    }
    r
}

fn snf_oracle() -> Outcome {
    let sets = [
        Subset::from_elements(&[1, 2]),
        Subset::from_elements(&[2, 3]),
        Subset::from_elements(&[1, 3]),
    ];
    let class = intersection_type(&sets, 3).map_err(|e| e.to_string())?;
    ensure(class.invariant_factors == vec![1, 1, 2], || format!("{:?}", class.invariant_factors))?;
    // roots of unity of order 12 and zero, as exponents mod 12
    let values: Vec<Option<i64>> = std::iter::once(None).chain((0..12).map(Some)).collect();
    let mut solutions = Vec::new();
    for a in &values {
        for b in &values {
            for c in &values {
                let x = [*a, *b, *c];
                let ok = sets.iter().all(|s| {
                    s.elements()
                        .iter()
                        .try_fold(0, |acc, &i| x[i - 1].map(|e| acc + e))
                        .is_some_and(|e| e % 12 == 0)
                });
                if ok {
                    solutions.push(x);
                }
            }
        }
    }
    let expected = vec![[Some(0); 3], [Some(6); 3]];
    ensure(solutions == expected, || format!("solutions {solutions:?}"))?;
    ensure(class.component_count == 2, || "component count".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6usize);
        let target = rng.gen_range(1..=6usize).min((1 << n) - 1);
        let mut family: Vec<Subset> = Vec::new();
        while family.len() < target {
            let s = Subset::from_elements(&(1..=n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            if !s.is_empty() && !family.contains(&s) {
                family.push(s);
            }
        }
        let c = intersection_type(&family, n).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<i64>> = family
            .iter()
            .map(|s| (1..=n).map(|i| i64::from(s.contains(i))).collect())
            .collect();
        ensure(c.r == rank(&rows) && c.s + c.torus_rank == n - c.r, || format!("{family:?}: {c:?}"))?;
    }
    Ok("factors (1,1,2), solutions {(1,1,1),(-1,-1,-1)}, 200 random families satisfy s + t = n - r".into())
}

fn schedule_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut mutations = 0;
    for n in 1..=6 {
        let (poset, family) = interval_flag_family(n);
        validate_flags(&poset.order, &family).map_err(|e| format!("n = {n}: {e:?}"))?;
        if n < 2 {
            continue;
        }
        for _ in 0..50 {
            let mut bad = family.clone();
            let r = bad.flags.len();
            match rng.gen_range(0..4) {
                0 => {
                    let i = rng.gen_range(0..r - 1);
                    let j = rng.gen_range(i + 1..r);
                    bad.flags.swap(i, j);
                }
                1 => {
                    bad.flags.remove(rng.gen_range(0..r));
                }
                2 => {
                    let from = rng.gen_range(0..r);
                    let node = *bad.flags[from].choose(&mut rng).unwrap();
                    let to = rng.gen_range(0..r);
                    bad.flags[to].push(node);
                }
                _ => {
                    let i = rng.gen_range(0..r - 1);
                    bad.flags[i].reverse();
                }
            }
            ensure(validate_flags(&poset.order, &bad).is_err(), || format!("mutation accepted: {bad:?}"))?;
            mutations += 1;
        }
    }
    Ok(format!("interval flag family valid for n <= 6; {mutations} random mutations rejected"))
}

fn boundary_clearance() -> Outcome {
    for p in 1..=5 {
        ensure(sigma_identity_check(p) == Ok(true), || format!("sigma identity fails for p = {p}"))?;
    }
    let mut runs = 0;
    for n in 2..=5 {
        for i in Subset::all_nonempty(n).into_iter().filter(|s| s.len() >= 2) {
            let r = boundary_clearance_check(i, n, 1000, 7).map_err(|e| e.to_string())?;
            ensure(r.pass && r.positive_samples == 1000, || format!("{r:?}"))?;
            runs += 1;
        }
    }
    Ok(format!("sigma identity for p <= 5; {runs} subsets positive on 1000 exact samples each"))
}

fn delta_splitting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut pairs = 0;
    for total in 1..=8usize {
        for n in 1..=total {
            let m = total - n;
            for _ in 0..100 {
                let mut nums: BTreeSet<i64> = BTreeSet::new();
                while nums.len() < total {
                    nums.insert(rng.gen_range(1..10_007));
                }
                let z = MarkedPointConfig::new(
                    nums.iter().map(|&a| BigRational::new(BigInt::from(a), BigInt::from(10_007))).collect(),
                )
                .unwrap();
                let (left, right) = delta_map(&z, n, m).map_err(|e| e.to_string())?;
                let mut split = left.cubical();
                split.extend(right.cubical());
                ensure(split == z.cubical(), || format!("{z} with n = {n}, m = {m}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("cubical coordinates split exactly for {pairs} (n, m) pairs x 100 configurations"))
}

fn cross_method() -> Outcome {
    let mut count = 0;
    for w in 2..=5 {
        for k in Composition::admissible_of_weight(w) {
            let order = match w {
                2 | 3 => 32,
                4 => 24,
                _ => 16,
            };
            let q = mzv_cube_quadrature(&k, order).map_err(|e| e.to_string())?;
            let s = mzv(&k, 1e-10).map_err(|e| e.to_string())?;
            let diff = (q.value - s.value).abs();
            ensure(diff <= q.tail_bound + s.tail_bound, || {
                format!("{k}: diff {diff:e} > {:e}", q.tail_bound + s.tail_bound)
            })?;
            count += 1;
        }
    }
    let z2 = mzv(&comp(&[2]), 1e-10).unwrap().value;
    let q2 = mzv_cube_quadrature(&comp(&[2]), 32).unwrap().value;
    ensure((z2 - q2).abs() <= 2e-6, || format!("zeta(2): {:e}", (z2 - q2).abs()))?;
    Ok(format!("{count} compositions of weight <= 5 agree; zeta(2) differs by {:.1e}", (z2 - q2).abs()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("stuffle fixed point", stuffle_fixed_point),
        ("numerical double shuffle", double_shuffle),
        ("cartier exactness", cartier_exactness),
        ("pullback fixed points", pullback_fixed_points),
        ("counting laws", counting_laws),
        ("snf/intersection oracle", snf_oracle),
        ("schedule validity", schedule_validity),
        ("boundary clearance", boundary_clearance),
        ("delta splitting", delta_splitting),
        ("cross-method numerics", cross_method),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
