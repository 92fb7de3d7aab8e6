use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rmcode::encode;
use crate::skew;

fn finite(p: u64, n: &[usize]) -> Arc<Tower> {
    Arc::new(build_finite_tower(p, n).unwrap())
}

fn random_error(rs: &CyclicRs, w: usize, rng: &mut ChaCha8Rng) -> Vec<AlgebraElement> {
    let n = rs.n();
    let mut e = vec![rs.field().zero(); n];
    let mut placed = 0;
    while placed < w {
        let i = rng.gen_range(0..n);
        if e[i].is_zero() {
            e[i] = rs.field().random_nonzero(rng);
            placed += 1;
        }
    }
    e
}

fn is_rs_codeword(rs: &CyclicRs, k: usize, v: &[AlgebraElement]) -> bool {
    rs.interpolate(v)[k..].iter().all(|c| c.is_zero())
}

/// Welch–Berlekamp: nonzero (N, E) with deg N < k + t, deg E ≤ t and
/// N(α^i) = y_i E(α^i), then P = N / E.
fn welch_berlekamp(rs: &CyclicRs, k: usize, y: &[AlgebraElement]) -> Option<Vec<AlgebraElement>> {
    let f = rs.field();
    let n = rs.n();
    let t = (n - k) / 2;
    let powers: Vec<AlgebraElement> = (0..n).map(|i| pow(f, rs.alpha(), i)).collect();
    let rows: Matrix<AlgebraElement> = (0..n)
        .map(|i| {
            let mut row: Vec<AlgebraElement> = (0..k + t).map(|j| pow(f, &powers[i], j)).collect();
            row.extend((0..=t).map(|j| f.neg(&f.mul(&y[i], &pow(f, &powers[i], j)))));
            row
        })
        .collect();
    let null = linalg::nullspace(f, &rows, k + 2 * t + 1);
    let v = null.first()?;
    let num = v[..k + t].to_vec();
    let den = v[k + t..].to_vec();
    let (q, r) = poly_divmod(f, &num, &den)?;
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut q = q;
    q.resize(k.max(q.len()), f.zero());
    Some(rs.evaluate(&q))
}

fn poly_divmod(
    f: &Tower,
    num: &[AlgebraElement],
    den: &[AlgebraElement],
) -> Option<(Vec<AlgebraElement>, Vec<AlgebraElement>)> {
    let dd = den.iter().rposition(|c| !c.is_zero())?;
    let lead_inv = f.inv(&den[dd]).ok()?;
    let mut r = num.to_vec();
    let mut q = vec![f.zero(); num.len().saturating_sub(dd).max(1)];
    for i in (dd..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = f.mul(&r[i], &lead_inv);
        for j in 0..=dd {
            r[i - dd + j] = f.sub(&r[i - dd + j], &f.mul(&c, &den[j]));
        }
        q[i - dd] = c;
    }
    Some((q, r))
}

/// All errors of weight at most 2 whose subtraction gives a codeword.
fn brute_force_small(rs: &CyclicRs, k: usize, y: &[AlgebraElement]) -> Vec<Vec<AlgebraElement>> {
    let f = rs.field();
    let n = rs.n();
    let nonzero: Vec<AlgebraElement> = (1..rs.q).map(|i| element_from_index(f, rs.metadata().p, i)).collect();
    let mut out = Vec::new();
    let mut check = |e: Vec<AlgebraElement>| {
        let c: Vec<_> = y.iter().zip(&e).map(|(a, b)| f.sub(a, b)).collect();
        if is_rs_codeword(rs, k, &c) {
            out.push(c);
        }
    };
    check(vec![f.zero(); n]);
    for i in 0..n {
        for a in &nonzero {
            let mut e = vec![f.zero(); n];
            e[i] = a.clone();
            check(e.clone());
            for j in i + 1..n {
                for b in &nonzero {
                    let mut e2 = e.clone();
                    e2[j] = b.clone();
                    check(e2);
                }
            }
        }
    }
    out
}

#[test]
fn alpha_is_a_primitive_element() {
    for q in [4, 8, 9, 16, 25, 27] {
        let rs = CyclicRs::new(q).unwrap();
        let f = rs.field();
        let mut seen = std::collections::HashSet::new();
        let mut x = f.one();
        for _ in 0..rs.n() {
            assert!(seen.insert(x.to_text()), "q={q}");
            x = f.mul(&x, rs.alpha());
        }
        assert_eq!(x, f.one());
        assert_eq!(rs.metadata().q, q);
    }
}

#[test]
fn non_prime_powers_rejected() {
    assert!(matches!(CyclicRs::new(6), Err(ClassicalError::InvalidParameters(_))));
    assert!(matches!(CyclicRs::new(1), Err(ClassicalError::InvalidParameters(_))));
    assert!(matches!(CyclicRs::new(7), Err(ClassicalError::InvalidParameters(_))));
}

#[test]
fn interpolation_inverts_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rs = CyclicRs::new(16).unwrap();
    let p: Vec<_> = (0..rs.n()).map(|_| rs.field().random_element(&mut rng)).collect();
    assert_eq!(rs.interpolate(&rs.evaluate(&p)), p);
}

#[test]
fn circulant_of_one_and_x() {
    let rs = CyclicRs::new(16).unwrap();
    let f = rs.field();
    let n = rs.n();
    let mut one = vec![f.zero(); n];
    one[0] = f.one();
    assert_eq!(circulant(&one, n), linalg::identity(f, n));
    let mut x = vec![f.zero(); n];
    x[1] = f.one();
    let shift = circulant(&x, n);
    for (i, row) in shift.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert_eq!(x.is_zero(), i != (j + 1) % n);
        }
    }
}

#[test]
fn circulant_rank_is_hamming_weight_of_evaluations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [8, 9, 16] {
        let rs = CyclicRs::new(q).unwrap();
        for w in 0..=4 {
            let e = random_error(&rs, w, &mut rng);
            let c = circulant(&rs.interpolate(&e), rs.n());
            assert_eq!(linalg::rank(rs.field(), &c), w, "q={q} w={w}");
        }
    }
}

#[test]
fn consecutive_columns_of_low_rank_circulant_are_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rs = CyclicRs::new(16).unwrap();
    let n = rs.n();
    for w in 1..=5 {
        let c = circulant(&rs.interpolate(&random_error(&rs, w, &mut rng)), n);
        for start in 0..n {
            let cols: Matrix<AlgebraElement> =
                (0..w).map(|j| (0..n).map(|i| c[i][(start + j) % n].clone()).collect()).collect();
            assert_eq!(linalg::rank(rs.field(), &cols), w, "w={w} start={start}");
        }
    }
}

#[test]
fn rs_round_trip_matches_welch_berlekamp() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (q, k) in [(8, 3), (16, 5), (16, 9), (9, 2), (25, 9)] {
        let rs = CyclicRs::new(q).unwrap();
        let max = (rs.n() - k) / 2;
        for w in 0..=max {
            let msg: Vec<_> = (0..k).map(|_| rs.field().random_element(&mut rng)).collect();
            let c = rs.encode(k, &msg).unwrap();
            let e = random_error(&rs, w, &mut rng);
            let y: Vec<_> = c.iter().zip(&e).map(|(a, b)| rs.field().add(a, b)).collect();
            let got = rs_decode(&rs, k, &y).unwrap();
            assert_eq!(got.codeword, c, "q={q} k={k} w={w}");
            assert_eq!(got.weight, w);
            assert_eq!(welch_berlekamp(&rs, k, &y).unwrap(), c);
        }
    }
}

#[test]
fn rs_planted_weight_four_over_f16() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rs = CyclicRs::new(16).unwrap();
    let f = rs.field();
    for _ in 0..200 {
        let msg: Vec<_> = (0..7).map(|_| f.random_element(&mut rng)).collect();
        let c = rs.encode(7, &msg).unwrap();
        let e = random_error(&rs, 4, &mut rng);
        let y: Vec<_> = c.iter().zip(&e).map(|(a, b)| f.add(a, b)).collect();
        let got = rs_decode(&rs, 7, &y).unwrap();
        assert_eq!(got.codeword, c);
        assert_eq!(got.error, e);
        assert!(is_rs_codeword(&rs, 7, &got.codeword));
    }
}

#[test]
fn rs_zero_error() {
    let rs = CyclicRs::new(16).unwrap();
    let c = rs.encode(3, &[rs.field().one(), rs.field().zero(), rs.alpha().clone()]).unwrap();
    let got = rs_decode(&rs, 3, &c).unwrap();
    assert_eq!(got.codeword, c);
    assert_eq!(got.weight, 0);
}

#[test]
fn rs_agrees_with_brute_force_for_small_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rs = CyclicRs::new(8).unwrap();
    let k = 2;
    for w in 0..=2 {
        for _ in 0..3 {
            let msg: Vec<_> = (0..k).map(|_| rs.field().random_element(&mut rng)).collect();
            let c = rs.encode(k, &msg).unwrap();
            let e = random_error(&rs, w, &mut rng);
            let y: Vec<_> = c.iter().zip(&e).map(|(a, b)| rs.field().add(a, b)).collect();
            assert_eq!(brute_force_small(&rs, k, &y), vec![c.clone()]);
            assert_eq!(rs_decode(&rs, k, &y).unwrap().codeword, c);
        }
    }
}

#[test]
fn rs_rejects_bad_lengths() {
    let rs = CyclicRs::new(8).unwrap();
    let y = vec![rs.field().zero(); 6];
    assert!(matches!(rs_decode(&rs, 3, &y), Err(ClassicalError::InvalidParameters(_))));
    assert!(rs.encode(3, &[rs.field().one()]).is_err());
}

#[test]
fn rs_metadata_round_trips_through_json() {
    let meta = CyclicRs::new(16).unwrap().metadata();
    let back: RsMetadata = serde_json::from_str(&serde_json::to_string(&meta).unwrap()).unwrap();
    assert_eq!(back, meta);
}

#[test]
fn gabidulin_schedule_shifts_up() {
    let spec = gabidulin_spec(&finite(2, &[7]), 3).unwrap();
    let windows = gabidulin_schedule(&spec, 2).unwrap();
    let rows: Vec<_> = windows.iter().map(|w| w.rows.clone()).collect();
    assert_eq!(rows, vec![vec![4, 5, 6], vec![3, 4, 5], vec![2, 3, 4]]);
    assert!(windows.iter().all(|w| w.cols == vec![0, 1, 2]));
    assert_eq!(windows.iter().map(|w| w.target).collect::<Vec<_>>(), vec![2, 1, 0]);
}

#[test]
fn gabidulin_requires_cyclic_tower() {
    assert!(matches!(gabidulin_spec(&finite(2, &[3, 2]), 2), Err(ClassicalError::NotCyclic(_))));
    assert!(matches!(gabidulin_spec(&finite(2, &[7]), 8), Err(ClassicalError::InvalidParameters(_))));
}

#[test]
fn gabidulin_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (p, n, k) in [(2, 7, 3), (2, 8, 2), (3, 5, 1), (2, 9, 4)] {
        let tower = finite(p, &[n]);
        let spec = gabidulin_spec(&tower, k).unwrap();
        for t in 0..=(n - k) / 2 {
            let msg: Vec<_> = (0..k).map(|_| tower.random_element(&mut rng)).collect();
            let (c, _) = encode(&spec, &msg).unwrap();
            let e = skew::random_rank_error(&tower, t, &mut rng).unwrap();
            let y = c.add(&tower, &e).unwrap();
            let got = gabidulin_decode(&tower, k, &y).unwrap();
            assert_eq!(got.codeword, c, "n={n} k={k} t={t}");
            assert_eq!(got.rank, t);
        }
    }
}

#[test]
fn gabidulin_matches_general_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tower = finite(2, &[7]);
    let spec = gabidulin_spec(&tower, 3).unwrap();
    for i in 0..100 {
        let msg: Vec<_> = (0..3).map(|_| tower.random_element(&mut rng)).collect();
        let (c, _) = encode(&spec, &msg).unwrap();
        let e = skew::random_rank_error(&tower, i % 3, &mut rng).unwrap();
        let y = c.add(&tower, &e).unwrap();
        let ours = gabidulin_decode(&tower, 3, &y).unwrap();
        let general = decode_dickson::decode_with(&spec, &y, Schedule::General).unwrap();
        assert_eq!(ours, general);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circulant_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs = CyclicRs::new(8).unwrap();
        let f = rs.field();
        let n = rs.n();
        let a: Vec<_> = (0..n).map(|_| f.random_element(&mut rng)).collect();
        let b: Vec<_> = (0..n).map(|_| f.random_element(&mut rng)).collect();
        let ab: Vec<_> = (0..n)
            .map(|i| (0..n).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&a[j], &b[(i + n - j) % n]))))
            .collect();
        prop_assert_eq!(linalg::mat_mul(f, &circulant(&a, n), &circulant(&b, n)), circulant(&ab, n));
    }
}
