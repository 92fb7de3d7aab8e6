use std::sync::Arc;

use num_rational::BigRational;
use rand::SeedableRng;

use super::*;
use crate::kfield::{Poly2, RatFunc2};
use crate::ops;
use crate::rmcode::{binary_dual_generator, encode, is_codeword};
use crate::tower::{build_artin_schreier_tower, build_kummer_tower};

fn kummer(a: &[i64]) -> Arc<Tower> {
    let a: Vec<BigRational> = a.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    Arc::new(build_kummer_tower(&a).unwrap())
}

fn artin_schreier(bits: &[u64]) -> Arc<Tower> {
    let a: Vec<RatFunc2> = bits.iter().map(|&b| RatFunc2::from_poly(Poly2::from_u64(b))).collect();
    Arc::new(build_artin_schreier_tower(&a).unwrap())
}

/// Random n×n matrix with entries in K.
fn random_matrix(l: &Tower, n: usize, rng: &mut ChaCha8Rng) -> Matrix<AlgebraElement> {
    (0..n).map(|_| (0..n).map(|_| l.scalar(l.random_element(rng).coords()[0].clone())).collect()).collect()
}

fn codeword_matrix(spec: &CodeSpec, rng: &mut ChaCha8Rng) -> (ThetaPoly, Matrix<AlgebraElement>) {
    let l = spec.tower();
    let msg: Vec<_> = (0..spec.dimension()).map(|_| l.random_element(rng)).collect();
    let (c, ev) = encode(spec, &msg).unwrap();
    (c, vector_to_matrix(l, spec.level(), &ev))
}

fn error_matrix(l: &Tower, t: usize, rng: &mut ChaCha8Rng) -> (ThetaPoly, Matrix<AlgebraElement>) {
    let e = skew::random_rank_error(l, t, rng).unwrap();
    let m = vector_to_matrix(l, l.shape().m(), &skew::evaluations(l, &e));
    (e, m)
}

fn families() -> Vec<(Arc<Tower>, BinaryFamily)> {
    vec![(kummer(&[2, 3, 5]), BinaryFamily::Kummer), (artin_schreier(&[2, 8, 32]), BinaryFamily::ArtinSchreier)]
}

#[test]
fn vector_matrix_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (l, _) in families() {
        for level in 1..=3 {
            let n = 1 << level;
            let v: Vec<_> = (0..n).map(|_| l.random_element(&mut rng)).collect();
            let m = vector_to_matrix(&l, level, &v);
            assert_eq!(m.len(), n);
            assert_eq!(matrix_to_vector(&l, level, &m), v);
        }
    }
}

#[test]
fn full_level_matrix_is_the_endomorphism_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let l = kummer(&[2, 3, 5]);
    let (e, m) = error_matrix(&l, 2, &mut rng);
    let k = skew::endo_matrix(&l, &e).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            assert_eq!(m[i][j], l.scalar(k[i][j].clone()));
        }
    }
}

#[test]
fn zero_matrix_splits_to_zero() {
    for (l, family) in families() {
        let z = vec![vec![l.zero(); 8]; 8];
        let s = block_split(&l, family, 3, &z).unwrap();
        let zero4 = vec![vec![l.zero(); 4]; 4];
        assert_eq!(s, BlockSplit { a0: zero4.clone(), a1: zero4.clone(), b0: zero4.clone(), b1: zero4 });
    }
}

#[test]
fn odd_dimension_rejected() {
    let l = kummer(&[2, 3]);
    let y = vec![vec![l.zero(); 3]; 3];
    assert_eq!(block_split(&l, BinaryFamily::Kummer, 2, &y), Err(RecursiveError::OddDimension(3)));
    assert!(matches!(fold(&l, BinaryFamily::Kummer, 2, &y), Err(RecursiveError::OddDimension(3))));
}

#[test]
fn reassemble_inverts_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (l, family) in families() {
        let m = random_matrix(&l, 8, &mut rng);
        let s = block_split(&l, family, 3, &m).unwrap();
        assert_eq!(reassemble(&l, family, 3, &s), m);
    }
}

#[test]
fn split_blocks_are_codewords_of_the_smaller_codes() {
    let mut cases = vec![(kummer(&[2, 3, 5, 7]), BinaryFamily::Kummer)];
    cases.extend(families());
    for (l, family) in cases {
        let m = l.shape().m();
        for r in 1..m {
            let spec = CodeSpec::new(l.clone(), r).unwrap();
            let upper = CodeSpec::on_subgroup(l.clone(), m - 1, r).unwrap();
            let lower = CodeSpec::on_subgroup(l.clone(), m - 1, r - 1).unwrap();
            for idx in 0..spec.dimension() {
                let mut msg = vec![l.zero(); spec.dimension()];
                msg[idx] = l.basis(idx % l.degree());
                let (_, ev) = encode(&spec, &msg).unwrap();
                let y = vector_to_matrix(&l, m, &ev);
                let s = block_split(&l, family, m, &y).unwrap();
                let vec = |b: &Matrix<AlgebraElement>| matrix_to_vector(&l, m - 1, b);
                assert!(is_codeword(&upper, &vec(&s.a0)).unwrap(), "m={m} r={r} idx={idx}");
                assert!(is_codeword(&upper, &vec(&s.a1)).unwrap());
                assert!(is_codeword(&lower, &vec(&s.b0)).unwrap());
                assert!(is_codeword(&lower, &vec(&s.b1)).unwrap());
                // block entries lie in K
                for block in [&s.a0, &s.a1, &s.b0, &s.b1] {
                    assert!(block.iter().flatten().all(|x| x.coords()[1..].iter().all(|c| c.is_zero())));
                }
            }
        }
    }
}

#[test]
fn kummer_fold_of_b0_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let l = kummer(&[2, 3, 5]);
    let f = BinaryFamily::Kummer;
    let zero = vec![vec![l.zero(); 4]; 4];
    let b0 = random_matrix(&l, 4, &mut rng);
    let y = reassemble(&l, f, 3, &BlockSplit { a0: zero.clone(), a1: zero.clone(), b0: b0.clone(), b1: zero });
    let (f1, f2) = fold(&l, f, 3, &y).unwrap();
    let two_over_alpha = l.mul(&l.from_i64(2), &l.inv(&l.basis(4)).unwrap());
    assert_eq!(f1, mat_scale(&l, &two_over_alpha, &b0));
    assert_eq!(f2, mat_scale(&l, &l.neg(&two_over_alpha), &b0));
}

#[test]
fn folding_cancels_a_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (l, family) in families() {
        let zero = vec![vec![l.zero(); 4]; 4];
        let a0 = random_matrix(&l, 4, &mut rng);
        let a1 = random_matrix(&l, 4, &mut rng);
        let y = reassemble(&l, family, 3, &BlockSplit { a0, a1, b0: zero.clone(), b1: zero.clone() });
        let (f1, f2) = fold(&l, family, 3, &y).unwrap();
        assert_eq!((f1, f2), (zero.clone(), zero));
    }
}

#[test]
fn artin_schreier_fold_of_b1_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let l = artin_schreier(&[2, 8, 32]);
    let f = BinaryFamily::ArtinSchreier;
    let zero = vec![vec![l.zero(); 4]; 4];
    let b1 = random_matrix(&l, 4, &mut rng);
    let y = reassemble(&l, f, 3, &BlockSplit { a0: zero.clone(), a1: zero.clone(), b0: zero, b1: b1.clone() });
    let (f1, f2) = fold(&l, f, 3, &y).unwrap();
    assert_eq!(f1, b1);
    assert_eq!(f2, b1);
}

#[test]
fn folded_b_blocks_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (l, family) in families() {
        let zero = vec![vec![l.zero(); 4]; 4];
        let b0 = random_matrix(&l, 4, &mut rng);
        let b1 = random_matrix(&l, 4, &mut rng);
        let y = reassemble(&l, family, 3, &BlockSplit { a0: zero.clone(), a1: zero, b0: b0.clone(), b1: b1.clone() });
        let (f1, f2) = fold(&l, family, 3, &y).unwrap();
        assert_eq!(unfold_b(&l, family, 3, &f1, &f2).unwrap(), (b0, b1));
    }
}

#[test]
fn folding_does_not_increase_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (l, family) in families() {
        for i in 0..50 {
            let t = 1 + i % 4;
            let (_, e) = error_matrix(&l, t, &mut rng);
            assert_eq!(linalg::rank(&*l, &e), t);
            let (f1, f2) = fold(&l, family, 3, &e).unwrap();
            assert!(linalg::rank(&*l, &f1) <= t);
            assert!(linalg::rank(&*l, &f2) <= t);
        }
    }
}

#[test]
fn fast_syndrome_matches_naive_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for l in [kummer(&[2, 3, 5, 7]), artin_schreier(&[2, 8, 32])] {
        for m in 0..=l.shape().m() {
            for s in -1..=m as isize {
                let h = binary_dual_generator(&l, s, m).unwrap();
                let zero = vec![l.zero(); 1 << m];
                assert!(fast_syndrome(&l, s, m, &zero).unwrap().iter().all(|x| x.is_zero()));
                for _ in 0..20 {
                    let y: Vec<_> = (0..1 << m).map(|_| l.random_element(&mut rng)).collect();
                    let naive = linalg::mat_vec(&*l, &h, &y);
                    assert_eq!(fast_syndrome(&l, s, m, &y).unwrap(), naive, "m={m} s={s}");
                }
            }
        }
    }
}

#[test]
fn fast_syndrome_cost_ratio_falls_with_m() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let l = kummer(&[2, 3, 5, 7]);
    let mut ratios = Vec::new();
    for m in 2..=4 {
        let s = 1;
        let y: Vec<_> = (0..1 << m).map(|_| l.random_element(&mut rng)).collect();
        let h = binary_dual_generator(&l, s, m).unwrap();
        let (_, naive) = ops::count(|| linalg::mat_vec(&*l, &h, &y));
        let (_, fast) = ops::count(|| fast_syndrome(&l, s, m, &y).unwrap());
        ratios.push(fast as f64 / naive as f64);
    }
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}

#[test]
fn recover_a_removes_the_planted_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (l, family) in families() {
        let spec = CodeSpec::new(l.clone(), 1).unwrap();
        let (_, c) = codeword_matrix(&spec, &mut rng);
        let (_, e) = error_matrix(&l, 1, &mut rng);
        let split = block_split(&l, family, 3, &c).unwrap();
        let zero = vec![vec![l.zero(); 4]; 4];
        let b_part = reassemble(&l, family, 3, &BlockSplit { a0: zero.clone(), a1: zero, ..split.clone() });
        let y_tilde = mat_sub(&l, &mat_add(&l, &c, &e), &b_part);
        let [t00, t01, _, _] = quadrants(&y_tilde).unwrap();
        let [e00, e01, _, _] = quadrants(&e).unwrap();
        let (alpha, _) = level_constants(&l, family, 3);
        let (ef1, ef2) = fold(&l, family, 3, &e).unwrap();
        let (u, e_fold) = match family {
            BinaryFamily::Kummer => (l.neg(&l.inv(&alpha).unwrap()), ef1),
            BinaryFamily::ArtinSchreier => (l.inv(&l.add(&alpha, &l.one())).unwrap(), ef2),
        };
        let y0 = mat_add(&l, &t00, &mat_scale(&l, &u, &t01));
        let f0 = mat_add(&l, &e00, &mat_scale(&l, &u, &e01));
        let (a0, a1) = recover_a(&l, family, 3, 1, &y0, &e_fold, None).unwrap();
        assert_eq!((a0.clone(), a1.clone()), (split.a0.clone(), split.a1.clone()));
        let c = match family {
            BinaryFamily::Kummer => l.neg(&alpha),
            BinaryFamily::ArtinSchreier => alpha.clone(),
        };
        let mixed = mat_add(&l, &a0, &mat_scale(&l, &c, &a1));
        assert_eq!(mat_sub(&l, &y0, &f0), mixed);
        let mut lv = ChaCha8Rng::seed_from_u64(99);
        assert_eq!(recover_a(&l, family, 3, 1, &y0, &e_fold, Some(&mut lv)).unwrap(), (split.a0, split.a1));
    }
}

#[test]
fn recover_a_is_linear_in_the_codeword() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let l = kummer(&[2, 3, 5]);
    let spec = CodeSpec::on_subgroup(l.clone(), 2, 1).unwrap();
    let (_, e) = error_matrix(&l, 1, &mut rng);
    let (ef1, _) = fold(&l, BinaryFamily::Kummer, 3, &e).unwrap();
    let [e00, e01, _, _] = quadrants(&e).unwrap();
    let u = l.neg(&l.inv(&l.basis(4)).unwrap());
    let f0 = mat_add(&l, &e00, &mat_scale(&l, &u, &e01));
    let (_, c1) = codeword_matrix(&spec, &mut rng);
    let (_, c2) = codeword_matrix(&spec, &mut rng);
    let (p0, p1) = recover_a(&l, BinaryFamily::Kummer, 3, 1, &mat_add(&l, &c1, &f0), &ef1, None).unwrap();
    let (q0, q1) =
        recover_a(&l, BinaryFamily::Kummer, 3, 1, &mat_add(&l, &mat_add(&l, &c1, &c2), &f0), &ef1, None).unwrap();
    let (d0, d1) = recover_a(&l, BinaryFamily::Kummer, 3, 1, &c2, &ef1, None).unwrap();
    assert_eq!(q0, mat_add(&l, &p0, &d0));
    assert_eq!(q1, mat_add(&l, &p1, &d1));
}

#[test]
fn zero_error_decodes_cleanly() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (l, family) in families() {
        let spec = CodeSpec::new(l.clone(), 1).unwrap();
        let (c, cm) = codeword_matrix(&spec, &mut rng);
        let got = decode_recursive(&spec, &c, &RecursiveOptions::default()).unwrap();
        assert_eq!(got.codeword, c);
        assert_eq!(got.rank, 0);
        assert!(got.report.holds);
        assert!(!got.used_fallback);
        let split = block_split(&l, family, 3, &cm).unwrap();
        let again = vector_to_matrix(&l, 3, &skew::evaluations(&l, &got.codeword));
        assert_eq!(block_split(&l, family, 3, &again).unwrap(), split);
    }
}

#[test]
fn kummer_planted_rank_one_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let l = kummer(&[2, 3, 5]);
    let spec = CodeSpec::new(l.clone(), 1).unwrap();
    assert_eq!((spec.distance(), spec.radius()), (4, 1));
    let mut clean = 0;
    let trials = 30;
    for _ in 0..trials {
        let (c, _) = codeword_matrix(&spec, &mut rng);
        let e = skew::random_rank_error(&l, 1, &mut rng).unwrap();
        let y = c.add(&l, &e).unwrap();
        match decode_recursive(&spec, &y, &RecursiveOptions::default()) {
            Ok(got) => {
                assert!(got.report.holds);
                assert_eq!(got.codeword, c);
                assert_eq!(got.error, e);
                clean += 1;
            }
            Err(RecursiveError::AssumptionViolated(_) | RecursiveError::RankDeficientSystem { .. }) => {
                let got = decode_recursive(&spec, &y, &RecursiveOptions { fallback: true, las_vegas: None }).unwrap();
                assert!(got.used_fallback);
                assert_eq!(got.codeword, c);
            }
            Err(other) => panic!("{other}"),
        }
    }
    assert!(clean * 10 >= trials * 8, "clean rate {clean}/{trials}");
}

#[test]
fn recursive_agrees_with_dickson() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let cases = vec![
        (kummer(&[2, 3, 5, 7]), 1usize, 3usize),
        (kummer(&[2, 3, 5, 7]), 2, 1),
        (artin_schreier(&[2, 8]), 0, 1),
        (artin_schreier(&[2, 8, 32]), 1, 1),
        (artin_schreier(&[2, 8, 32]), 0, 3),
    ];
    for (l, r, t) in cases {
        let spec = CodeSpec::new(l.clone(), r).unwrap();
        assert!(t <= spec.radius());
        for _ in 0..3 {
            let (c, _) = codeword_matrix(&spec, &mut rng);
            let e = skew::random_rank_error(&l, t, &mut rng).unwrap();
            let y = c.add(&l, &e).unwrap();
            let dickson = decode_dickson::decode(&spec, &y).unwrap();
            let ours = decode_recursive(&spec, &y, &RecursiveOptions { fallback: false, las_vegas: Some(5) });
            if let Ok(ours) = ours {
                assert_eq!(ours.codeword, dickson.codeword);
                assert_eq!(ours.rank, dickson.rank);
            }
            assert_eq!(dickson.codeword, c);
        }
    }
}

#[test]
fn subgroup_codes_decode() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let l = kummer(&[2, 3, 5, 7]);
    let spec = CodeSpec::on_subgroup(l.clone(), 3, 1).unwrap();
    let (c, _) = codeword_matrix(&spec, &mut rng);
    let got = decode_recursive(&spec, &c, &RecursiveOptions::default()).unwrap();
    assert_eq!(got.codeword, c);
}

#[test]
fn finite_towers_rejected() {
    let l = Arc::new(crate::tower::build_finite_tower(3, &[2]).unwrap());
    let spec = CodeSpec::new(l.clone(), 0).unwrap();
    let y = ThetaPoly::zero(&l);
    assert_eq!(decode_recursive(&spec, &y, &RecursiveOptions::default()), Err(RecursiveError::NotBinaryShape));
}
