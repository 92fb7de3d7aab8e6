use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fp_poly, Family, Sparse, Tower, TowerError};
use crate::group::Shape;
use crate::kfield::f2poly::is_artin_schreier_image;
use crate::kfield::{BaseField, FieldScalar, RatFunc2};
use crate::linalg::{self, Matrix};

/// Default seed for the irreducible-polynomial search.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// F_{p^N} with θ_i = Frob^{N/n_i}, searching for the defining polynomial
/// with the default seed.
pub fn build_finite_tower(p: u64, n: &[usize]) -> Result<Tower, TowerError> {
    build_finite_tower_with(p, n, DEFAULT_SEED, None)
}

/// As [`build_finite_tower`], with an explicit seed or a given irreducible
/// polynomial (coefficients from the constant term up, monic).
pub fn build_finite_tower_with(
    p: u64,
    n: &[usize],
    seed: u64,
    irreducible: Option<Vec<u64>>,
) -> Result<Tower, TowerError> {
    let shape = Shape::new(n.to_vec())?;
    for a in 0..n.len() {
        for b in a + 1..n.len() {
            if n[a].gcd(&n[b]) != 1 {
                return Err(TowerError::NonCoprimeShape(n.to_vec()));
            }
        }
    }
    let base = BaseField::prime(p)?;
    let big_n = shape.order();
    let f = match irreducible {
        Some(f) => {
            if f.len() != big_n + 1 || f.iter().any(|&c| c >= p) || !fp_poly::is_irreducible(&f, p) {
                return Err(TowerError::NotIrreducible(big_n));
            }
            f
        }
        None => find_irreducible(p, big_n, seed)?,
    };

    let fp = |v: u64| FieldScalar::Prime { v, p };
    let to_sparse = |coeffs: &[u64]| -> Sparse {
        coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, fp(c))).collect()
    };

    // x^v mod f for every v < 2N−1
    let mut reduction: Vec<Sparse> = Vec::with_capacity(2 * big_n - 1);
    let mut xv = vec![1u64];
    for _ in 0..2 * big_n - 1 {
        reduction.push(to_sparse(&xv));
        let mut shifted = vec![0u64];
        shifted.extend_from_slice(&xv);
        xv = fp_poly::rem(&shifted, &f, p);
    }
    let products: Vec<Vec<Sparse>> = (0..big_n).map(|i| (0..big_n).map(|j| vec![(i + j, fp(1))]).collect()).collect();

    // Frobenius matrix: column c = x^{pc} mod f
    let xp = fp_poly::frobenius_power_of_x(1, &f, p);
    let mut frob_cols: Matrix<FieldScalar> = Vec::with_capacity(big_n);
    let mut pow = vec![1u64];
    for _ in 0..big_n {
        let mut col = vec![fp(0); big_n];
        for (k, &v) in pow.iter().enumerate() {
            col[k] = fp(v);
        }
        frob_cols.push(col);
        pow = fp_poly::mulmod(&pow, &xp, &f, p);
    }
    let frob = linalg::transpose(&frob_cols);
    let mut frob_powers = vec![linalg::identity(&base, big_n)];
    for k in 1..big_n {
        let next = linalg::mat_mul(&base, &frob, &frob_powers[k - 1]);
        frob_powers.push(next);
    }
    let exps: Vec<usize> = n.iter().map(|ni| big_n / ni).collect();
    let auts = (0..big_n)
        .map(|g| {
            let e = shape.phi_inv(g);
            let power = e.iter().zip(&exps).map(|(a, c)| a * c).sum::<usize>() % big_n;
            dense_to_sparse(&frob_powers[power])
        })
        .collect();
    let labels = (0..big_n).map(|i| format!("x^{i}")).collect();
    Tower::assemble(base, shape, Family::Finite { p, irreducible: f, seed }, labels, products, reduction, auts)
}

fn find_irreducible(p: u64, degree: usize, seed: u64) -> Result<Vec<u64>, TowerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 64 * degree;
    for _ in 0..budget {
        let f: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).chain([1]).collect();
        if fp_poly::is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    Err(TowerError::NoIrreducibleFound { p, degree, budget })
}

fn dense_to_sparse(m: &Matrix<FieldScalar>) -> Vec<Sparse> {
    let n = m.len();
    (0..n).map(|j| (0..n).filter(|&k| !m[k][j].is_zero()).map(|k| (k, m[k][j].clone())).collect()).collect()
}

fn subsets_of(mask: usize) -> impl Iterator<Item = usize> {
    // all submasks of `mask`, including 0 and `mask` itself
    let mut sub = Some(mask);
    std::iter::from_fn(move || {
        let cur = sub?;
        sub = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

/// Q(√a_1, …, √a_m) with basis the subset products of the √a_i in φ order.
pub fn build_kummer_tower(a: &[BigRational]) -> Result<Tower, TowerError> {
    let m = a.len();
    let shape = Shape::new(vec![2; m])?;
    let big_n = shape.order();
    let base = BaseField::Rational;
    for s in 1..big_n {
        let prod = bits(s).iter().fold(BigRational::one(), |acc, &i| acc * &a[i]);
        if prod.is_zero() || FieldScalar::Rational(prod).is_rational_square() {
            return Err(TowerError::DependentRadicands(bits(s).iter().map(|i| i + 1).collect()));
        }
    }
    let q = |x: BigRational| FieldScalar::Rational(x);
    let products = (0..big_n)
        .map(|s| {
            (0..big_n)
                .map(|t| {
                    let c = bits(s & t).iter().fold(BigRational::one(), |acc, &i| acc * &a[i]);
                    vec![(s ^ t, q(c))]
                })
                .collect()
        })
        .collect();
    let reduction = (0..big_n).map(|k| vec![(k, base.one())]).collect();
    let auts = (0..big_n)
        .map(|g| {
            (0..big_n)
                .map(|s| {
                    let sign = if (g & s).count_ones() % 2 == 1 { -1 } else { 1 };
                    vec![(s, base.from_i64(sign))]
                })
                .collect()
        })
        .collect();
    let labels = (0..big_n)
        .map(|s| {
            if s == 0 {
                "1".to_string()
            } else {
                bits(s).iter().map(|&i| format!("√{}", a[i])).collect::<Vec<_>>().join("·")
            }
        })
        .collect();
    Tower::assemble(base, shape, Family::Kummer { radicands: a.to_vec() }, labels, products, reduction, auts)
}

/// F_2(t)(α_1, …, α_m) with α_i² = α_i + a_i and θ_i(α_i) = α_i + 1.
pub fn build_artin_schreier_tower(a: &[RatFunc2]) -> Result<Tower, TowerError> {
    let m = a.len();
    let shape = Shape::new(vec![2; m])?;
    let big_n = shape.order();
    let base = BaseField::Ratfunc2;
    for (i, ai) in a.iter().enumerate() {
        if is_artin_schreier_image(ai) {
            return Err(TowerError::ReducibleArtinSchreier(i + 1));
        }
    }
    for s in 1..big_n {
        if s.count_ones() < 2 {
            continue;
        }
        let sum = bits(s).iter().fold(RatFunc2::zero(), |acc, &i| acc.add(&a[i]));
        if is_artin_schreier_image(&sum) {
            return Err(TowerError::DependentExtensions(bits(s).iter().map(|i| i + 1).collect()));
        }
    }
    let r = |x: RatFunc2| FieldScalar::Ratfunc2(x);
    // α_S·α_T = α_{S△T}·Π_{i∈S∩T}(α_i + a_i), expanded over subsets V of S∩T
    let products = (0..big_n)
        .map(|s| {
            (0..big_n)
                .map(|t| {
                    let u = s & t;
                    subsets_of(u)
                        .map(|v| {
                            let c = bits(u & !v).iter().fold(RatFunc2::one(), |acc, &i| acc.mul(&a[i]));
                            ((s ^ t) | v, r(c))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let reduction = (0..big_n).map(|k| vec![(k, base.one())]).collect();
    // θ^g(α_S) = Π_{i∈S}(α_i + [i∈g]) = Σ_{W ⊆ S∩g} α_{S∖W}
    let auts = (0..big_n)
        .map(|g| (0..big_n).map(|s| subsets_of(s & g).map(|w| (s & !w, base.one())).collect()).collect())
        .collect();
    let labels = (0..big_n)
        .map(|s| {
            if s == 0 {
                "1".to_string()
            } else {
                bits(s).iter().map(|&i| format!("α{}", i + 1)).collect::<Vec<_>>().join("·")
            }
        })
        .collect();
    Tower::assemble(base, shape, Family::ArtinSchreier { radicands: a.to_vec() }, labels, products, reduction, auts)
}
