//! θ-polynomials: elements Σ e_g·g of the skew group algebra L[G], acting on L
//! as K-linear maps.
//!
//! A θ-polynomial may live over the whole group or over the subgroup generated
//! by the first k generators; its length (a prefix order n_1⋯n_k) selects
//! which. Coefficient `i` multiplies the group element with φ-index `i`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::group::Shape;
use crate::linalg::{self, Matrix};
use crate::tower::{exp_basis, rank_of_vector, AlgebraElement, Tower, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("θ-polynomials belong to different towers or subgroups")]
    TowerMismatch,
    #[error("{0} coefficients do not match any subgroup order of the tower")]
    InvalidLength(usize),
    #[error("could not sample independent elements within the retry budget")]
    RetryBudgetExhausted,
    #[error("rank {t} outside 1..={max}")]
    RankOutOfRange { t: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    coeffs: Vec<AlgebraElement>,
}

pub type DicksonMatrix = Matrix<AlgebraElement>;

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())).finish()
    }
}

/// Number of generators `k` whose subgroup has order `len`.
pub fn view_level(tower: &Tower, len: usize) -> Result<usize, SkewError> {
    (0..=tower.shape().m())
        .find(|&k| tower.shape().prefix(k).order() == len && k > 0)
        .ok_or(SkewError::InvalidLength(len))
}

impl ThetaPoly {
    pub fn new(tower: &Tower, coeffs: Vec<AlgebraElement>) -> Result<Self, SkewError> {
        view_level(tower, coeffs.len())?;
        if coeffs.iter().any(|c| c.coords().len() != tower.degree()) {
            return Err(SkewError::TowerMismatch);
        }
        Ok(ThetaPoly { coeffs })
    }

    pub(crate) fn from_coeffs(coeffs: Vec<AlgebraElement>) -> Self {
        ThetaPoly { coeffs }
    }

    pub fn zero(tower: &Tower) -> Self {
        ThetaPoly { coeffs: vec![tower.zero(); tower.degree()] }
    }

    pub fn zero_on(tower: &Tower, level: usize) -> Self {
        ThetaPoly { coeffs: vec![tower.zero(); tower.shape().prefix(level).order()] }
    }

    /// The monomial `c·γ_i` over the full group.
    pub fn monomial(tower: &Tower, i: usize, c: AlgebraElement) -> Self {
        let mut p = Self::zero(tower);
        p.coeffs[i] = c;
        p
    }

    /// The θ-polynomial Σ_g g (all coefficients 1): the trace map.
    pub fn trace_element(tower: &Tower) -> Self {
        ThetaPoly { coeffs: vec![tower.one(); tower.degree()] }
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &AlgebraElement {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: AlgebraElement) {
        self.coeffs[i] = c;
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, tower: &Tower, other: &Self) -> Result<Self, SkewError> {
        self.same_view(other)?;
        Ok(ThetaPoly { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| tower.add(a, b)).collect() })
    }

    pub fn sub(&self, tower: &Tower, other: &Self) -> Result<Self, SkewError> {
        self.same_view(other)?;
        Ok(ThetaPoly { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| tower.sub(a, b)).collect() })
    }

    fn same_view(&self, other: &Self) -> Result<(), SkewError> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(SkewError::TowerMismatch);
        }
        Ok(())
    }

    /// θ-degree: the largest total degree of a nonzero monomial, `None` for
    /// the zero polynomial (below every degree).
    pub fn theta_degree(&self, shape: &Shape) -> Option<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| shape.degree_of(i)).max()
    }

    /// File format: one line `index: c_0 c_1 …` per nonzero coefficient.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                s.push_str(&format!("{i}: {}\n", c.to_text()));
            }
        }
        s
    }

    pub fn parse(tower: &Tower, text: &str) -> Result<Self, SkewError> {
        let mut p = Self::zero(tower);
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SkewError::Parse { line: ln + 1, msg };
            let (idx, rest) = line.split_once(':').ok_or_else(|| err("expected `index: coordinates`".into()))?;
            let i: usize = idx.trim().parse().map_err(|_| err(format!("bad index {idx:?}")))?;
            if i >= p.coeffs.len() {
                return Err(err(format!("index {i} out of range")));
            }
            p.coeffs[i] = tower.parse_element(rest).map_err(|e| err(e.to_string()))?;
        }
        Ok(p)
    }
}

fn view_shape(tower: &Tower, p: &ThetaPoly) -> Result<Shape, SkewError> {
    Ok(tower.shape().prefix(view_level(tower, p.len())?))
}

/// Skew product `A∘B`, extended bilinearly from
/// `(a·g)∘(b·h) = (a·g(b))·(gh)`.
pub fn compose(tower: &Tower, a: &ThetaPoly, b: &ThetaPoly) -> Result<ThetaPoly, SkewError> {
    a.same_view(b)?;
    let shape = view_shape(tower, a)?;
    let mut out = vec![tower.zero(); a.len()];
    for (g, ag) in a.coeffs.iter().enumerate() {
        if ag.is_zero() {
            continue;
        }
        for (h, bh) in b.coeffs.iter().enumerate() {
            if bh.is_zero() {
                continue;
            }
            let gh = shape.add(g, h);
            let term = tower.mul(ag, &tower.apply_aut(g, bh));
            out[gh] = tower.add(&out[gh], &term);
        }
    }
    Ok(ThetaPoly { coeffs: out })
}

/// `A(x) = Σ_g a_g·g(x)`.
pub fn evaluate(tower: &Tower, a: &ThetaPoly, x: &AlgebraElement) -> Result<AlgebraElement, SkewError> {
    if x.coords().len() != tower.degree() {
        return Err(SkewError::TowerMismatch);
    }
    let mut acc = tower.zero();
    for (g, ag) in a.coeffs.iter().enumerate() {
        if !ag.is_zero() {
            acc = tower.add(&acc, &tower.mul(ag, &tower.apply_aut(g, x)));
        }
    }
    Ok(acc)
}

/// Evaluations at the first `len` basis elements, which form a basis of L
/// over the fixed field of the polynomial's subgroup.
pub fn evaluations(tower: &Tower, a: &ThetaPoly) -> Vec<AlgebraElement> {
    (0..a.len()).map(|j| evaluate(tower, a, &tower.basis(j)).unwrap()).collect()
}

/// Recovers the θ-polynomial from its evaluations at the basis.
pub fn interpolate(tower: &Tower, values: &[AlgebraElement]) -> Result<ThetaPoly, SkewError> {
    let level = view_level(tower, values.len())?;
    let m = tower.interpolation_matrix(level);
    Ok(ThetaPoly { coeffs: linalg::mat_vec(tower, m, values) })
}

/// K-matrix of the endomorphism x ↦ A(x) over the full group.
pub fn endo_matrix(tower: &Tower, a: &ThetaPoly) -> Result<Matrix<crate::kfield::FieldScalar>, SkewError> {
    if a.len() != tower.degree() {
        return Err(SkewError::InvalidLength(a.len()));
    }
    Ok(exp_basis(tower, &evaluations(tower, a)))
}

/// Rank of the induced endomorphism. Over the full group this is the K-rank
/// of the endomorphism matrix; over a subgroup it is the rank over the fixed
/// field, computed as the L-rank of the Dickson matrix.
pub fn rank(tower: &Tower, a: &ThetaPoly) -> Result<usize, SkewError> {
    if a.len() == tower.degree() {
        Ok(rank_of_vector(tower, &evaluations(tower, a)))
    } else {
        Ok(linalg::rank(tower, &dickson(tower, a)?))
    }
}

/// The G-Dickson matrix, `D[i][j] = γ_j(a_{σ_j⁻¹(i)})`.
pub fn dickson(tower: &Tower, a: &ThetaPoly) -> Result<DicksonMatrix, SkewError> {
    let shape = view_shape(tower, a)?;
    let n = a.len();
    Ok((0..n).map(|i| (0..n).map(|j| dickson_entry(tower, &shape, a, i, j)).collect()).collect())
}

pub fn dickson_entry(tower: &Tower, shape: &Shape, a: &ThetaPoly, i: usize, j: usize) -> AlgebraElement {
    tower.apply_aut(j, &a.coeffs[shape.sigma_inverse(j, i)])
}

/// A random θ-polynomial over the full group whose rank is exactly `t`,
/// built as `x ↦ Σ_k α_k·Tr(β_k·x)` from K-independent α's and β's.
pub fn random_rank_error<R: Rng + ?Sized>(tower: &Tower, t: usize, rng: &mut R) -> Result<ThetaPoly, SkewError> {
    random_rank_error_on(tower, tower.shape().m(), t, rng)
}

/// As [`random_rank_error`], over the subgroup of the first `level`
/// generators; independence is then over that subgroup's fixed field.
pub fn random_rank_error_on<R: Rng + ?Sized>(
    tower: &Tower,
    level: usize,
    t: usize,
    rng: &mut R,
) -> Result<ThetaPoly, SkewError> {
    let n = tower.shape().prefix(level).order();
    if t == 0 {
        return Ok(ThetaPoly::zero_on(tower, level));
    }
    if t > n {
        return Err(SkewError::RankOutOfRange { t, max: n });
    }
    let independent = |v: &[AlgebraElement]| {
        if level == tower.shape().m() {
            rank_of_vector(tower, v) == v.len()
        } else {
            // rank over the fixed field of the subgroup: L-rank of the
            // matrix of conjugates (a truncated Moore matrix)
            let moore: Matrix<AlgebraElement> =
                (0..n).map(|g| v.iter().map(|x| tower.apply_aut(g, x)).collect()).collect();
            linalg::rank(tower, &moore) == v.len()
        }
    };
    let mut sample = || -> Result<Vec<AlgebraElement>, SkewError> {
        for _ in 0..32 {
            let v: Vec<AlgebraElement> = (0..t).map(|_| tower.random_element(rng)).collect();
            if independent(&v) {
                return Ok(v);
            }
        }
        Err(SkewError::RetryBudgetExhausted)
    };
    let alphas = sample()?;
    let betas = sample()?;
    let coeffs = (0..n)
        .map(|g| {
            alphas
                .iter()
                .zip(&betas)
                .fold(tower.zero(), |acc, (a, b)| tower.add(&acc, &tower.mul(a, &tower.apply_aut(g, b))))
        })
        .collect();
    Ok(ThetaPoly { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::{Poly2, RatFunc2};
    use crate::tower::{build_artin_schreier_tower, build_finite_tower, build_kummer_tower};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kummer(a: &[i64]) -> Tower {
        let a: Vec<BigRational> = a.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        build_kummer_tower(&a).unwrap()
    }

    fn towers() -> Vec<Tower> {
        vec![
            build_finite_tower(2, &[3, 2]).unwrap(),
            kummer(&[2, 3, 5]),
            build_artin_schreier_tower(&[
                RatFunc2::from_poly(Poly2::from_u64(2)),
                RatFunc2::from_poly(Poly2::from_u64(8)),
            ])
            .unwrap(),
        ]
    }

    fn random_poly(tower: &Tower, rng: &mut ChaCha8Rng) -> ThetaPoly {
        ThetaPoly { coeffs: (0..tower.degree()).map(|_| tower.random_element(rng)).collect() }
    }

    #[test]
    fn identity_and_trace() {
        for l in towers() {
            let id = ThetaPoly::monomial(&l, 0, l.one());
            assert_eq!(endo_matrix(&l, &id).unwrap(), linalg::identity(l.base(), l.degree()));
            assert_eq!(rank(&l, &id).unwrap(), l.degree());
            let tr = ThetaPoly::trace_element(&l);
            assert_eq!(rank(&l, &tr).unwrap(), 1);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let b = random_poly(&l, &mut rng);
            assert_eq!(compose(&l, &id, &b).unwrap(), b);
        }
    }

    #[test]
    fn theta1_negates_sqrt2() {
        let l = kummer(&[2, 3, 5]);
        let th1 = ThetaPoly::monomial(&l, 1, l.one());
        assert_eq!(evaluate(&l, &th1, &l.basis(1)).unwrap(), l.neg(&l.basis(1)));
    }

    #[test]
    fn monomial_composition() {
        let l = build_finite_tower(2, &[3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b) = (l.random_element(&mut rng), l.random_element(&mut rng));
        for i in 0..6 {
            for j in 0..6 {
                let p = compose(&l, &ThetaPoly::monomial(&l, i, a.clone()), &ThetaPoly::monomial(&l, j, b.clone()))
                    .unwrap();
                let expected = ThetaPoly::monomial(&l, l.shape().add(i, j), l.mul(&a, &l.apply_aut(i, &b)));
                assert_eq!(p, expected);
            }
        }
    }

    #[test]
    fn composition_is_matrix_product_on_monomials() {
        for l in towers() {
            if l.degree() > 8 {
                continue;
            }
            let k = l.base().clone();
            for i in 0..l.degree() {
                for j in 0..l.degree() {
                    let a = ThetaPoly::monomial(&l, i, l.basis((i + j) % l.degree()));
                    let b = ThetaPoly::monomial(&l, j, l.basis((2 * i + 1) % l.degree()));
                    let ab = compose(&l, &a, &b).unwrap();
                    let lhs = endo_matrix(&l, &ab).unwrap();
                    let rhs = linalg::mat_mul(&k, &endo_matrix(&l, &a).unwrap(), &endo_matrix(&l, &b).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn composition_is_matrix_product_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in towers() {
            let k = l.base().clone();
            for _ in 0..15 {
                let a = random_poly(&l, &mut rng);
                let b = random_poly(&l, &mut rng);
                let lhs = endo_matrix(&l, &compose(&l, &a, &b).unwrap()).unwrap();
                let rhs = linalg::mat_mul(&k, &endo_matrix(&l, &a).unwrap(), &endo_matrix(&l, &b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn evaluation_is_k_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for l in towers() {
            let a = random_poly(&l, &mut rng);
            for _ in 0..30 {
                let x = l.random_element(&mut rng);
                let y = l.random_element(&mut rng);
                let lam = l.base().random(&mut rng);
                let lhs = evaluate(&l, &a, &l.add(&l.scale(&lam, &x), &y)).unwrap();
                let rhs = l.add(&l.scale(&lam, &evaluate(&l, &a, &x).unwrap()), &evaluate(&l, &a, &y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dickson_examples() {
        let l = build_finite_tower(2, &[7]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_poly(&l, &mut rng);
        let d = dickson(&l, &a).unwrap();
        // cyclic case: column j is the q^j-power of the coefficients shifted down j steps
        for (i, row) in d.iter().enumerate() {
            assert_eq!(row[0], a.coeffs[i]);
            for (j, entry) in row.iter().enumerate() {
                let mut x = a.coeffs[(i + 7 - j) % 7].clone();
                for _ in 0..j {
                    x = l.mul(&x, &x);
                }
                assert_eq!(*entry, x);
            }
        }
        let c = l.random_nonzero(&mut rng);
        let d = dickson(&l, &ThetaPoly::monomial(&l, 0, c.clone())).unwrap();
        for (i, row) in d.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expected = if i == j { l.apply_aut(j, &c) } else { l.zero() };
                assert_eq!(*entry, expected);
            }
        }
    }

    #[test]
    fn dickson_block_circulant_entry() {
        // n = (3,3) cannot be realized; the index pattern is checked on an
        // abstract 9-element shape: entry (4,3) involves f_1 conjugated by γ_3
        let s = Shape::new(vec![3, 3]).unwrap();
        assert_eq!(s.sigma_inverse(3, 4), 1);
    }

    #[test]
    fn random_errors_have_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for l in towers() {
            for t in 1..=l.degree() / 2 {
                for _ in 0..10 {
                    let e = random_rank_error(&l, t, &mut rng).unwrap();
                    assert_eq!(rank(&l, &e).unwrap(), t);
                    assert_eq!(linalg::rank(&l, &dickson(&l, &e).unwrap()), t);
                }
            }
        }
    }

    #[test]
    fn rank_equals_dickson_rank_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for l in towers() {
            for _ in 0..10 {
                let a = random_poly(&l, &mut rng);
                assert_eq!(rank(&l, &a).unwrap(), linalg::rank(&l, &dickson(&l, &a).unwrap()));
            }
        }
    }

    #[test]
    fn interpolation_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for l in towers() {
            let a = random_poly(&l, &mut rng);
            assert_eq!(interpolate(&l, &evaluations(&l, &a)).unwrap(), a);
        }
        let l = kummer(&[2, 3, 5]);
        let sub = random_rank_error_on(&l, 2, 1, &mut rng).unwrap();
        assert_eq!(sub.len(), 4);
        assert_eq!(interpolate(&l, &evaluations(&l, &sub)).unwrap(), sub);
        assert_eq!(rank(&l, &sub).unwrap(), 1);
    }

    #[test]
    fn text_round_trip() {
        let l = kummer(&[2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_rank_error(&l, 1, &mut rng).unwrap();
        assert_eq!(ThetaPoly::parse(&l, &a.to_text()).unwrap(), a);
        assert!(matches!(ThetaPoly::parse(&l, "9: 1 0 0 0"), Err(SkewError::Parse { line: 1, .. })));
    }

    #[test]
    fn theta_degree_of_zero_is_none() {
        let l = kummer(&[2, 3]);
        assert_eq!(ThetaPoly::zero(&l).theta_degree(l.shape()), None);
        assert_eq!(ThetaPoly::monomial(&l, 3, l.one()).theta_degree(l.shape()), Some(2));
    }
}
