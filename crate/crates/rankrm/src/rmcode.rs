//! θ-Reed–Muller codes: the θ-polynomials of total θ-degree at most r,
//! viewed through their evaluations at the tower basis.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupError, Shape};
use crate::linalg::{self, Matrix};
use crate::skew::{self, SkewError, ThetaPoly};
use crate::tower::{AlgebraElement, Family, Tower, TowerDescriptor, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid shape {0:?}: entries must be at least 2 and non-increasing")]
    InvalidShape(Vec<usize>),
    #[error("order {r} outside 0..={max}")]
    OrderOutOfRange { r: usize, max: usize },
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("binary-shape operation on a non-binary tower")]
    NotBinaryShape,
    #[error("tower has {have} generators, {want} requested")]
    LevelOutOfRange { have: usize, want: usize },
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Length, dimension and minimum distance of a code, plus the decomposition
/// `r = Σ_{i>s}(n_i − 1) + ℓ` with `0 ≤ ℓ ≤ n_s − 2`, except `r = Σ(n_i−1)`
/// which gives `s = 1, ℓ = n_1 − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub s: usize,
    pub ell: usize,
}

pub fn code_params(n: &[usize], r: usize) -> Result<CodeParams, CodeError> {
    if n.is_empty() || n.iter().any(|&x| x < 2) || n.windows(2).any(|w| w[0] < w[1]) {
        return Err(CodeError::InvalidShape(n.to_vec()));
    }
    let shape = Shape::new(n.to_vec())?;
    let max = shape.max_degree();
    if r > max {
        return Err(CodeError::OrderOutOfRange { r, max });
    }
    let m = n.len();
    let big_n = shape.order();
    let k = (0..big_n).filter(|&i| shape.degree_of(i) <= r).count();
    // tail[s] = Σ_{i>s}(n_i − 1), with s 1-based
    let tail = |s: usize| -> usize { n[s..].iter().map(|x| x - 1).sum() };
    let (s, ell) = if r == max {
        (1, n[0] - 1)
    } else {
        let s = (1..=m).find(|&s| tail(s) <= r && r < tail(s - 1)).expect("r below the maximal degree");
        (s, r - tail(s))
    };
    let d = (n[s - 1] - ell) * n[..s - 1].iter().product::<usize>();
    Ok(CodeParams { n: big_n, k, d, s, ell })
}

/// The tower-independent data of a code: shape, order, parameters and the
/// monomials of degree at most r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeLayout {
    shape: Shape,
    r: usize,
    params: CodeParams,
    monomials: Vec<usize>,
}

impl CodeLayout {
    pub fn new(n: &[usize], r: usize) -> Result<Self, CodeError> {
        let params = code_params(n, r)?;
        let shape = Shape::new(n.to_vec())?;
        let monomials = (0..shape.order()).filter(|&i| shape.degree_of(i) <= r).collect();
        Ok(CodeLayout { shape, r, params, monomials })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn length(&self) -> usize {
        self.params.n
    }

    pub fn dimension(&self) -> usize {
        self.params.k
    }

    pub fn distance(&self) -> usize {
        self.params.d
    }

    /// Decoding radius ⌊(d−1)/2⌋.
    pub fn radius(&self) -> usize {
        (self.params.d - 1) / 2
    }

    /// φ-indices of the monomials of degree at most r, increasing.
    pub fn monomials(&self) -> &[usize] {
        &self.monomials
    }
}

/// A θ-Reed–Muller code over a tower, possibly restricted to the subgroup
/// generated by the first `level` generators.
#[derive(Clone)]
pub struct CodeSpec {
    tower: Arc<Tower>,
    level: usize,
    layout: CodeLayout,
    dual: Arc<OnceLock<Matrix<AlgebraElement>>>,
}

impl std::fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeSpec").field("layout", &self.layout).finish()
    }
}

impl std::ops::Deref for CodeSpec {
    type Target = CodeLayout;

    fn deref(&self) -> &CodeLayout {
        &self.layout
    }
}

impl CodeSpec {
    pub fn new(tower: Arc<Tower>, r: usize) -> Result<Self, CodeError> {
        let m = tower.shape().m();
        Self::on_subgroup(tower, m, r)
    }

    pub fn on_subgroup(tower: Arc<Tower>, level: usize, r: usize) -> Result<Self, CodeError> {
        if level == 0 || level > tower.shape().m() {
            return Err(CodeError::LevelOutOfRange { have: tower.shape().m(), want: level });
        }
        let layout = CodeLayout::new(tower.shape().prefix(level).dims(), r)?;
        Ok(CodeSpec { tower, level, layout, dual: Arc::new(OnceLock::new()) })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn layout(&self) -> &CodeLayout {
        &self.layout
    }

    pub fn is_full_group(&self) -> bool {
        self.level == self.tower.shape().m()
    }

    pub fn descriptor(&self) -> SpecFile {
        SpecFile { tower: self.tower.descriptor(), n: self.shape().dims().to_vec(), r: self.r(), k: None }
    }
}

/// JSON code description: a tower descriptor plus the code shape and order.
/// `k` is only used by the Reed–Solomon path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub tower: TowerDescriptor,
    pub n: Vec<usize>,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl SpecFile {
    pub fn build(&self) -> Result<CodeSpec, CodeError> {
        let tower = Tower::from_descriptor(&self.tower)?;
        if tower.shape().dims() != self.n.as_slice() {
            return Err(CodeError::InvalidShape(self.n.clone()));
        }
        CodeSpec::new(Arc::new(tower), self.r)
    }
}

/// Places the message at the monomials of degree ≤ r and evaluates.
pub fn encode(spec: &CodeSpec, message: &[AlgebraElement]) -> Result<(ThetaPoly, Vec<AlgebraElement>), CodeError> {
    if message.len() != spec.dimension() {
        return Err(CodeError::LengthMismatch { expected: spec.dimension(), got: message.len() });
    }
    let tower = spec.tower();
    let mut c = ThetaPoly::zero_on(tower, spec.level);
    for (&i, x) in spec.monomials().iter().zip(message) {
        c.set_coeff(i, x.clone());
    }
    let eval = skew::evaluations(tower, &c);
    Ok((c, eval))
}

/// Stacked encodings of the unit messages, rows in φ order.
pub fn generator_matrix(spec: &CodeSpec) -> Matrix<AlgebraElement> {
    let tower = spec.tower();
    let n = spec.length();
    spec.monomials().iter().map(|&g| (0..n).map(|j| tower.apply_aut(g, &tower.basis(j))).collect()).collect()
}

/// Parity-check matrix: a basis of the L-vectors orthogonal to every row of
/// the generator matrix. Computed once per spec.
pub fn dual_generator(spec: &CodeSpec) -> &Matrix<AlgebraElement> {
    spec.dual.get_or_init(|| {
        crate::ops::isolated(|| linalg::nullspace(spec.tower(), &generator_matrix(spec), spec.length())).0
    })
}

pub fn is_codeword(spec: &CodeSpec, y: &[AlgebraElement]) -> Result<bool, CodeError> {
    if y.len() != spec.length() {
        return Err(CodeError::LengthMismatch { expected: spec.length(), got: y.len() });
    }
    let tower = spec.tower();
    Ok(dual_generator(spec).iter().all(|h| linalg::dot(tower, h, y).is_zero()))
}

/// The element α_m of a binary tower and the multiplier applied to the
/// lower-right block: −α_m for Kummer towers, α_m + 1 for Artin–Schreier.
fn binary_pieces(tower: &Tower, m: usize) -> Result<(AlgebraElement, AlgebraElement), CodeError> {
    if m == 0 || m > tower.shape().m() {
        return Err(CodeError::LevelOutOfRange { have: tower.shape().m(), want: m });
    }
    let alpha = tower.basis(1 << (m - 1));
    let twisted = match tower.family() {
        Family::Kummer { .. } => tower.neg(&alpha),
        Family::ArtinSchreier { .. } => tower.add(&alpha, &tower.one()),
        Family::Finite { .. } => return Err(CodeError::NotBinaryShape),
    };
    Ok((alpha, twisted))
}

fn scaled(tower: &Tower, c: &AlgebraElement, m: &Matrix<AlgebraElement>) -> Matrix<AlgebraElement> {
    m.iter().map(|row| row.iter().map(|x| tower.mul(c, x)).collect()).collect()
}

fn block(top_left: Matrix<AlgebraElement>, top_right: Matrix<AlgebraElement>) -> Matrix<AlgebraElement> {
    top_left
        .into_iter()
        .zip(top_right)
        .map(|(mut a, b)| {
            a.extend(b);
            a
        })
        .collect()
}

/// Generator of RM(r, m) by the block recursion
/// `[[G(r,m−1), α_m·G(r,m−1)], [G(r−1,m−1), c·G(r−1,m−1)]]`.
pub fn binary_generator(tower: &Tower, r: isize, m: usize) -> Result<Matrix<AlgebraElement>, CodeError> {
    if !tower.is_binary() {
        return Err(CodeError::NotBinaryShape);
    }
    if r < 0 {
        return Ok(Vec::new());
    }
    if m == 0 {
        return Ok(vec![vec![tower.one()]]);
    }
    let (alpha, twisted) = binary_pieces(tower, m)?;
    let upper = binary_generator(tower, r.min(m as isize - 1), m - 1)?;
    let lower = binary_generator(tower, r - 1, m - 1)?;
    let mut g = block(upper.clone(), scaled(tower, &alpha, &upper));
    g.extend(block(lower.clone(), scaled(tower, &twisted, &lower)));
    Ok(g)
}

/// Parity-check matrix of RM(m−s−1, m), rows indexed by the monomials of
/// weight ≤ s. Kummer:
/// `[[G*(s,m−1), −α⁻¹G*(s,m−1)], [G*(s−1,m−1), α⁻¹G*(s−1,m−1)]]`;
/// Artin–Schreier: `[[α·G*(s,m−1), G*(s,m−1)], [(α+1)·G*(s−1,m−1), G*(s−1,m−1)]]`.
pub fn binary_dual_generator(tower: &Tower, s: isize, m: usize) -> Result<Matrix<AlgebraElement>, CodeError> {
    if !tower.is_binary() {
        return Err(CodeError::NotBinaryShape);
    }
    if s < 0 {
        return Ok(Vec::new());
    }
    if m == 0 {
        return Ok(vec![vec![tower.one()]]);
    }
    let (alpha, _) = binary_pieces(tower, m)?;
    let upper = binary_dual_generator(tower, s.min(m as isize - 1), m - 1)?;
    let lower = binary_dual_generator(tower, s - 1, m - 1)?;
    let alpha_inv = tower.inv(&alpha)?;
    let one = tower.one();
    let (ul, ur, ll, lr) = match tower.family() {
        Family::Kummer { .. } => (one.clone(), tower.neg(&alpha_inv), one, alpha_inv),
        _ => (alpha.clone(), one.clone(), tower.add(&alpha, &one), one),
    };
    let mut g = block(scaled(tower, &ul, &upper), scaled(tower, &ur, &upper));
    g.extend(block(scaled(tower, &ll, &lower), scaled(tower, &lr, &lower)));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::{Poly2, RatFunc2};
    use crate::tower::{build_artin_schreier_tower, build_finite_tower, build_kummer_tower};
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kummer(a: &[i64]) -> Arc<Tower> {
        let a: Vec<BigRational> = a.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Arc::new(build_kummer_tower(&a).unwrap())
    }

    fn as_tower() -> Arc<Tower> {
        Arc::new(
            build_artin_schreier_tower(&[
                RatFunc2::from_poly(Poly2::from_u64(2)),
                RatFunc2::from_poly(Poly2::from_u64(8)),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn parameter_examples() {
        let p = code_params(&[7, 7], 4).unwrap();
        assert_eq!((p.n, p.k, p.d, p.s, p.ell), (49, 15, 21, 2, 4));
        let p = code_params(&[2, 2, 2], 1).unwrap();
        assert_eq!((p.n, p.k, p.d), (8, 4, 4));
        for n in [vec![3, 2], vec![5, 3], vec![4, 4, 2]] {
            let p = code_params(&n, 0).unwrap();
            assert_eq!((p.k, p.d, p.s, p.ell), (1, p.n, n.len(), 0));
        }
        assert_eq!(code_params(&[5, 3], 1).unwrap().d, 10);
        assert_eq!(code_params(&[5, 3], 2).unwrap().d, 5);
        assert_eq!(code_params(&[5, 3], 3).unwrap().d, 4);
        assert_eq!(code_params(&[5, 3], 6).unwrap().d, 1);
        assert_eq!(code_params(&[3, 2], 1).unwrap().d, 3);
        assert!(matches!(code_params(&[2, 3], 1), Err(CodeError::InvalidShape(_))));
        assert!(matches!(code_params(&[3, 2], 4), Err(CodeError::OrderOutOfRange { .. })));
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Brute-force minimum distance over the monomial code, independent of
    /// the closed form: the fewest roots-free positions is replaced by the
    /// smallest N − (largest number of monomials a degree-≤r polynomial can
    /// vanish on) only for the binary case, where d = 2^{m−r} is classical.
    #[test]
    fn binary_identities() {
        for m in 1..=6 {
            for r in 0..=m {
                let p = code_params(&vec![2; m], r).unwrap();
                assert_eq!(p.k, (0..=r).map(|i| binom(m, i)).sum::<usize>());
                assert_eq!(p.d, 1 << (m - r));
            }
        }
    }

    #[test]
    fn generator_matches_running_example() {
        let l = kummer(&[2, 3, 5]);
        let spec = CodeSpec::new(l.clone(), 1).unwrap();
        let g = generator_matrix(&spec);
        assert_eq!(g.len(), 4);
        let signs = [
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1, 1, -1, -1],
            [1, 1, 1, 1, -1, -1, -1, -1],
        ];
        for (row, sg) in g.iter().zip(signs) {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x, &l.scale(&l.base().from_i64(sg[j]), &l.basis(j)));
            }
        }
        for (i, &mono) in spec.monomials().iter().enumerate() {
            let mut msg = vec![l.zero(); 4];
            msg[i] = l.one();
            let (_, eval) = encode(&spec, &msg).unwrap();
            assert_eq!(eval, g[i]);
            assert_eq!(mono, [0, 1, 2, 4][i]);
        }
    }

    #[test]
    fn binary_generator_equals_evaluation_generator() {
        for l in [kummer(&[2, 3, 5, 7]), as_tower()] {
            let m_max = l.shape().m();
            for m in 1..=m_max {
                for r in 0..=m {
                    let spec = CodeSpec::on_subgroup(l.clone(), m, r).unwrap();
                    assert_eq!(binary_generator(&l, r as isize, m).unwrap(), generator_matrix(&spec), "r={r} m={m}");
                }
            }
        }
        let f = Arc::new(build_finite_tower(2, &[3, 2]).unwrap());
        assert_eq!(binary_generator(&f, 1, 1), Err(CodeError::NotBinaryShape));
    }

    #[test]
    fn duality_and_dual_rank() {
        for l in [kummer(&[2, 3, 5, 7]), as_tower()] {
            let m_max = l.shape().m();
            for m in 1..=m_max {
                for r in 0..=m {
                    let g = binary_generator(&l, r as isize, m).unwrap();
                    let h = binary_dual_generator(&l, m as isize - r as isize - 1, m).unwrap();
                    let k = g.len();
                    assert_eq!(h.len(), (1 << m) - k);
                    assert_eq!(linalg::rank(&*l, &h), h.len());
                    if h.is_empty() {
                        continue;
                    }
                    let prod = linalg::mat_mul(&*l, &g, &linalg::transpose(&h));
                    assert!(linalg::is_zero_matrix(&*l, &prod), "r={r} m={m}");
                }
            }
        }
        let l = kummer(&[2, 3]);
        let spec = CodeSpec::new(l.clone(), 1).unwrap();
        assert_eq!(dual_generator(&spec).len(), 1);
        let spec = CodeSpec::new(l.clone(), 0).unwrap();
        let prod = linalg::mat_mul(&*l, &generator_matrix(&spec), &linalg::transpose(dual_generator(&spec)));
        assert!(linalg::is_zero_matrix(&*l, &prod));
        let spec = CodeSpec::new(kummer(&[2, 3, 5]), 1).unwrap();
        assert_eq!(linalg::rank(spec.tower(), dual_generator(&spec)), 4);
    }

    #[test]
    fn membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let spec = CodeSpec::new(Arc::new(build_finite_tower(2, &[3, 2]).unwrap()), 1).unwrap();
        let l = spec.tower();
        assert!(is_codeword(&spec, &vec![l.zero(); 6]).unwrap());
        for _ in 0..100 {
            let msg: Vec<_> = (0..spec.dimension()).map(|_| l.random_element(&mut rng)).collect();
            let (_, eval) = encode(&spec, &msg).unwrap();
            assert!(is_codeword(&spec, &eval).unwrap());
            let e = skew::random_rank_error(l, 1, &mut rng).unwrap();
            let y: Vec<_> = eval.iter().zip(skew::evaluations(l, &e)).map(|(a, b)| l.add(a, &b)).collect();
            assert!(!is_codeword(&spec, &y).unwrap());
        }
        assert!(matches!(encode(&spec, &[]), Err(CodeError::LengthMismatch { .. })));
    }

    #[test]
    fn codeword_rank_at_least_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (p, n, r) in [(2u64, vec![3usize, 2], 1usize), (2, vec![5, 3], 1), (2, vec![5, 3], 3), (3, vec![4], 2)] {
            let spec = CodeSpec::new(Arc::new(build_finite_tower(p, &n).unwrap()), r).unwrap();
            let l = spec.tower();
            for _ in 0..40 {
                let msg: Vec<_> = (0..spec.dimension()).map(|_| l.random_element(&mut rng)).collect();
                if msg.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let (c, _) = encode(&spec, &msg).unwrap();
                assert!(skew::rank(l, &c).unwrap() >= spec.distance());
            }
        }
    }

    #[test]
    fn exhaustive_minimum_distance_small() {
        // every nonzero codeword of RM(r,(3,2)) over F_{2^6} with coefficients
        // in {0, 1, x} (k ≤ 2 exhaustion on sub-samples)
        let spec = CodeSpec::new(Arc::new(build_finite_tower(2, &[3, 2]).unwrap()), 1).unwrap();
        let l = spec.tower();
        let choices = [l.zero(), l.one(), l.basis(1), l.basis(5)];
        let mut min = usize::MAX;
        for a in &choices {
            for b in &choices {
                for c in &choices {
                    let msg = vec![a.clone(), b.clone(), c.clone()];
                    if msg.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let (cw, _) = encode(&spec, &msg).unwrap();
                    min = min.min(skew::rank(l, &cw).unwrap());
                }
            }
        }
        assert!(min >= spec.distance());
    }

    fn shapes_up_to(max: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, order: usize, max: usize, out: &mut Vec<Vec<usize>>) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            let hi = cur.last().copied().unwrap_or(max).min(max / order);
            for n in 2..=hi {
                cur.push(n);
                rec(cur, order * n, max, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), 1, max, &mut out);
        out
    }

    /// Independent check of the distance formula: the closed form must equal
    /// N minus the largest count of group elements sitting below any degree-r
    /// leading monomial in the dominance order (a product-of-cyclic bound that
    /// is tight for these codes), computed by brute force.
    #[test]
    fn exhaustive_parameter_identities() {
        for n in shapes_up_to(64) {
            let shape = Shape::new(n.clone()).unwrap();
            for r in 0..=shape.max_degree() {
                let p = code_params(&n, r).unwrap();
                let k = (0..shape.order()).filter(|&i| shape.degree_of(i) <= r).count();
                assert_eq!(p.k, k);
                // the revlex-largest monomial of degree ≤ r is φ⁻¹(N − d)
                let far = (0..shape.order()).filter(|&i| shape.degree_of(i) <= r).max().unwrap();
                assert_eq!(far, p.n - p.d, "n={n:?} r={r}");
                // d = Π (n_i − i_far_i) over the furthest monomial
                let e = shape.phi_inv(far);
                let prod: usize = n.iter().zip(&e).map(|(ni, ei)| ni - ei).product();
                assert_eq!(p.d, prod, "n={n:?} r={r}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn encode_is_linear(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = CodeSpec::new(kummer(&[2, 3]), 1).unwrap();
            let l = spec.tower();
            let a: Vec<_> = (0..3).map(|_| l.random_element(&mut rng)).collect();
            let b: Vec<_> = (0..3).map(|_| l.random_element(&mut rng)).collect();
            let sum: Vec<_> = a.iter().zip(&b).map(|(x, y)| l.add(x, y)).collect();
            let ea = encode(&spec, &a).unwrap().1;
            let eb = encode(&spec, &b).unwrap().1;
            let es = encode(&spec, &sum).unwrap().1;
            let expected: Vec<_> = ea.iter().zip(&eb).map(|(x, y)| l.add(x, y)).collect();
            prop_assert_eq!(es, expected);
        }
    }
}
