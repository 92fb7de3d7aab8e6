//! The Galois extension L/K as a K-algebra with an explicit basis.
//!
//! Elements of L are coordinate vectors over K. Multiplication goes through
//! sparse structure constants, inversion solves an N×N system over K, and the
//! Galois group acts through one K-matrix per group element (in φ order).
//! Three families are supported: finite fields F_{p^N} with generators taken
//! inside the Frobenius group, multiquadratic Kummer extensions of Q, and
//! composites of Artin–Schreier extensions of F_2(t).

mod build;
mod descriptor;
pub(crate) mod fp_poly;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::group::{GroupError, Shape};
use crate::kfield::{BaseField, FieldScalar, KFieldError, RatFunc2};
use crate::linalg::{self, Field, Matrix};

pub use descriptor::TowerDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("shape entries must be pairwise coprime for a finite tower, got {0:?}")]
    NonCoprimeShape(Vec<usize>),
    #[error("no irreducible polynomial of degree {degree} over F_{p} found within {budget} candidates")]
    NoIrreducibleFound { p: u64, degree: usize, budget: usize },
    #[error("the given polynomial is not irreducible of degree {0}")]
    NotIrreducible(usize),
    #[error("radicands are multiplicatively dependent modulo squares (subset {0:?})")]
    DependentRadicands(Vec<usize>),
    #[error("X^2 + X + a is reducible for radicand {0}")]
    ReducibleArtinSchreier(usize),
    #[error("Artin-Schreier radicands are dependent (subset {0:?})")]
    DependentExtensions(Vec<usize>),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element has {got} coordinates, tower degree is {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("tower invariant violated: {0}")]
    InvalidTower(String),
    #[error("degenerate trace form")]
    DegenerateTraceForm,
    #[error("invalid tower descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Field(#[from] KFieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How the tower was constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// F_{p^N} = F_p[x]/(f); `irreducible` lists f's coefficients from the
    /// constant term up, ending with the leading 1.
    Finite { p: u64, irreducible: Vec<u64>, seed: u64 },
    /// Q(√a_1, …, √a_m).
    Kummer { radicands: Vec<BigRational> },
    /// F_2(t)(α_1, …, α_m) with α_i² = α_i + a_i.
    ArtinSchreier { radicands: Vec<RatFunc2> },
}

/// An element of L given by its coordinates in the tower basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    coords: Vec<FieldScalar>,
}

impl AlgebraElement {
    pub fn coords(&self) -> &[FieldScalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<FieldScalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_text(&self) -> String {
        self.coords.iter().map(|c| c.to_text()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_text())
    }
}

type Sparse = Vec<(usize, FieldScalar)>;

/// A validated extension tower. Immutable after construction.
pub struct Tower {
    base: BaseField,
    shape: Shape,
    degree: usize,
    family: Family,
    labels: Vec<String>,
    /// `products[i][j]`: β_i·β_j as (virtual index, coefficient) pairs.
    products: Vec<Vec<Sparse>>,
    /// Virtual index → coordinates; indices below N are the basis itself.
    reduction: Vec<Sparse>,
    /// Composite automorphism for each group element in φ order; column j
    /// (stored sparsely) is the image of β_j.
    auts: Vec<Vec<Sparse>>,
    interp: Vec<OnceLock<Matrix<AlgebraElement>>>,
    /// Integer forms of the product and reduction tables over Q.
    integral: Option<IntegralTables>,
}

/// `products` and `reduction` scaled to integer coefficients: products by
/// `d_prod`, reductions by `d_red`.
struct IntegralTables {
    products: Vec<Vec<Vec<(usize, BigInt)>>>,
    reduction: Vec<Vec<(usize, BigInt)>>,
    d_prod: BigInt,
    d_red: BigInt,
}

impl IntegralTables {
    fn build(products: &[Vec<Sparse>], reduction: &[Sparse]) -> Option<Self> {
        fn ratio(c: &FieldScalar) -> Option<&BigRational> {
            match c {
                FieldScalar::Rational(q) => Some(q),
                _ => None,
            }
        }
        fn scale(entries: &Sparse, d: &BigInt) -> Option<Vec<(usize, BigInt)>> {
            entries.iter().map(|(v, c)| ratio(c).map(|q| (*v, (q * d).to_integer()))).collect()
        }
        let mut d_prod = BigInt::one();
        for (_, c) in products.iter().flatten().flatten() {
            d_prod = d_prod.lcm(ratio(c)?.denom());
        }
        let mut d_red = BigInt::one();
        for (_, c) in reduction.iter().flatten() {
            d_red = d_red.lcm(ratio(c)?.denom());
        }
        let products = products
            .iter()
            .map(|row| row.iter().map(|e| scale(e, &d_prod)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let reduction = reduction.iter().map(|e| scale(e, &d_red)).collect::<Option<Vec<_>>>()?;
        Some(IntegralTables { products, reduction, d_prod, d_red })
    }
}

/// Numerators over a common denominator, or `None` if a coordinate is not rational.
fn common_denominator(x: &AlgebraElement) -> Option<(Vec<BigInt>, BigInt)> {
    let mut d = BigInt::one();
    for c in &x.coords {
        match c {
            FieldScalar::Rational(q) => d = d.lcm(q.denom()),
            _ => return None,
        }
    }
    let nums = x
        .coords
        .iter()
        .map(|c| match c {
            FieldScalar::Rational(q) => q.numer() * (&d / q.denom()),
            _ => unreachable!(),
        })
        .collect();
    Some((nums, d))
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("base", &self.base)
            .field("shape", &self.shape)
            .field("family", &self.family)
            .finish()
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.shape == other.shape && self.family == other.family
    }
}

impl Tower {
    fn assemble(
        base: BaseField,
        shape: Shape,
        family: Family,
        labels: Vec<String>,
        products: Vec<Vec<Sparse>>,
        reduction: Vec<Sparse>,
        auts: Vec<Vec<Sparse>>,
    ) -> Result<Tower, TowerError> {
        let degree = shape.order();
        let interp = (0..=shape.m()).map(|_| OnceLock::new()).collect();
        let integral = match base {
            BaseField::Rational => IntegralTables::build(&products, &reduction),
            _ => None,
        };
        let tower = Tower { base, shape, degree, family, labels, products, reduction, auts, interp, integral };
        tower.validate()?;
        Ok(tower)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.family, Family::Kummer { .. } | Family::ArtinSchreier { .. })
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { coords: vec![self.base.zero(); self.degree] }
    }

    pub fn one(&self) -> AlgebraElement {
        self.basis(0)
    }

    pub fn basis(&self, j: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.coords[j] = self.base.one();
        x
    }

    pub fn element(&self, coords: Vec<FieldScalar>) -> Result<AlgebraElement, TowerError> {
        if coords.len() != self.degree {
            return Err(TowerError::DegreeMismatch { expected: self.degree, got: coords.len() });
        }
        if let Some(bad) = coords.iter().find(|c| c.field() != self.base) {
            return Err(KFieldError::FieldMismatch(bad.field(), self.base.clone()).into());
        }
        Ok(AlgebraElement { coords })
    }

    /// Embeds a scalar of K as `c·1`.
    pub fn scalar(&self, c: FieldScalar) -> AlgebraElement {
        let mut x = self.zero();
        x.coords[0] = c;
        x
    }

    pub fn from_i64(&self, c: i64) -> AlgebraElement {
        self.scalar(self.base.from_i64(c))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        AlgebraElement { coords: (0..self.degree).map(|_| self.base.random(rng)).collect() }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgebraElement, TowerError> {
        let coords = text.split_whitespace().map(|s| self.base.parse(s)).collect::<Result<Vec<_>, _>>()?;
        self.element(coords)
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| {
                    if b.is_zero() {
                        a.clone()
                    } else if a.is_zero() {
                        b.clone()
                    } else {
                        a.add(b)
                    }
                })
                .collect(),
        }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a.sub(b) })
                .collect(),
        }
    }

    pub fn neg(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coords: x.coords.iter().map(|a| if a.is_zero() { a.clone() } else { a.neg() }).collect() }
    }

    /// `c·x` for a scalar `c` of K.
    pub fn scale(&self, c: &FieldScalar, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coords: x.coords.iter().map(|a| if a.is_zero() { a.clone() } else { c.mul(a) }).collect() }
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let n = self.degree;
        let xs: Vec<usize> = (0..n).filter(|&i| !x.coords[i].is_zero()).collect();
        let ys: Vec<usize> = (0..n).filter(|&j| !y.coords[j].is_zero()).collect();
        if xs.is_empty() || ys.is_empty() {
            return self.zero();
        }
        // scalars x_0 and y_0 act coordinatewise
        if xs == [0] {
            return self.scale(&x.coords[0], y);
        }
        if ys == [0] {
            return self.scale(&y.coords[0], x);
        }
        if let Some(t) = &self.integral {
            if let Some(z) = self.mul_integral(t, x, y, &xs, &ys) {
                return z;
            }
        }
        self.mul_generic(x, y, &xs, &ys)
    }

    fn mul_generic(&self, x: &AlgebraElement, y: &AlgebraElement, xs: &[usize], ys: &[usize]) -> AlgebraElement {
        let n = self.degree;
        let mut acc: Vec<Option<FieldScalar>> = vec![None; self.reduction.len()];
        for &i in xs {
            for &j in ys {
                let xy = x.coords[i].mul(&y.coords[j]);
                for (v, c) in &self.products[i][j] {
                    let term = if c.is_one() { xy.clone() } else { xy.mul(c) };
                    acc[*v] = Some(match acc[*v].take() {
                        None => term,
                        Some(a) => a.add(&term),
                    });
                }
            }
        }
        let mut out: Vec<Option<FieldScalar>> = acc[..n].to_vec();
        for (v, a) in acc.iter().enumerate().skip(n) {
            let Some(a) = a else { continue };
            if a.is_zero() {
                continue;
            }
            for (k, c) in &self.reduction[v] {
                let term = if c.is_one() { a.clone() } else { a.mul(c) };
                out[*k] = Some(match out[*k].take() {
                    None => term,
                    Some(b) => b.add(&term),
                });
            }
        }
        AlgebraElement { coords: out.into_iter().map(|c| c.unwrap_or_else(|| self.base.zero())).collect() }
    }

    fn mul_integral(
        &self,
        t: &IntegralTables,
        x: &AlgebraElement,
        y: &AlgebraElement,
        xs: &[usize],
        ys: &[usize],
    ) -> Option<AlgebraElement> {
        let (xn, xd) = common_denominator(x)?;
        let (yn, yd) = common_denominator(y)?;
        let n = self.degree;
        // K-operations the scalar path would have performed
        let mut ticks = 0u64;
        let mut acc = vec![BigInt::zero(); t.reduction.len()];
        let mut touched = vec![false; t.reduction.len()];
        for &i in xs {
            for &j in ys {
                let xy = &xn[i] * &yn[j];
                ticks += 1;
                for ((v, c), (_, q)) in t.products[i][j].iter().zip(&self.products[i][j]) {
                    acc[*v] += &xy * c;
                    ticks += u64::from(!q.is_one()) + u64::from(std::mem::replace(&mut touched[*v], true));
                }
            }
        }
        let mut out: Vec<BigInt> = acc[..n].iter().map(|a| a * &t.d_red).collect();
        let mut out_touched = touched[..n].to_vec();
        for (v, a) in acc.iter().enumerate().skip(n) {
            if a.is_zero() {
                continue;
            }
            for ((k, c), (_, q)) in t.reduction[v].iter().zip(&self.reduction[v]) {
                out[*k] += a * c;
                ticks += u64::from(!q.is_one()) + u64::from(std::mem::replace(&mut out_touched[*k], true));
            }
        }
        crate::ops::charge(ticks);
        let denom = xd * yd * &t.d_prod * &t.d_red;
        let coords = out.into_iter().map(|num| FieldScalar::Rational(BigRational::new(num, denom.clone()))).collect();
        Some(AlgebraElement { coords })
    }

    /// K-matrix of multiplication by `x`: column j holds x·β_j.
    pub fn mul_matrix(&self, x: &AlgebraElement) -> Matrix<FieldScalar> {
        let cols: Vec<AlgebraElement> = (0..self.degree).map(|j| self.mul(x, &self.basis(j))).collect();
        exp_basis(self, &cols)
    }

    pub fn inv(&self, x: &AlgebraElement) -> Result<AlgebraElement, TowerError> {
        if x.is_zero() {
            return Err(TowerError::ZeroInverse);
        }
        let nz: Vec<usize> = (0..self.degree).filter(|&i| !x.coords[i].is_zero()).collect();
        if nz == [0] {
            return Ok(self.scalar(x.coords[0].inv()?));
        }
        if let Family::Finite { irreducible, p, .. } = &self.family {
            let f: Vec<FieldScalar> = irreducible.iter().map(|&v| FieldScalar::Prime { v, p: *p }).collect();
            return Ok(AlgebraElement { coords: poly_inverse(&self.base, &x.coords, &f) });
        }
        // x⁻¹ = (product of the conjugates of x) / N(x), one generator at a
        // time: multiplying y by its θ_i-conjugates makes it θ_i-invariant
        let mut y = x.clone();
        let mut acc = self.one();
        for i in 0..self.shape.m() {
            let mut exps = vec![0; self.shape.m()];
            let mut conj = self.one();
            for k in 1..self.shape.dims()[i] {
                exps[i] = k;
                conj = self.mul(&conj, &self.apply_aut(self.shape.phi(&exps), &y));
            }
            acc = self.mul(&acc, &conj);
            y = self.mul(&y, &conj);
        }
        if y.coords[1..].iter().any(|c| !c.is_zero()) {
            return Err(TowerError::InvalidTower("norm of an element is not in the base field".into()));
        }
        Ok(self.scale(&y.coords[0].inv()?, &acc))
    }

    /// Applies the group element with φ-index `g`.
    pub fn apply_aut(&self, g: usize, x: &AlgebraElement) -> AlgebraElement {
        if g == 0 {
            return x.clone();
        }
        let mut out: Vec<Option<FieldScalar>> = vec![None; self.degree];
        for (j, xj) in x.coords.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, c) in &self.auts[g][j] {
                let term = if c.is_one() { xj.clone() } else { xj.mul(c) };
                out[*k] = Some(match out[*k].take() {
                    None => term,
                    Some(b) => b.add(&term),
                });
            }
        }
        AlgebraElement { coords: out.into_iter().map(|c| c.unwrap_or_else(|| self.base.zero())).collect() }
    }

    /// Dense K-matrix of the group element with φ-index `g`.
    pub fn aut_matrix(&self, g: usize) -> Matrix<FieldScalar> {
        let mut m = linalg::zeros(&self.base, self.degree, self.degree);
        for (j, col) in self.auts[g].iter().enumerate() {
            for (k, c) in col {
                m[*k][j] = c.clone();
            }
        }
        m
    }

    /// Matrices of the generators θ_1, …, θ_m.
    pub fn generator_matrices(&self) -> Vec<Matrix<FieldScalar>> {
        (0..self.shape.m())
            .map(|i| {
                let mut e = vec![0; self.shape.m()];
                e[i] = 1;
                self.aut_matrix(self.shape.phi(&e))
            })
            .collect()
    }

    /// K-matrix of multiplication by the basis element β_j.
    pub fn mul_table(&self, j: usize) -> Matrix<FieldScalar> {
        self.mul_matrix(&self.basis(j))
    }

    /// Trace of each basis element, as a K-linear functional table.
    pub fn trace_table(&self) -> Vec<FieldScalar> {
        (0..self.degree).map(|j| self.trace(&self.basis(j))).collect()
    }

    /// `Σ_g g(x)`, which lies in K.
    pub fn trace(&self, x: &AlgebraElement) -> FieldScalar {
        let mut acc = self.zero();
        for g in 0..self.degree {
            acc = self.add(&acc, &self.apply_aut(g, x));
        }
        debug_assert!(acc.coords[1..].iter().all(|c| c.is_zero()));
        acc.coords[0].clone()
    }

    /// The dual basis B* with Tr(β_i·β*_j) = δ_ij.
    pub fn dual_basis(&self) -> Result<Vec<AlgebraElement>, TowerError> {
        let n = self.degree;
        let gram: Matrix<FieldScalar> =
            (0..n).map(|i| (0..n).map(|j| self.trace(&self.mul(&self.basis(i), &self.basis(j)))).collect()).collect();
        let inv = linalg::inverse(&self.base, &gram).ok_or(TowerError::DegenerateTraceForm)?;
        Ok((0..n).map(|j| AlgebraElement { coords: (0..n).map(|k| inv[k][j].clone()).collect() }).collect())
    }

    /// `M[g][j] = γ_g(β_j)` for the subgroup generated by the first `k`
    /// generators, whose order is `N_k = n_1⋯n_k`.
    pub fn evaluation_matrix(&self, k: usize) -> Matrix<AlgebraElement> {
        let nk = self.shape.prefix(k).order();
        (0..nk).map(|g| (0..nk).map(|j| self.apply_aut(g, &self.basis(j))).collect()).collect()
    }

    /// Inverse of the transposed evaluation matrix; maps evaluations
    /// `(P(β_j))_j` to the coefficients of P. Built once per `k`; building
    /// it is not charged to the operation counter.
    pub fn interpolation_matrix(&self, k: usize) -> &Matrix<AlgebraElement> {
        self.interp[k].get_or_init(|| {
            crate::ops::isolated(|| {
                let m = linalg::transpose(&self.evaluation_matrix(k));
                linalg::inverse(self, &m).expect("evaluation matrix of a Galois extension is invertible")
            })
            .0
        })
    }

    fn validate(&self) -> Result<(), TowerError> {
        let n = self.degree;
        if self.auts.len() != n {
            return Err(TowerError::InvalidTower("wrong number of automorphisms".into()));
        }
        for i in 0..self.shape.m() {
            let mut e = vec![0; self.shape.m()];
            e[i] = 1;
            let g = self.shape.phi(&e);
            for a in 0..n {
                for b in a..n {
                    let lhs = self.apply_aut(g, &self.mul(&self.basis(a), &self.basis(b)));
                    let rhs = self.mul(&self.apply_aut(g, &self.basis(a)), &self.apply_aut(g, &self.basis(b)));
                    if lhs != rhs {
                        return Err(TowerError::InvalidTower(format!("generator {i} is not multiplicative")));
                    }
                }
            }
        }
        // the composite table must agree with the generator action, which
        // forces it to be a group action by induction on the exponents
        for i in 0..self.shape.m() {
            let mut e = vec![0; self.shape.m()];
            e[i] = 1;
            let g = self.shape.phi(&e);
            for h in 0..n {
                let gh = self.shape.add(g, h);
                for j in 0..n {
                    if self.apply_aut(g, &self.apply_aut(h, &self.basis(j))) != self.apply_aut(gh, &self.basis(j)) {
                        return Err(TowerError::InvalidTower(format!("composite {g}∘{h} ≠ {gh}")));
                    }
                }
            }
        }
        let mats: Vec<Matrix<FieldScalar>> = (0..n).map(|g| self.aut_matrix(g)).collect();
        for a in 0..n {
            for b in a + 1..n {
                if mats[a] == mats[b] {
                    return Err(TowerError::InvalidTower(format!("automorphisms {a} and {b} coincide")));
                }
            }
        }
        Ok(())
    }
}

/// Column j is the coordinate vector of `v[j]`.
pub fn exp_basis(tower: &Tower, v: &[AlgebraElement]) -> Matrix<FieldScalar> {
    (0..tower.degree).map(|i| v.iter().map(|x| x.coords[i].clone()).collect()).collect()
}

/// K-rank of a vector over L: the dimension of the K-span of its entries.
pub fn rank_of_vector(tower: &Tower, v: &[AlgebraElement]) -> usize {
    linalg::rank(tower.base(), &exp_basis(tower, v))
}

fn poly_trim(mut a: Vec<FieldScalar>) -> Vec<FieldScalar> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Inverse of a nonzero polynomial `a` modulo the irreducible `f` by the
/// extended Euclidean algorithm; both given low degree first.
fn poly_inverse(base: &BaseField, a: &[FieldScalar], f: &[FieldScalar]) -> Vec<FieldScalar> {
    let n = f.len() - 1;
    let (mut r0, mut r1) = (f.to_vec(), poly_trim(a.to_vec()));
    let (mut s0, mut s1) = (Vec::new(), vec![base.one()]);
    while r1.len() > 1 {
        // one division step r0 = q·r1 + rem, folded into the Bezout update
        let lead_inv = r1.last().expect("nonzero").inv().expect("nonzero leading coefficient");
        let mut rem = r0;
        let mut q = vec![base.zero(); rem.len() + 1 - r1.len()];
        while rem.len() >= r1.len() {
            let shift = rem.len() - r1.len();
            let c = rem.last().expect("nonempty").mul(&lead_inv);
            for (k, b) in r1.iter().enumerate() {
                if !b.is_zero() {
                    rem[shift + k] = rem[shift + k].sub(&c.mul(b));
                }
            }
            q[shift] = c;
            rem = poly_trim(rem);
        }
        let mut next = s0.clone();
        next.resize(next.len().max(q.len() + s1.len() - 1), base.zero());
        for (i, qi) in q.iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            for (j, sj) in s1.iter().enumerate() {
                if !sj.is_zero() {
                    next[i + j] = next[i + j].sub(&qi.mul(sj));
                }
            }
        }
        (r0, r1) = (r1, rem);
        (s0, s1) = (s1, poly_trim(next));
    }
    let c_inv = r1[0].inv().expect("a is coprime to the irreducible f");
    let mut out: Vec<FieldScalar> = s1.iter().map(|c| if c.is_zero() { c.clone() } else { c.mul(&c_inv) }).collect();
    out.resize(n, base.zero());
    out
}

impl Field for Tower {
    type Elem = AlgebraElement;

    fn zero(&self) -> AlgebraElement {
        Tower::zero(self)
    }
    fn one(&self) -> AlgebraElement {
        Tower::one(self)
    }
    fn is_zero(&self, a: &AlgebraElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        Tower::add(self, a, b)
    }
    fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        Tower::sub(self, a, b)
    }
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        Tower::mul(self, a, b)
    }
    fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        Tower::neg(self, a)
    }
    fn inv(&self, a: &AlgebraElement) -> Option<AlgebraElement> {
        Tower::inv(self, a).ok()
    }
    fn prefers_fraction_free(&self) -> bool {
        self.base.prefers_fraction_free()
    }
}

pub use build::{build_artin_schreier_tower, build_finite_tower, build_finite_tower_with, build_kummer_tower};
