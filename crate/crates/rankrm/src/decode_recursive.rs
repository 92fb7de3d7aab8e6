//! Recursive folding decoder for binary-shape codes over Kummer and
//! Artin–Schreier towers, with the recursive fast syndrome.
//!
//! A codeword on the subgroup of the first ℓ generators is handled as its
//! `2^ℓ × 2^ℓ` matrix over the fixed field `K' = K(α_{ℓ+1}, …, α_m)`: column
//! j holds the coordinates of `F(β_j)` on `β_0, …, β_{2^ℓ−1}`. Entries are
//! stored as elements of the full tower that happen to lie in K'.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decode_dickson::{self, DecodeError};
use crate::kfield::FieldScalar;
use crate::linalg::{self, Matrix, SolveFailure};
use crate::rmcode::{CodeError, CodeSpec};
use crate::skew::{self, SkewError, ThetaPoly};
use crate::tower::{AlgebraElement, Family, Tower, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecursiveError {
    #[error("matrix dimension {0} is not even")]
    OddDimension(usize),
    #[error("the recursive decoder needs a Kummer or Artin-Schreier tower of binary shape")]
    NotBinaryShape,
    #[error("folded errors do not all have the error's rank: {0}")]
    AssumptionViolated(String),
    #[error("row-space system at level {level} has no unique solution")]
    RankDeficientSystem { level: usize },
    #[error("decoding failed: {0}")]
    DecodingFailure(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Kummer towers fold with `±α⁻¹`, Artin–Schreier towers with `α` and `α + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryFamily {
    Kummer,
    ArtinSchreier,
}

impl BinaryFamily {
    pub fn of(tower: &Tower) -> Result<Self, RecursiveError> {
        if !tower.is_binary() {
            return Err(RecursiveError::NotBinaryShape);
        }
        match tower.family() {
            Family::Kummer { .. } => Ok(BinaryFamily::Kummer),
            Family::ArtinSchreier { .. } => Ok(BinaryFamily::ArtinSchreier),
            Family::Finite { .. } => Err(RecursiveError::NotBinaryShape),
        }
    }
}

/// The four half-size blocks of a codeword matrix, see [`block_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    pub a0: Matrix<AlgebraElement>,
    pub a1: Matrix<AlgebraElement>,
    pub b0: Matrix<AlgebraElement>,
    pub b1: Matrix<AlgebraElement>,
}

/// Rank of one folded error, identified by its path of branches from the top
/// (`1` for the `α⁻¹`-folding, `2` for the other).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldingRecord {
    pub path: String,
    pub level: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub foldings: Vec<FoldingRecord>,
    pub error_rank: Option<usize>,
    pub holds: bool,
}

impl AssumptionReport {
    fn summary(&self) -> String {
        let ranks: Vec<String> = self.foldings.iter().map(|f| format!("{}:{}", f.path, f.rank)).collect();
        format!("error rank {:?}, foldings [{}]", self.error_rank, ranks.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursiveOptions {
    /// Run the Dickson decoder when the recursive path fails.
    pub fallback: bool,
    /// Seed for the randomized row-space extraction; `None` uses the full
    /// echelon form.
    pub las_vegas: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveDecoded {
    pub codeword: ThetaPoly,
    pub error: ThetaPoly,
    pub rank: usize,
    pub report: AssumptionReport,
    pub used_fallback: bool,
}

fn mat_add(l: &Tower, a: &Matrix<AlgebraElement>, b: &Matrix<AlgebraElement>) -> Matrix<AlgebraElement> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| l.add(u, v)).collect()).collect()
}

fn mat_sub(l: &Tower, a: &Matrix<AlgebraElement>, b: &Matrix<AlgebraElement>) -> Matrix<AlgebraElement> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| l.sub(u, v)).collect()).collect()
}

fn mat_scale(l: &Tower, c: &AlgebraElement, a: &Matrix<AlgebraElement>) -> Matrix<AlgebraElement> {
    a.iter().map(|row| row.iter().map(|x| l.mul(c, x)).collect()).collect()
}

fn quadrants(y: &Matrix<AlgebraElement>) -> Result<[Matrix<AlgebraElement>; 4], RecursiveError> {
    let n = y.len();
    if n % 2 == 1 {
        return Err(RecursiveError::OddDimension(n));
    }
    let h = n / 2;
    let q = |r0: usize, c0: usize| -> Matrix<AlgebraElement> {
        y[r0..r0 + h].iter().map(|row| row[c0..c0 + h].to_vec()).collect()
    };
    Ok([q(0, 0), q(0, h), q(h, 0), q(h, h)])
}

fn join_quadrants(
    tl: Matrix<AlgebraElement>,
    tr: Matrix<AlgebraElement>,
    bl: Matrix<AlgebraElement>,
    br: Matrix<AlgebraElement>,
) -> Matrix<AlgebraElement> {
    let mut out: Matrix<AlgebraElement> = tl
        .into_iter()
        .zip(tr)
        .map(|(mut a, b)| {
            a.extend(b);
            a
        })
        .collect();
    out.extend(bl.into_iter().zip(br).map(|(mut a, b)| {
        a.extend(b);
        a
    }));
    out
}

/// α_ℓ of a binary tower and `a_ℓ`, the constant of its minimal polynomial
/// (`α² = a` for Kummer, `α² + α = a` for Artin–Schreier).
fn level_constants(l: &Tower, family: BinaryFamily, level: usize) -> (AlgebraElement, AlgebraElement) {
    let alpha = l.basis(1 << (level - 1));
    let sq = l.mul(&alpha, &alpha);
    let a = match family {
        BinaryFamily::Kummer => sq,
        BinaryFamily::ArtinSchreier => l.add(&sq, &alpha),
    };
    (alpha, a)
}

/// Extracts `A_0, A_1, B_0, B_1` from the level-ℓ matrix of a codeword by
/// inverting [`reassemble`].
pub fn block_split(
    l: &Tower,
    family: BinaryFamily,
    level: usize,
    y: &Matrix<AlgebraElement>,
) -> Result<BlockSplit, RecursiveError> {
    let [y00, y01, y10, y11] = quadrants(y)?;
    let (_, a) = level_constants(l, family, level);
    Ok(match family {
        BinaryFamily::Kummer => {
            let half = l.inv(&l.from_i64(2))?;
            let y01 = mat_scale(l, &l.inv(&a)?, &y01);
            BlockSplit {
                a0: mat_scale(l, &half, &mat_add(l, &y00, &y11)),
                b0: mat_scale(l, &half, &mat_sub(l, &y00, &y11)),
                a1: mat_scale(l, &half, &mat_add(l, &y10, &y01)),
                b1: mat_scale(l, &half, &mat_sub(l, &y10, &y01)),
            }
        }
        BinaryFamily::ArtinSchreier => {
            let a1 = mat_add(l, &y11, &y00);
            let b1 = mat_add(l, &y10, &a1);
            let b0 = mat_add(l, &y01, &mat_scale(l, &a, &y10));
            let a0 = mat_add(l, &y00, &b0);
            BlockSplit { a0, a1, b0, b1 }
        }
    })
}

/// Kummer: `[[A0+B0, a(A1−B1)], [A1+B1, A0−B0]]`;
/// Artin–Schreier: `[[A0+B0, a(A1+B1)+B0], [A1+B1, A0+A1+B0]]`.
pub fn reassemble(l: &Tower, family: BinaryFamily, level: usize, s: &BlockSplit) -> Matrix<AlgebraElement> {
    let (_, a) = level_constants(l, family, level);
    let BlockSplit { a0, a1, b0, b1 } = s;
    match family {
        BinaryFamily::Kummer => join_quadrants(
            mat_add(l, a0, b0),
            mat_scale(l, &a, &mat_sub(l, a1, b1)),
            mat_add(l, a1, b1),
            mat_sub(l, a0, b0),
        ),
        BinaryFamily::ArtinSchreier => join_quadrants(
            mat_add(l, a0, b0),
            mat_add(l, &mat_scale(l, &a, &mat_add(l, a1, b1)), b0),
            mat_add(l, a1, b1),
            mat_add(l, &mat_add(l, a0, a1), b0),
        ),
    }
}

/// The two foldings `[p·I, q·I]·Y·[I; u·I]` that cancel `A_0, A_1`.
/// Kummer: `(p, q, u) = (α⁻¹, 1, −α⁻¹)` and `(−α⁻¹, 1, α⁻¹)`, leaving
/// `±(2/α)B_0 + 2B_1`. Artin–Schreier: `(1, γ, γ⁻¹)` for `γ = α` and
/// `γ = α + 1`, leaving `γ⁻¹B_0 + B_1`.
pub fn fold(
    l: &Tower,
    family: BinaryFamily,
    level: usize,
    y: &Matrix<AlgebraElement>,
) -> Result<(Matrix<AlgebraElement>, Matrix<AlgebraElement>), RecursiveError> {
    let [y00, y01, y10, y11] = quadrants(y)?;
    let (alpha, _) = level_constants(l, family, level);
    let one = l.one();
    let combos = match family {
        BinaryFamily::Kummer => {
            let inv = l.inv(&alpha)?;
            let neg = l.neg(&inv);
            [(inv.clone(), one.clone(), neg.clone()), (neg, one, inv)]
        }
        BinaryFamily::ArtinSchreier => {
            let beta = l.add(&alpha, &one);
            [(one.clone(), alpha.clone(), l.inv(&alpha)?), (one, beta.clone(), l.inv(&beta)?)]
        }
    };
    let apply = |(p, q, u): &(AlgebraElement, AlgebraElement, AlgebraElement)| {
        let left = mat_add(l, &mat_scale(l, p, &y00), &mat_scale(l, q, &y10));
        let right = mat_add(l, &mat_scale(l, p, &y01), &mat_scale(l, q, &y11));
        mat_add(l, &left, &mat_scale(l, u, &right))
    };
    Ok((apply(&combos[0]), apply(&combos[1])))
}

/// `B_0, B_1` from the decoded foldings.
fn unfold_b(
    l: &Tower,
    family: BinaryFamily,
    level: usize,
    c1: &Matrix<AlgebraElement>,
    c2: &Matrix<AlgebraElement>,
) -> Result<(Matrix<AlgebraElement>, Matrix<AlgebraElement>), RecursiveError> {
    let (alpha, a) = level_constants(l, family, level);
    Ok(match family {
        BinaryFamily::Kummer => {
            let quarter = l.inv(&l.from_i64(4))?;
            let b1 = mat_scale(l, &quarter, &mat_add(l, c1, c2));
            let b0 = mat_scale(l, &l.mul(&quarter, &alpha), &mat_sub(l, c1, c2));
            (b0, b1)
        }
        BinaryFamily::ArtinSchreier => {
            let b0 = mat_scale(l, &a, &mat_add(l, c1, c2));
            let b1 = mat_add(l, c1, &mat_scale(l, &l.inv(&alpha)?, &b0));
            (b0, b1)
        }
    })
}

/// Level-ℓ matrix of the vector `(F(β_0), …, F(β_{2^ℓ−1}))`.
pub fn vector_to_matrix(l: &Tower, level: usize, y: &[AlgebraElement]) -> Matrix<AlgebraElement> {
    let n = 1usize << level;
    let zero = l.base().zero();
    let mut out = vec![vec![vec![zero; l.degree()]; n]; n];
    for (j, v) in y.iter().enumerate() {
        for (q, c) in v.coords().iter().enumerate() {
            out[q & (n - 1)][j][q & !(n - 1)] = c.clone();
        }
    }
    out.into_iter()
        .map(|row| row.into_iter().map(|coords| l.element(coords).expect("tower coordinates")).collect())
        .collect()
}

/// Inverse of [`vector_to_matrix`]: `y_j = Σ_i M[i][j]·β_i`.
pub fn matrix_to_vector(l: &Tower, level: usize, m: &Matrix<AlgebraElement>) -> Vec<AlgebraElement> {
    let n = 1usize << level;
    (0..m.len())
        .map(|j| {
            let coords: Vec<FieldScalar> =
                (0..l.degree()).map(|q| m[q & (n - 1)][j].coords()[q & !(n - 1)].clone()).collect();
            l.element(coords).expect("tower coordinates")
        })
        .collect()
}

/// Splits `z ∈ K'(α_ℓ)` as `u + α_ℓ·v` with `u, v ∈ K'`.
fn split_alpha(l: &Tower, level: usize, z: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let bit = 1usize << (level - 1);
    let zero = l.base().zero();
    let mut u = vec![zero.clone(); l.degree()];
    let mut v = vec![zero; l.degree()];
    for (q, c) in z.coords().iter().enumerate() {
        if q & bit == 0 {
            u[q] = c.clone();
        } else {
            v[q & !bit] = c.clone();
        }
    }
    (l.element(u).expect("tower coordinates"), l.element(v).expect("tower coordinates"))
}

/// `H·y` for the parity-check matrix `G*(s, m)` of
/// [`crate::rmcode::binary_dual_generator`], computed by splitting y in
/// halves and sharing the half-size products between both row blocks.
pub fn fast_syndrome(
    l: &Tower,
    s: isize,
    m: usize,
    y: &[AlgebraElement],
) -> Result<Vec<AlgebraElement>, RecursiveError> {
    let family = BinaryFamily::of(l)?;
    if m > l.shape().m() || y.len() != 1 << m {
        return Err(CodeError::LengthMismatch { expected: 1 << m.min(l.shape().m()), got: y.len() }.into());
    }
    if s < 0 {
        return Ok(Vec::new());
    }
    let dense = syndrome_by_mask(l, family, s as usize, m, y)?;
    Ok(dual_row_masks(s, m).into_iter().map(|mask| dense[mask].clone()).collect())
}

/// Rows of `G*(s, m)` labelled by the monomial they come from, in the
/// matrix's row order.
fn dual_row_masks(s: isize, m: usize) -> Vec<usize> {
    if s < 0 {
        return Vec::new();
    }
    if m == 0 {
        return vec![0];
    }
    let mut out = dual_row_masks(s.min(m as isize - 1), m - 1);
    out.extend(dual_row_masks(s - 1, m - 1).into_iter().map(|x| x | 1 << (m - 1)));
    out
}

/// Syndromes indexed by row monomial; entries of weight above s are unused.
fn syndrome_by_mask(
    l: &Tower,
    family: BinaryFamily,
    s: usize,
    m: usize,
    y: &[AlgebraElement],
) -> Result<Vec<AlgebraElement>, RecursiveError> {
    if m == 0 {
        return Ok(vec![y[0].clone()]);
    }
    let h = y.len() / 2;
    let u0 = syndrome_by_mask(l, family, s, m - 1, &y[..h])?;
    let u1 = syndrome_by_mask(l, family, s, m - 1, &y[h..])?;
    let (alpha, _) = level_constants(l, family, m);
    let mut out = vec![l.zero(); 2 * h];
    match family {
        BinaryFamily::Kummer => {
            let inv = l.inv(&alpha)?;
            for x in 0..h {
                let w = x.count_ones() as usize;
                if w > s {
                    continue;
                }
                let t = l.mul(&inv, &u1[x]);
                out[x] = l.sub(&u0[x], &t);
                if w < s {
                    out[x | h] = l.add(&u0[x], &t);
                }
            }
        }
        BinaryFamily::ArtinSchreier => {
            for x in 0..h {
                let w = x.count_ones() as usize;
                if w > s {
                    continue;
                }
                let t = l.mul(&alpha, &u0[x]);
                out[x] = l.add(&t, &u1[x]);
                if w < s {
                    out[x | h] = l.add(&l.add(&t, &u0[x]), &u1[x]);
                }
            }
        }
    }
    Ok(out)
}

/// Recovery of `A_0, A_1` once `B_0, B_1` are removed. `y0` is the top
/// half of `Ỹ·[I; u·I]`, equal to `A_0 − α A_1` plus error for Kummer towers
/// (`u = −α⁻¹`) and to `A_0 + α A_1` plus error for Artin–Schreier towers
/// (`u = (α+1)⁻¹`). `e_fold` is the decoded folding error sharing that right
/// factor; the error is `x·R` with rows of R spanning its row space, and x
/// solves `(H Rᵀ) xᵀ = H y0ᵀ`.
pub fn recover_a(
    l: &Tower,
    family: BinaryFamily,
    level: usize,
    r: usize,
    y0: &Matrix<AlgebraElement>,
    e_fold: &Matrix<AlgebraElement>,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<(Matrix<AlgebraElement>, Matrix<AlgebraElement>), RecursiveError> {
    let sub = level - 1;
    let y_vec = matrix_to_vector(l, sub, y0);
    let s = sub as isize - r as isize - 1;
    let syndrome = fast_syndrome(l, s, sub, &y_vec)?;
    let attempt = |rows: &Matrix<AlgebraElement>| -> Option<Vec<AlgebraElement>> {
        let basis = linalg::row_basis(l, rows);
        if basis.is_empty() {
            return syndrome.iter().all(|x| x.is_zero()).then(|| y_vec.clone());
        }
        let cols: Vec<Vec<AlgebraElement>> =
            basis.iter().map(|row| fast_syndrome(l, s, sub, row).expect("same length")).collect();
        let system: Matrix<AlgebraElement> =
            (0..syndrome.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let x = if system.is_empty() {
            vec![l.zero(); basis.len()]
        } else {
            match linalg::solve(l, &system, &syndrome) {
                Ok(x) => x,
                Err(SolveFailure::Inconsistent | SolveFailure::NotUnique) => return None,
            }
        };
        let f0: Vec<AlgebraElement> = (0..y_vec.len())
            .map(|j| basis.iter().zip(&x).fold(l.zero(), |acc, (row, xk)| l.add(&acc, &l.mul(xk, &row[j]))))
            .collect();
        Some(y_vec.iter().zip(&f0).map(|(a, b)| l.sub(a, b)).collect())
    };
    let codeword = match rng {
        None => attempt(e_fold),
        Some(rng) => {
            let total = e_fold.len();
            let radius = (1usize << (level - r - 1)).saturating_sub(1);
            let mut take = (radius + 2).min(total);
            loop {
                let picked: Matrix<AlgebraElement> =
                    sample(rng, total, take).into_iter().map(|i| e_fold[i].clone()).collect();
                if let Some(c) = attempt(&picked) {
                    break Some(c);
                }
                if take == total {
                    break None;
                }
                take = (2 * take).min(total);
            }
        }
    };
    let codeword = codeword.ok_or(RecursiveError::RankDeficientSystem { level })?;
    let mixed = vector_to_matrix(l, sub, &codeword);
    let mut a0 = Vec::with_capacity(mixed.len());
    let mut a1 = Vec::with_capacity(mixed.len());
    for row in &mixed {
        let (u, v): (Vec<_>, Vec<_>) = row.iter().map(|z| split_alpha(l, level, z)).unzip();
        a0.push(u);
        a1.push(match family {
            BinaryFamily::Kummer => v.iter().map(|x| l.neg(x)).collect(),
            BinaryFamily::ArtinSchreier => v,
        });
    }
    Ok((a0, a1))
}

struct Context {
    tower: Arc<Tower>,
    family: BinaryFamily,
    las_vegas: Option<u64>,
}

/// Decodes the level-ℓ matrix `y` in the order-r code; returns the codeword
/// matrix and the folding records collected below this node.
fn decode_level(
    ctx: &Context,
    level: usize,
    r: usize,
    y: &Matrix<AlgebraElement>,
    path: &str,
) -> Result<(Matrix<AlgebraElement>, Vec<FoldingRecord>), RecursiveError> {
    let l = &*ctx.tower;
    if r == 0 {
        let spec = CodeSpec::on_subgroup(ctx.tower.clone(), level, 0)?;
        let decoded = decode_dickson::decode_evaluations(&spec, &matrix_to_vector(l, level, y))?;
        let c = vector_to_matrix(l, level, &skew::evaluations(l, &decoded.codeword));
        return Ok((c, Vec::new()));
    }
    let (f1, f2) = fold(l, ctx.family, level, y)?;
    let p1 = format!("{path}1");
    let p2 = format!("{path}2");
    let (first, second) =
        join(|| decode_level(ctx, level - 1, r - 1, &f1, &p1), || decode_level(ctx, level - 1, r - 1, &f2, &p2));
    let (c1, mut records) = first?;
    let (c2, more) = second?;
    records.extend(more);
    let e1 = mat_sub(l, &f1, &c1);
    let e2 = mat_sub(l, &f2, &c2);
    records.push(FoldingRecord { path: p1, level: level - 1, rank: linalg::rank(l, &e1) });
    records.push(FoldingRecord { path: p2, level: level - 1, rank: linalg::rank(l, &e2) });

    let (b0, b1) = unfold_b(l, ctx.family, level, &c1, &c2)?;
    let zeros = vec![vec![l.zero(); b0.len()]; b0.len()];
    let b_part =
        reassemble(l, ctx.family, level, &BlockSplit { a0: zeros.clone(), a1: zeros, b0: b0.clone(), b1: b1.clone() });
    let y_tilde = mat_sub(l, y, &b_part);
    let [t00, t01, _, _] = quadrants(&y_tilde)?;
    let (alpha, _) = level_constants(l, ctx.family, level);
    let (u, e_fold) = match ctx.family {
        BinaryFamily::Kummer => (l.neg(&l.inv(&alpha)?), &e1),
        BinaryFamily::ArtinSchreier => (l.inv(&l.add(&alpha, &l.one()))?, &e2),
    };
    let y0 = mat_add(l, &t00, &mat_scale(l, &u, &t01));
    let mut rng = ctx.las_vegas.map(|seed| ChaCha8Rng::seed_from_u64(seed ^ path_hash(path)));
    let (a0, a1) = recover_a(l, ctx.family, level, r, &y0, e_fold, rng.as_mut())?;
    Ok((reassemble(l, ctx.family, level, &BlockSplit { a0, a1, b0, b1 }), records))
}

fn path_hash(path: &str) -> u64 {
    path.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Runs both halves, possibly on other threads, and charges their operation
/// counts to the calling thread.
#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    let ((a, na), (b, nb)) = rayon::join(|| crate::ops::isolated(a), || crate::ops::isolated(b));
    crate::ops::charge(na + nb);
    (a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}

/// Decodes a received word of a binary-shape code by folding recursion.
/// Every folded error rank is recorded; the result is accepted only when
/// they all equal the rank of the recovered error. On failure the Dickson
/// decoder is run instead if `options.fallback` is set.
pub fn decode_recursive(
    spec: &CodeSpec,
    y: &ThetaPoly,
    options: &RecursiveOptions,
) -> Result<RecursiveDecoded, RecursiveError> {
    let l = spec.tower();
    let family = BinaryFamily::of(l)?;
    if y.len() != spec.length() {
        return Err(CodeError::LengthMismatch { expected: spec.length(), got: y.len() }.into());
    }
    match recursive_path(spec, family, y, options) {
        Ok(decoded) => Ok(decoded),
        Err((err, report)) if options.fallback => {
            let decoded = decode_dickson::decode(spec, y).map_err(|_| err)?;
            Ok(RecursiveDecoded {
                codeword: decoded.codeword,
                error: decoded.error,
                rank: decoded.rank,
                report,
                used_fallback: true,
            })
        }
        Err((err, _)) => Err(err),
    }
}

fn recursive_path(
    spec: &CodeSpec,
    family: BinaryFamily,
    y: &ThetaPoly,
    options: &RecursiveOptions,
) -> Result<RecursiveDecoded, (RecursiveError, AssumptionReport)> {
    let l = spec.tower();
    let level = spec.level();
    let r = spec.r();
    let radius = spec.radius();
    let no_report = |e: RecursiveError| (e, AssumptionReport::default());
    let y_vec = skew::evaluations(l, y);
    let ctx = Context { tower: spec.tower_arc().clone(), family, las_vegas: options.las_vegas };
    let (c_mat, foldings) = if r >= level {
        (vector_to_matrix(l, level, &y_vec), Vec::new())
    } else {
        decode_level(&ctx, level, r, &vector_to_matrix(l, level, &y_vec), "").map_err(no_report)?
    };
    let codeword = skew::interpolate(l, &matrix_to_vector(l, level, &c_mat)).map_err(|e| no_report(e.into()))?;
    let error = y.sub(l, &codeword).map_err(|e| no_report(e.into()))?;
    let rank = skew::rank(l, &error).map_err(|e| no_report(e.into()))?;
    let holds = foldings.iter().all(|f| f.rank == rank);
    let report = AssumptionReport { foldings, error_rank: Some(rank), holds };
    if rank > radius {
        return Err((RecursiveError::DecodingFailure(format!("recovered error has rank {rank} > {radius}")), report));
    }
    if !holds {
        return Err((RecursiveError::AssumptionViolated(report.summary()), report));
    }
    Ok(RecursiveDecoded { codeword, error, rank, report, used_fallback: false })
}

#[cfg(test)]
mod tests;
