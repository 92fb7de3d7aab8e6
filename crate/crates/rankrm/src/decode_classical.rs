//! Minor-cancellation decoding for the two classical cases: Gabidulin codes
//! (a cyclic group) and cyclic Reed–Solomon codes through circulant matrices.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decode_dickson::{self, DecodeError, Decoded, MinorWindow, Schedule};
use crate::kfield::FieldScalar;
use crate::linalg::{self, Matrix};
use crate::rmcode::CodeSpec;
use crate::skew::ThetaPoly;
use crate::tower::{build_finite_tower, AlgebraElement, Family, Tower, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("Gabidulin decoding needs a cyclic tower, got shape {0:?}")]
    NotCyclic(Vec<usize>),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("decoding failed: {0}")]
    DecodingFailure(String),
    #[error("no nonsingular cofactor after {attempts} row subsets")]
    CofactorSearchExhausted { attempts: usize },
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// The Gabidulin code of dimension k over a cyclic tower: θ-polynomials of
/// degree below k.
pub fn gabidulin_spec(tower: &Arc<Tower>, k: usize) -> Result<CodeSpec, ClassicalError> {
    if tower.shape().m() != 1 {
        return Err(ClassicalError::NotCyclic(tower.shape().dims().to_vec()));
    }
    if k == 0 || k > tower.degree() {
        return Err(ClassicalError::InvalidParameters(format!("k = {k} outside 1..={}", tower.degree())));
    }
    Ok(CodeSpec::new(tower.clone(), k - 1).map_err(DecodeError::from)?)
}

/// Windows used for an error of rank t, in recovery order `e_{k−1}, …, e_0`:
/// the furthest coefficient's window shifted up by one row each time.
pub fn gabidulin_schedule(spec: &CodeSpec, t: usize) -> Result<Vec<MinorWindow>, ClassicalError> {
    Ok(spec
        .monomials()
        .iter()
        .rev()
        .map(|&omega| decode_dickson::shifted_window(spec, omega, t))
        .collect::<Result<_, _>>()?)
}

pub fn gabidulin_decode(tower: &Arc<Tower>, k: usize, y: &ThetaPoly) -> Result<Decoded, ClassicalError> {
    let spec = gabidulin_spec(tower, k)?;
    decode_dickson::decode_with(&spec, y, Schedule::Shifted).map_err(|e| match e {
        DecodeError::DecodingFailure(msg) => ClassicalError::DecodingFailure(msg),
        other => other.into(),
    })
}

/// `n×n` circulant matrix of `Σ c_i X^i`: entry `(i, j)` is `c_{(i−j) mod n}`,
/// so column j is the coefficient vector shifted down j steps.
pub fn circulant(coeffs: &[AlgebraElement], n: usize) -> Matrix<AlgebraElement> {
    (0..n).map(|i| (0..n).map(|j| coeffs[(i + n - j) % n].clone()).collect()).collect()
}

/// F_q with the generator α of F_q^× used for evaluation.
#[derive(Debug)]
pub struct CyclicRs {
    field: Tower,
    q: usize,
    alpha: AlgebraElement,
    /// α^i for i in 0..n
    powers: Vec<AlgebraElement>,
}

/// Reproducibility record of an RS instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsMetadata {
    pub q: usize,
    pub p: u64,
    pub irreducible: Vec<u64>,
    pub alpha: String,
}

fn prime_power(q: usize) -> Option<(u64, usize)> {
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u64, e))
}

impl CyclicRs {
    pub fn new(q: usize) -> Result<Self, ClassicalError> {
        let (p, e) =
            prime_power(q).ok_or_else(|| ClassicalError::InvalidParameters(format!("{q} is not a prime power")))?;
        if e < 2 {
            return Err(ClassicalError::InvalidParameters(format!("q = {q} is prime; towers need degree at least 2")));
        }
        let field = build_finite_tower(p, &[e])?;
        let n = q - 1;
        let prime_factors: Vec<usize> =
            (2..=n).filter(|&d| n.is_multiple_of(d) && (2..d).all(|f| !d.is_multiple_of(f))).collect();
        let alpha = (1..q)
            .map(|idx| element_from_index(&field, p, idx))
            .find(|a| {
                pow(&field, a, n) == field.one() && prime_factors.iter().all(|f| pow(&field, a, n / f) != field.one())
            })
            .expect("F_q^× is cyclic");
        let mut powers = vec![field.one()];
        for _ in 1..n {
            let next = field.mul(powers.last().expect("nonempty"), &alpha);
            powers.push(next);
        }
        Ok(CyclicRs { field, q, alpha, powers })
    }

    pub fn field(&self) -> &Tower {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.q - 1
    }

    pub fn alpha(&self) -> &AlgebraElement {
        &self.alpha
    }

    pub fn metadata(&self) -> RsMetadata {
        let (p, irreducible) = match self.field.family() {
            Family::Finite { p, irreducible, .. } => (*p, irreducible.clone()),
            _ => unreachable!("RS fields are finite"),
        };
        RsMetadata { q: self.q, p, irreducible, alpha: self.alpha.to_text() }
    }

    /// `(P(1), P(α), …, P(α^{n−1}))`.
    pub fn evaluate(&self, coeffs: &[AlgebraElement]) -> Vec<AlgebraElement> {
        let n = self.n();
        (0..n)
            .map(|i| {
                coeffs.iter().enumerate().fold(self.field.zero(), |acc, (j, c)| {
                    self.field.add(&acc, &self.field.mul(c, &self.powers[(i * j) % n]))
                })
            })
            .collect()
    }

    /// Inverse of [`CyclicRs::evaluate`] on polynomials of degree below n:
    /// `P_j = n⁻¹ Σ_i y_i α^{−ij}`.
    pub fn interpolate(&self, values: &[AlgebraElement]) -> Vec<AlgebraElement> {
        let n = self.n();
        let n_inv = self.field.base().from_i64(n as i64).inv().expect("n = q − 1 is a unit");
        (0..n)
            .map(|j| {
                let s = values.iter().enumerate().fold(self.field.zero(), |acc, (i, v)| {
                    self.field.add(&acc, &self.field.mul(v, &self.powers[(n - (i * j) % n) % n]))
                });
                self.field.scale(&n_inv, &s)
            })
            .collect()
    }

    pub fn encode(&self, k: usize, message: &[AlgebraElement]) -> Result<Vec<AlgebraElement>, ClassicalError> {
        if message.len() != k || k > self.n() {
            return Err(ClassicalError::InvalidParameters(format!("message of length {} for k = {k}", message.len())));
        }
        Ok(self.evaluate(message))
    }
}

fn element_from_index(field: &Tower, p: u64, mut idx: usize) -> AlgebraElement {
    let coords = (0..field.degree())
        .map(|_| {
            let v = (idx as u64) % p;
            idx /= p as usize;
            FieldScalar::Prime { v, p }
        })
        .collect();
    field.element(coords).expect("coordinates in F_p")
}

fn pow(field: &Tower, a: &AlgebraElement, mut e: usize) -> AlgebraElement {
    let mut base = a.clone();
    let mut acc = field.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = field.mul(&acc, &base);
        }
        base = field.mul(&base, &base);
        e >>= 1;
    }
    acc
}

pub fn hamming_weight(v: &[AlgebraElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Result of Reed–Solomon decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsDecoded {
    pub codeword: Vec<AlgebraElement>,
    pub error: Vec<AlgebraElement>,
    pub weight: usize,
}

/// Chooses t rows below `i0` that make the cofactor on `cols` nonsingular,
/// scanning downward and keeping each row that raises the rank.
fn pick_rows(
    field: &Tower,
    coeffs: &[Option<AlgebraElement>],
    n: usize,
    i0: usize,
    cols: &[usize],
    t: usize,
) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Matrix<AlgebraElement> = Vec::new();
    for i in i0 + 1..n {
        if chosen.len() == t {
            break;
        }
        let row: Vec<AlgebraElement> =
            cols.iter().map(|&j| coeffs[(i + n - j) % n].clone().expect("known below the diagonal")).collect();
        rows.push(row);
        if linalg::rank(field, &rows) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    (chosen.len() == t).then_some(chosen)
}

fn rs_recover(
    rs: &CyclicRs,
    k: usize,
    y_poly: &[AlgebraElement],
    t: usize,
) -> Result<Vec<AlgebraElement>, ClassicalError> {
    let field = &rs.field;
    let n = rs.n();
    let d = n - k + 1;
    let mut coeffs: Vec<Option<AlgebraElement>> = (0..n).map(|i| (i >= k).then(|| y_poly[i].clone())).collect();
    let budget = n.div_ceil(2);
    for omega in (0..k).rev() {
        let mut attempts = 0;
        let mut found = None;
        // the Gabidulin-like position first, then other diagonal positions
        let mut positions: Vec<usize> = vec![d / 2];
        positions.extend((t..n).filter(|&p| p != d / 2));
        for p1 in positions {
            if attempts == budget {
                break;
            }
            let i0 = omega + p1;
            if p1 < t || i0 + t >= n {
                continue;
            }
            attempts += 1;
            let cols: Vec<usize> = (p1 - t..p1).collect();
            let Some(rows) = pick_rows(field, &coeffs, n, i0, &cols, t) else { continue };
            let mut all_rows = vec![i0];
            all_rows.extend(rows);
            let mut all_cols = cols.clone();
            all_cols.push(p1);
            let w: Matrix<AlgebraElement> = all_rows
                .iter()
                .map(|&i| {
                    all_cols
                        .iter()
                        .map(|&j| {
                            if (i, j) == (i0, p1) {
                                field.zero()
                            } else {
                                coeffs[(i + n - j) % n].clone().expect("known")
                            }
                        })
                        .collect()
                })
                .collect();
            if let Ok(x) = decode_dickson::solve_window(field, &w, (0, t)) {
                found = Some(x);
                break;
            }
        }
        match found {
            Some(x) => coeffs[omega] = Some(x),
            None => return Err(ClassicalError::CofactorSearchExhausted { attempts }),
        }
    }
    Ok(coeffs.into_iter().map(|c| c.expect("all recovered")).collect())
}

/// Decodes `y = c + e` in the cyclic code of polynomials of degree below k,
/// evaluated at the powers of α, for `w_H(e) ≤ ⌊(n−k)/2⌋`.
pub fn rs_decode(rs: &CyclicRs, k: usize, y: &[AlgebraElement]) -> Result<RsDecoded, ClassicalError> {
    let n = rs.n();
    if y.len() != n || k == 0 || k > n {
        return Err(ClassicalError::InvalidParameters(format!("received length {} for n = {n}, k = {k}", y.len())));
    }
    let field = &rs.field;
    let max = (n - k) / 2;
    let y_poly = rs.interpolate(y);
    // rank of the circulant of e from a fully known block
    let d = n - k + 1;
    let estimate = if max == 0 {
        0
    } else {
        let block: Matrix<AlgebraElement> = (n - d.div_ceil(2) + 1..n)
            .map(|i| (d / 2 - max..d / 2).map(|j| y_poly[(i + n - j) % n].clone()).collect())
            .collect();
        linalg::rank(field, &block)
    };
    let mut ranks: Vec<usize> = (0..=max).collect();
    ranks.sort_by_key(|&t| (t.abs_diff(estimate), t));
    let mut last = String::from("no weight hypothesis succeeded");
    for t in ranks {
        match rs_recover(rs, k, &y_poly, t) {
            Ok(e_poly) => {
                let error = rs.evaluate(&e_poly);
                let weight = hamming_weight(&error);
                if weight <= max {
                    let codeword = y.iter().zip(&error).map(|(a, b)| field.sub(a, b)).collect();
                    return Ok(RsDecoded { codeword, error, weight });
                }
                last = format!("recovered error has weight {weight} > {max}");
            }
            Err(e @ ClassicalError::CofactorSearchExhausted { .. }) => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(ClassicalError::DecodingFailure(last))
}

#[cfg(test)]
mod tests;
