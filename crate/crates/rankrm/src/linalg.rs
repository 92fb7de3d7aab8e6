//! Exact dense linear algebra over any field implementing [`Field`].
//!
//! The same routines run over the base field K and over the extension L
//! (and hence over every intermediate field, whose elements are stored as
//! elements of L).

use std::fmt::Debug;

use crate::kfield::{BaseField, FieldScalar};

pub type Matrix<E> = Vec<Vec<E>>;

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Whether determinants should use fraction-free elimination.
    fn prefers_fraction_free(&self) -> bool {
        false
    }
}

impl Field for BaseField {
    type Elem = FieldScalar;

    fn zero(&self) -> FieldScalar {
        BaseField::zero(self)
    }
    fn one(&self) -> FieldScalar {
        BaseField::one(self)
    }
    fn is_zero(&self, a: &FieldScalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        a.add(b)
    }
    fn sub(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        a.sub(b)
    }
    fn mul(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        a.mul(b)
    }
    fn neg(&self, a: &FieldScalar) -> FieldScalar {
        a.neg()
    }
    fn inv(&self, a: &FieldScalar) -> Option<FieldScalar> {
        a.inv().ok()
    }
    fn prefers_fraction_free(&self) -> bool {
        !matches!(self, BaseField::Prime { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFailure {
    Inconsistent,
    NotUnique,
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn transpose<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            let mut out = vec![f.zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if f.is_zero(x) {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !f.is_zero(y) {
                        *o = f.add(o, &f.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|row| dot(f, row, v)).collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

pub fn is_zero_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.iter().all(|row| row.iter().all(|x| f.is_zero(x)))
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(&a[r][c]).expect("nonzero pivot");
        for x in a[r].iter_mut().skip(c) {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            let pivot = a[r].clone();
            for (x, p) in a[i][c..].iter_mut().zip(&pivot[c..]) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank by forward elimination.
pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(&a[r][c]).expect("nonzero pivot");
        let (top, bottom) = a.split_at_mut(r + 1);
        eliminate_below(f, &top[r], bottom, c, &inv);
        r += 1;
    }
    r
}

/// Clears column `c` of `rows` with the pivot row, whose entry at `c` has
/// inverse `inv`.
fn eliminate_below<F: Field>(f: &F, pivot: &[F::Elem], rows: &mut [Vec<F::Elem>], c: usize, inv: &F::Elem) {
    for row in rows {
        if f.is_zero(&row[c]) {
            continue;
        }
        let factor = f.mul(&row[c], inv);
        for (x, p) in row[c + 1..].iter_mut().zip(&pivot[c + 1..]) {
            if !f.is_zero(p) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
        row[c] = f.zero();
    }
}

/// Determinant by Gaussian elimination with one inversion per pivot.
pub fn det_gauss<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
            return f.zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &a[c][c]);
        if c + 1 == n {
            break;
        }
        let inv = f.inv(&a[c][c]).expect("nonzero pivot");
        let (top, bottom) = a.split_at_mut(c + 1);
        eliminate_below(f, &top[c], bottom, c, &inv);
    }
    det
}

/// Determinant by Bareiss fraction-free elimination: every division is exact
/// in the ring generated by the entries, which keeps intermediate values
/// small over Q and F_2(t).
pub fn det_bareiss<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    if n == 0 {
        return f.one();
    }
    let mut a = m.clone();
    let mut sign_neg = false;
    let mut prev = f.one();
    for k in 0..n - 1 {
        if f.is_zero(&a[k][k]) {
            let Some(pr) = (k + 1..n).find(|&i| !f.is_zero(&a[i][k])) else {
                return f.zero();
            };
            a.swap(pr, k);
            sign_neg = !sign_neg;
        }
        let prev_inv = f.inv(&prev).expect("nonzero previous pivot");
        for i in k + 1..n {
            for j in k + 1..n {
                let t = f.sub(&f.mul(&a[i][j], &a[k][k]), &f.mul(&a[i][k], &a[k][j]));
                a[i][j] = f.mul(&t, &prev_inv);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_neg {
        f.neg(&d)
    } else {
        d
    }
}

/// Determinant with the elimination strategy the field prefers.
pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    if f.prefers_fraction_free() {
        det_bareiss(f, m)
    } else {
        det_gauss(f, m)
    }
}

/// Solves `a·x = b` and returns the unique solution.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>, SolveFailure> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: Matrix<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(f, &aug);
    if pivots.last() == Some(&cols) {
        return Err(SolveFailure::Inconsistent);
    }
    if pivots.len() < cols {
        return Err(SolveFailure::NotUnique);
    }
    Ok(red.iter().map(|row| row[cols].clone()).collect())
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let aug: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis (as rows) of the right kernel `{x : m·x = 0}`.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Matrix<F::Elem> {
    let (red, pivots) = rref(f, m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(&row[fc]);
            }
            v
        })
        .collect()
}

/// Echelon basis of the row space.
pub fn row_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    rref(f, m).0
}
