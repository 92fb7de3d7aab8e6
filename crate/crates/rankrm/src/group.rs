//! Index bookkeeping for the group Z/n_1 × ⋯ × Z/n_m.
//!
//! Group elements are exponent vectors `(i_1, …, i_m)`; the mixed-radix map
//! `φ(i) = i_1 + i_2·n_1 + i_3·n_1·n_2 + ⋯` numbers them so that integer order
//! agrees with reverse-lexicographic order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("index {index} out of range for a group of order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("invalid shape {0:?}: every n_i must be at least 2")]
    InvalidShape(Vec<usize>),
}

/// The shape `n = (n_1, …, n_m)` of the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(n: Vec<usize>) -> Result<Self, GroupError> {
        if n.is_empty() || n.iter().any(|&x| x < 2) {
            return Err(GroupError::InvalidShape(n));
        }
        Ok(Shape(n))
    }

    /// The binary shape `(2, …, 2)` with `m` factors.
    pub fn binary(m: usize) -> Self {
        Shape(vec![2; m])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&x| x == 2)
    }

    /// Sum of `n_i − 1`, the largest total degree.
    pub fn max_degree(&self) -> usize {
        self.0.iter().map(|x| x - 1).sum()
    }

    /// The shape made of the first `k` factors.
    pub fn prefix(&self, k: usize) -> Shape {
        Shape(self.0[..k].to_vec())
    }

    pub fn phi(&self, exps: &[usize]) -> usize {
        let mut x = 0;
        let mut radix = 1;
        for (e, n) in exps.iter().zip(&self.0) {
            x += e * radix;
            radix *= n;
        }
        x
    }

    pub fn phi_inv(&self, mut x: usize) -> Vec<usize> {
        self.0
            .iter()
            .map(|n| {
                let e = x % n;
                x /= n;
                e
            })
            .collect()
    }

    /// Total degree `|φ⁻¹(x)|`.
    pub fn degree_of(&self, x: usize) -> usize {
        self.phi_inv(x).iter().sum()
    }

    /// `φ(φ⁻¹(a) + φ⁻¹(b))` with componentwise wrap-around.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut radix = 1;
        for n in &self.0 {
            out += ((a % n + b % n) % n) * radix;
            a /= n;
            b /= n;
            radix *= n;
        }
        out
    }

    /// Whether adding `a` and `b` produces no wrap-around in any coordinate.
    pub fn carry_free(&self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (a, b);
        for n in &self.0 {
            if a % n + b % n >= *n {
                return false;
            }
            a /= n;
            b /= n;
        }
        true
    }

    /// `φ(φ⁻¹(a) − φ⁻¹(b))` with componentwise wrap-around.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut radix = 1;
        for n in &self.0 {
            out += ((a % n + n - b % n) % n) * radix;
            a /= n;
            b /= n;
            radix *= n;
        }
        out
    }

    /// The `k` with `γ_j·γ_k = γ_i`.
    pub fn sigma_inverse(&self, j: usize, i: usize) -> usize {
        self.sub(i, j)
    }

    /// Componentwise `φ⁻¹(a) ≤ φ⁻¹(b)`.
    pub fn dominated(&self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (a, b);
        for n in &self.0 {
            if a % n > b % n {
                return false;
            }
            a /= n;
            b /= n;
        }
        true
    }

    pub fn index(&self, exps: Vec<usize>) -> Result<GroupIndex, GroupError> {
        GroupIndex::new(exps, self.clone())
    }
}

/// An exponent vector `i ∈ Λ(n)` together with its shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupIndex {
    exps: Vec<usize>,
    shape: Shape,
}

impl GroupIndex {
    pub fn new(exps: Vec<usize>, shape: Shape) -> Result<Self, GroupError> {
        if exps.len() != shape.m() {
            return Err(GroupError::ShapeMismatch(exps, shape.0.clone()));
        }
        for (e, n) in exps.iter().zip(shape.dims()) {
            if e >= n {
                return Err(GroupError::OutOfRange { index: shape.phi(&exps), order: shape.order() });
            }
        }
        Ok(GroupIndex { exps, shape })
    }

    pub fn identity(shape: &Shape) -> Self {
        GroupIndex { exps: vec![0; shape.m()], shape: shape.clone() }
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exps
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().sum()
    }
}

pub fn phi(i: &GroupIndex) -> usize {
    i.shape.phi(&i.exps)
}

pub fn phi_inv(x: usize, n: &Shape) -> Result<GroupIndex, GroupError> {
    if x >= n.order() {
        return Err(GroupError::OutOfRange { index: x, order: n.order() });
    }
    Ok(GroupIndex { exps: n.phi_inv(x), shape: n.clone() })
}

/// Reverse-lexicographic comparison: the last differing exponent decides.
pub fn revlex_cmp(i: &GroupIndex, j: &GroupIndex) -> Result<Ordering, GroupError> {
    if i.shape != j.shape {
        return Err(GroupError::ShapeMismatch(i.shape.0.clone(), j.shape.0.clone()));
    }
    for (a, b) in i.exps.iter().zip(&j.exps).rev() {
        match a.cmp(b) {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// Componentwise sum modulo `n`, with whether no coordinate wrapped.
pub fn group_add(i: &GroupIndex, j: &GroupIndex) -> Result<(GroupIndex, bool), GroupError> {
    if i.shape != j.shape {
        return Err(GroupError::ShapeMismatch(i.shape.0.clone(), j.shape.0.clone()));
    }
    let mut carry_free = true;
    let exps = i
        .exps
        .iter()
        .zip(&j.exps)
        .zip(i.shape.dims())
        .map(|((a, b), n)| {
            if a + b >= *n {
                carry_free = false;
            }
            (a + b) % n
        })
        .collect();
    Ok((GroupIndex { exps, shape: i.shape.clone() }, carry_free))
}

pub fn sigma_inverse(j: usize, i: usize, n: &Shape) -> usize {
    n.sigma_inverse(j, i)
}
