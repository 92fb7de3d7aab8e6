//! Exact arithmetic in the supported base fields K: prime fields F_p with a
//! 64-bit modulus, the rationals, and the rational function field F_2(t).

pub mod f2poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use f2poly::{Poly2, RatFunc2};

use crate::ops;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(BaseField, BaseField),
    #[error("{0} is not a prime below 2^64")]
    NotPrime(u64),
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { text: String, field: BaseField },
}

/// Which base field a scalar lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseField {
    Prime { p: u64 },
    Rational,
    Ratfunc2,
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Prime { p } => write!(f, "F_{p}"),
            BaseField::Rational => f.write_str("Q"),
            BaseField::Ratfunc2 => f.write_str("F_2(t)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element of one of the base fields, always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Prime { v: u64, p: u64 },
    Rational(BigRational),
    Ratfunc2(RatFunc2),
}

impl BaseField {
    pub fn prime(p: u64) -> Result<Self, KFieldError> {
        if primal_check::miller_rabin(p) {
            Ok(BaseField::Prime { p })
        } else {
            Err(KFieldError::NotPrime(p))
        }
    }

    /// Characteristic, with 0 for Q.
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Prime { p } => *p,
            BaseField::Rational => 0,
            BaseField::Ratfunc2 => 2,
        }
    }

    pub fn zero(&self) -> FieldScalar {
        match self {
            BaseField::Prime { p } => FieldScalar::Prime { v: 0, p: *p },
            BaseField::Rational => FieldScalar::Rational(BigRational::zero()),
            BaseField::Ratfunc2 => FieldScalar::Ratfunc2(RatFunc2::zero()),
        }
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> FieldScalar {
        match self {
            BaseField::Prime { p } => {
                let v = (x as i128).rem_euclid(*p as i128) as u64;
                FieldScalar::Prime { v, p: *p }
            }
            BaseField::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(x))),
            BaseField::Ratfunc2 => {
                if x.rem_euclid(2) == 1 {
                    FieldScalar::Ratfunc2(RatFunc2::one())
                } else {
                    FieldScalar::Ratfunc2(RatFunc2::zero())
                }
            }
        }
    }

    /// A random element. Over Q and F_2(t) the samples are kept small
    /// (numerators and denominators of bounded size) so that exact
    /// computations stay fast.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldScalar {
        match self {
            BaseField::Prime { p } => FieldScalar::Prime { v: rng.gen_range(0..*p), p: *p },
            BaseField::Rational => {
                let num = rng.gen_range(-4i64..=4);
                let den = rng.gen_range(1i64..=3);
                FieldScalar::Rational(BigRational::new(num.into(), den.into()))
            }
            BaseField::Ratfunc2 => {
                let num = Poly2::from_u64(rng.gen_range(0..16));
                let den = Poly2::from_u64(rng.gen_range(1..4));
                FieldScalar::Ratfunc2(RatFunc2::new(num, den).unwrap())
            }
        }
    }

    /// A random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldScalar {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<FieldScalar, KFieldError> {
        let err = || KFieldError::Parse { text: text.to_string(), field: self.clone() };
        let s = text.trim();
        match self {
            BaseField::Prime { p } => {
                let v: u64 = s.parse().map_err(|_| err())?;
                if v >= *p {
                    return Err(err());
                }
                Ok(FieldScalar::Prime { v, p: *p })
            }
            BaseField::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(FieldScalar::Rational(BigRational::new(n, d)))
            }
            BaseField::Ratfunc2 => RatFunc2::parse(s).map(FieldScalar::Ratfunc2).ok_or_else(err),
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

impl FieldScalar {
    pub fn field(&self) -> BaseField {
        match self {
            FieldScalar::Prime { p, .. } => BaseField::Prime { p: *p },
            FieldScalar::Rational(_) => BaseField::Rational,
            FieldScalar::Ratfunc2(_) => BaseField::Ratfunc2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Prime { v, .. } => *v == 0,
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Ratfunc2(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Prime { v, .. } => *v == 1,
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Ratfunc2(f) => f.is_one(),
        }
    }

    fn mismatch(&self, other: &Self) -> ! {
        panic!("{}", KFieldError::FieldMismatch(self.field(), other.field()))
    }

    pub fn add(&self, other: &Self) -> Self {
        ops::tick();
        match (self, other) {
            (FieldScalar::Prime { v: a, p }, FieldScalar::Prime { v: b, p: q }) if p == q => {
                let s = *a as u128 + *b as u128;
                FieldScalar::Prime { v: (s % *p as u128) as u64, p: *p }
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Ratfunc2(a), FieldScalar::Ratfunc2(b)) => FieldScalar::Ratfunc2(a.add(b)),
            _ => self.mismatch(other),
        }
    }

    pub fn neg(&self) -> Self {
        ops::tick();
        match self {
            FieldScalar::Prime { v, p } => FieldScalar::Prime { v: if *v == 0 { 0 } else { p - v }, p: *p },
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Ratfunc2(a) => FieldScalar::Ratfunc2(a.clone()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ops::tick();
        match (self, other) {
            (FieldScalar::Prime { v: a, p }, FieldScalar::Prime { v: b, p: q }) if p == q => {
                let s = *a as u128 + (*p - *b) as u128;
                FieldScalar::Prime { v: (s % *p as u128) as u64, p: *p }
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a - b),
            (FieldScalar::Ratfunc2(a), FieldScalar::Ratfunc2(b)) => FieldScalar::Ratfunc2(a.add(b)),
            _ => self.mismatch(other),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ops::tick();
        match (self, other) {
            (FieldScalar::Prime { v: a, p }, FieldScalar::Prime { v: b, p: q }) if p == q => {
                let s = *a as u128 * *b as u128;
                FieldScalar::Prime { v: (s % *p as u128) as u64, p: *p }
            }
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Ratfunc2(a), FieldScalar::Ratfunc2(b)) => FieldScalar::Ratfunc2(a.mul(b)),
            _ => self.mismatch(other),
        }
    }

    pub fn inv(&self) -> Result<Self, KFieldError> {
        ops::tick();
        if self.is_zero() {
            return Err(KFieldError::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Prime { v, p } => FieldScalar::Prime { v: inv_mod(*v, *p), p: *p },
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Ratfunc2(a) => FieldScalar::Ratfunc2(a.inv().unwrap()),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, KFieldError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Canonical textual form: decimal residue, `num/den`, or `polyhex/polyhex`.
    pub fn to_text(&self) -> String {
        match self {
            FieldScalar::Prime { v, .. } => v.to_string(),
            FieldScalar::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            FieldScalar::Ratfunc2(f) => f.to_text(),
        }
    }

    /// Rebuilds the canonical representative. Values built through this
    /// module are already canonical, so this is the identity on them.
    pub fn normalized(&self) -> Self {
        match self {
            FieldScalar::Prime { v, p } => FieldScalar::Prime { v: v % p, p: *p },
            FieldScalar::Rational(q) => FieldScalar::Rational(BigRational::new(q.numer().clone(), q.denom().clone())),
            FieldScalar::Ratfunc2(f) => FieldScalar::Ratfunc2(RatFunc2::new(f.num().clone(), f.den().clone()).unwrap()),
        }
    }

    /// For rationals: whether the value is the square of a rational.
    pub fn is_rational_square(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => {
                if q.is_negative() {
                    return false;
                }
                let n = q.numer();
                let d = q.denom();
                let sn = n.sqrt();
                let sd = d.sqrt();
                &(&sn * &sn) == n && &(&sd * &sd) == d
            }
            _ => false,
        }
    }
}

/// Checked binary operation: reports mismatched fields and division by zero
/// instead of panicking.
pub fn field_ops(a: &FieldScalar, b: &FieldScalar, op: FieldOp) -> Result<FieldScalar, KFieldError> {
    if a.field() != b.field() {
        return Err(KFieldError::FieldMismatch(a.field(), b.field()));
    }
    match op {
        FieldOp::Add => Ok(a.add(b)),
        FieldOp::Sub => Ok(a.sub(b)),
        FieldOp::Mul => Ok(a.mul(b)),
        FieldOp::Div => a.div(b),
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
