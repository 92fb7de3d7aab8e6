//! Polynomials over F_2 packed into 64-bit words, and reduced fractions of
//! them (the rational function field F_2(t)).

use std::fmt;

/// A polynomial over F_2; bit `i` of the packed words is the coefficient of `t^i`.
/// Trailing zero words are always trimmed, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { words: vec![1] }
    }

    /// The monomial `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        Poly2 { words }
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Poly2 { words }
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() { (self, other) } else { (other, self) };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut words = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            let mut bits = a;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let shift = i * 64 + b;
                let (ws, bs) = (shift / 64, shift % 64);
                for (j, &w) in other.words.iter().enumerate() {
                    words[j + ws] ^= w << bs;
                    if bs != 0 {
                        words[j + ws + 1] ^= w >> (64 - bs);
                    }
                }
            }
        }
        Self::from_words(words)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = vec![0u64; self.words.len().max(1)];
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            quot[shift / 64] |= 1u64 << (shift % 64);
            rem = rem.add(&divisor.shl(shift));
        }
        (Self::from_words(quot), rem)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Whether the polynomial is a square, i.e. only even powers of `t` occur.
    pub fn is_square(&self) -> bool {
        self.words.iter().all(|w| w & 0xaaaa_aaaa_aaaa_aaaa == 0)
    }

    /// Square root of a square polynomial.
    pub fn sqrt(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let deg = match self.degree() {
            None => return Some(Self::zero()),
            Some(d) => d,
        };
        let mut words = vec![0u64; deg / 128 + 1];
        for k in (0..=deg).step_by(2) {
            if self.coeff(k) {
                let h = k / 2;
                words[h / 64] |= 1u64 << (h % 64);
            }
        }
        Some(Self::from_words(words))
    }

    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = format!("{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        let bytes = s.as_bytes();
        let mut words = Vec::new();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).ok()?;
            words.push(u64::from_str_radix(chunk, 16).ok()?);
            end = start;
        }
        Some(Self::from_words(words))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}

/// A reduced fraction `num/den` of F_2-polynomials with `den` nonzero.
/// Over F_2 every nonzero polynomial is monic, so reduced form is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc2 {
    num: Poly2,
    den: Poly2,
}

impl RatFunc2 {
    pub fn zero() -> Self {
        RatFunc2 { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn one() -> Self {
        RatFunc2 { num: Poly2::one(), den: Poly2::one() }
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc2 { num: p, den: Poly2::one() }
    }

    /// Builds `num/den` in lowest terms; `None` if `den` is zero.
    pub fn new(num: Poly2, den: Poly2) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        if g.is_one() {
            return Some(RatFunc2 { num, den });
        }
        Some(RatFunc2 { num: num.divrem(&g).0, den: den.divrem(&g).0 })
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc2 { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn to_text(&self) -> String {
        format!("{}/{}", self.num.to_hex(), self.den.to_hex())
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => Self::new(Poly2::from_hex(n)?, Poly2::from_hex(d)?),
            None => Some(Self::from_poly(Poly2::from_hex(s)?)),
        }
    }
}

impl fmt::Debug for RatFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Whether `a = y² + y` for some `y` in F_2(t).
///
/// Writing `y = u/v` in lowest terms, `y² + y = (u² + uv)/v²` is already
/// reduced, so `a`'s denominator must be a square `v²` and `u` must solve the
/// F_2-linear equation `u² + uv = num(a)`, whose degree is bounded.
pub fn is_artin_schreier_image(a: &RatFunc2) -> bool {
    let v = match a.den().sqrt() {
        Some(v) => v,
        None => return false,
    };
    let p = a.num();
    let dp = match p.degree() {
        None => return true,
        Some(d) => d,
    };
    let dv = v.degree().unwrap();
    let bound = (dp / 2).max(dp.saturating_sub(dv)).max(dv);
    let unknowns = bound + 1;
    let rows = 2 * bound + dv + 1;
    // column k holds the image of u = t^k under u ↦ u² + u·v
    let mut cols: Vec<Poly2> = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        let m = Poly2::monomial(k);
        cols.push(m.mul(&m).add(&m.mul(&v)));
    }
    let rows = rows.max(dp + 1);
    // Gaussian elimination over F_2 on the augmented system, one bitset per row.
    let mut mat: Vec<Vec<bool>> = (0..rows)
        .map(|r| {
            let mut row: Vec<bool> = cols.iter().map(|c| c.coeff(r)).collect();
            row.push(p.coeff(r));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let Some(pr) = (pivot_row..rows).find(|&r| mat[r][col]) else {
            continue;
        };
        mat.swap(pivot_row, pr);
        for r in 0..rows {
            if r != pivot_row && mat[r][col] {
                let src = mat[pivot_row].clone();
                for (x, s) in mat[r].iter_mut().zip(src) {
                    *x ^= s;
                }
            }
        }
        pivot_row += 1;
    }
    mat[pivot_row..].iter().all(|row| !row[unknowns])
}
