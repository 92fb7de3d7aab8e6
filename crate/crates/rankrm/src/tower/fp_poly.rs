//! Dense polynomials over F_p with a 64-bit prime modulus, used only while
//! building finite towers (irreducibility tests and Frobenius images).

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    addm(a, p - b % p, p)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulm(result, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    result
}

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// `a mod f` for monic `f`.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut r = a.to_vec();
    while r.len() > n {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - n;
            for (k, &c) in f[..n].iter().enumerate() {
                r[shift + k] = subm(r[shift + k], mulm(lead, c, p), p);
            }
        }
    }
    trim(r)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(x, y, p), p);
        }
    }
    trim(out)
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(a: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &base, f, p);
        }
        base = mulmod(&base, &base, f, p);
        e >>= 1;
    }
    result
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let out = (0..len).map(|i| subm(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect();
    trim(out)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        let monic: Vec<u64> = b.iter().map(|&c| mulm(c, inv, p)).collect();
        let r = rem(&a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(p^k) mod f`, by `k` successive p-th powers.
pub(crate) fn frobenius_power_of_x(k: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut h = rem(&[0, 1], f, p);
    for _ in 0..k {
        h = powmod(&h, p as u128, f, p);
    }
    h
}

/// Rabin's irreducibility test for monic `f` of degree `n`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 || *f.last().unwrap() != 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    if frobenius_power_of_x(n, f, p) != rem(&x, f, p) {
        return false;
    }
    for q in prime_factors(n) {
        let h = frobenius_power_of_x(n / q, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
