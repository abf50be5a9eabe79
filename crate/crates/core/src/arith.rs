// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Integer, modular and finite-precision p-adic primitives.
//!
//! Residues modulo p^k are kept in `u64`; products go through `u128`, so no
//! intermediate can wrap. Only odd primes are accepted by the p-adic
//! routines.

use crate::{Error, Result};
use num_integer::{Integer, Roots};
use std::fmt;

/// Odd primes up to this bound are verified by trial division. Larger moduli
/// are trusted to be prime.
pub const PRIMALITY_CHECK_LIMIT: u64 = 1_000_000;

/// An integer residue modulo `prime^precision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    residue: u64,
    prime: u64,
    precision: u32,
}

impl ResidueClass {
    /// Reduces `value` modulo `prime^precision`.
    pub fn new(value: i128, prime: u64, precision: u32) -> Result<Self> {
        check_odd_prime(prime)?;
        let modulus = prime_power(prime, precision)?;
        Ok(Self {
            residue: value.rem_euclid(modulus as i128) as u64,
            prime,
            precision,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.precision)
    }

    /// The additive inverse, i.e. the other square root when `self` is one.
    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self {
            residue: (m - self.residue) % m,
            ..*self
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.prime, self.precision)
    }
}

/// p-adic valuation of an integer; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut f = 5u64;
    while f * f <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

/// Rejects 2, even numbers, and (up to [`PRIMALITY_CHECK_LIMIT`]) composites.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || (p <= PRIMALITY_CHECK_LIMIT && !is_prime(p)) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

pub fn prime_power(p: u64, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroPrecision);
    }
    p.checked_pow(k).ok_or(Error::PrecisionTooLarge { p, k })
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Legendre symbol `(a | p)` for an odd prime `p`, in {-1, 0, 1}.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(jacobi((a as i128).rem_euclid(p as i128) as u64, p))
}

// Binary Jacobi symbol; n must be odd.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1i8;
    a %= n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli–Shanks).
fn sqrt_mod_prime(a: u64, p: u64) -> u64 {
    let a = a % p;
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while jacobi(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Square root of `a` modulo `p^k` lifted from a root mod `p` by Newton
/// iteration. Of the two roots, the one with the smaller residue is returned.
/// `None` when `a` is a non-residue mod `p`.
pub fn hensel_sqrt(a: i64, p: u64, k: u32) -> Result<Option<ResidueClass>> {
    check_odd_prime(p)?;
    let modulus = prime_power(p, k)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::NotCoprime { a, p });
    }
    let a_mod = (a as i128).rem_euclid(modulus as i128) as u64;
    if jacobi(a_mod % p, p) != 1 {
        return Ok(None);
    }
    let mut r = sqrt_mod_prime(a_mod, p);
    let mut pj = p;
    for _ in 1..k {
        pj *= p;
        let r2 = mul_mod(r, r, pj);
        let diff = (r2 as i128 - (a_mod % pj) as i128).rem_euclid(pj as i128) as u64;
        // 2r is a unit since p is odd and p does not divide r.
        let inv = inv_mod(mul_mod(2, r, pj), pj).expect("2r is a unit mod p^j");
        let step = mul_mod(diff, inv, pj);
        r = (r + pj - step) % pj;
    }
    let root = r.min(modulus - r);
    Ok(Some(ResidueClass {
        residue: root,
        prime: p,
        precision: k,
    }))
}

/// Largest `e` with `p^e | n`.
pub fn padic_valuation(n: i128, p: u64) -> Valuation {
    assert!(p >= 2, "valuation needs a prime");
    if n == 0 {
        return Valuation::Infinite;
    }
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Exact integer square root of a nonnegative integer.
pub fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    n.sqrt()
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |n: &mut u64, f: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(f) {
            *n /= f;
            e += 1;
        }
        if e > 0 {
            out.push((f, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let mut f = 5u64;
    while f * f <= n {
        push(&mut n, f);
        push(&mut n, f + 2);
        f += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of distinct prime divisors of `|n|`, counting 2.
pub fn distinct_prime_count(n: i64) -> u32 {
    factorize(n.unsigned_abs()).len() as u32
}

/// Number of distinct odd prime divisors of `|n|`.
pub fn distinct_odd_prime_count(n: i64) -> u32 {
    factorize(n.unsigned_abs())
        .iter()
        .filter(|(q, _)| *q != 2)
        .count() as u32
}

/// Möbius function on positive integers.
pub fn mobius(n: u64) -> i8 {
    let mut sign = 1i8;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Largest `f` with `f^2 | n` (for `n > 0`).
pub fn square_part_root(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(q, e)| q.pow(e / 2))
        .product()
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}
