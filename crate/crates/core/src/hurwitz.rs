// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic in the Hurwitz order of the Hamiltonian quaternions.
//!
//! Elements are stored by their doubled coordinates `(2a, 2b, 2c, 2d)`, which
//! are integers of a common parity. Conjugation by a quaternion of positive
//! norm gives a rotation of the pure quaternions (the span of i, j, k), and
//! the resulting 3×3 matrices are returned with exact rational entries.

use crate::arith::{self, check_odd_prime, prime_power};
use crate::spheres::LatticePoint3;
use crate::{Error, Result};
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Mul, Neg};

/// A Hurwitz quaternion `a + bi + cj + dk` with `a, b, c, d` all integers or
/// all halves of odd integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion {
    doubled: [i64; 4],
}

// Hamilton product of raw coordinate vectors.
fn hamilton(p: [i64; 4], q: [i64; 4]) -> [i64; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { doubled: [2, 0, 0, 0] };
    pub const I: Quaternion = Quaternion { doubled: [0, 2, 0, 0] };
    pub const J: Quaternion = Quaternion { doubled: [0, 0, 2, 0] };
    pub const K: Quaternion = Quaternion { doubled: [0, 0, 0, 2] };

    /// From doubled coordinates; they must share a parity.
    pub fn from_doubled(doubled: [i64; 4]) -> Result<Self> {
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|c| c.rem_euclid(2) != parity) {
            return Err(Error::Precondition(format!(
                "doubled coordinates {doubled:?} do not share a parity"
            )));
        }
        Ok(Self { doubled })
    }

    /// The Lipschitz quaternion `a + bi + cj + dk`.
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self {
            doubled: [2 * a, 2 * b, 2 * c, 2 * d],
        }
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.doubled
    }

    /// Integer coordinates, when all four are integral.
    pub fn integer_coords(&self) -> Option<[i64; 4]> {
        if self.doubled[0] % 2 == 0 {
            Some(self.doubled.map(|c| c / 2))
        } else {
            None
        }
    }

    pub fn conjugate(&self) -> Self {
        let [a, b, c, d] = self.doubled;
        Self {
            doubled: [a, -b, -c, -d],
        }
    }

    /// `a² + b² + c² + d²`; always an integer on the Hurwitz order.
    pub fn norm(&self) -> Ratio<i64> {
        Ratio::new(self.doubled_norm(), 4)
    }

    /// `4 · Nr(q)`.
    pub fn doubled_norm(&self) -> i64 {
        self.doubled.iter().map(|c| c * c).sum()
    }

    pub fn trace(&self) -> Ratio<i64> {
        Ratio::from_integer(self.doubled[0])
    }

    pub fn is_scalar(&self) -> bool {
        self.doubled[1..].iter().all(|&c| c == 0)
    }

    pub fn is_pure(&self) -> bool {
        self.doubled[0] == 0
    }

    /// Equality up to a nonzero rational scalar: all 2×2 minors of the two
    /// coordinate vectors vanish.
    pub fn projectively_eq(&self, other: &Self) -> bool {
        let (p, q) = (self.doubled, other.doubled);
        if p == [0; 4] || q == [0; 4] {
            return p == q;
        }
        (0..4).all(|i| ((i + 1)..4).all(|j| p[i] * q[j] == p[j] * q[i]))
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: Quaternion) -> Quaternion {
        let raw = hamilton(self.doubled, rhs.doubled);
        // (P/2)(Q/2) = PQ/4, so the doubled product is PQ/2. The Hurwitz
        // order is closed under multiplication, so PQ is even.
        debug_assert!(raw.iter().all(|c| c % 2 == 0));
        Quaternion {
            doubled: raw.map(|c| c / 2),
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion {
            doubled: self.doubled.map(|c| -c),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.doubled;
        if a % 2 == 0 {
            write!(f, "{} + {}i + {}j + {}k", a / 2, b / 2, c / 2, d / 2)
        } else {
            write!(f, "({a} + {b}i + {c}j + {d}k)/2")
        }
    }
}

/// A quaternion with zero real part and integral coordinates, identified with
/// an integer vector in the (i, j, k) basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PureQuaternion(LatticePoint3);

impl PureQuaternion {
    pub fn new(x: i64, y: i64, z: i64) -> Self {
        Self(LatticePoint3::new(x, y, z))
    }

    pub fn point(&self) -> &LatticePoint3 {
        &self.0
    }

    pub fn norm(&self) -> i64 {
        self.0.norm()
    }

    pub fn quaternion(&self) -> Quaternion {
        Quaternion::from_integers(0, self.0.x(), self.0.y(), self.0.z())
    }
}

impl From<LatticePoint3> for PureQuaternion {
    fn from(v: LatticePoint3) -> Self {
        Self(v)
    }
}

/// The 24 units of the Hurwitz order: ±1, ±i, ±j, ±k and (±1 ± i ± j ± k)/2.
pub fn hurwitz_units() -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(24);
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                for d in -2..=2i64 {
                    if let Ok(q) = Quaternion::from_doubled([a, b, c, d]) {
                        if q.doubled_norm() == 4 {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out
}

pub type RationalMatrix3 = [[Ratio<i64>; 3]; 3];

/// Matrix of `v ↦ q v q⁻¹` on the basis (i, j, k). Column `t` is the image of
/// the `t`-th basis vector.
pub fn rotation_of(q: &Quaternion) -> Result<RationalMatrix3> {
    let n = q.doubled_norm();
    if n == 0 {
        return Err(Error::ZeroQuaternion);
    }
    let qd = q.doubled;
    let qc = q.conjugate().doubled;
    let mut m = [[Ratio::zero(); 3]; 3];
    for t in 0..3 {
        let mut e = [0i64; 4];
        e[t + 1] = 1;
        // (Q/2) e (Q̄/2) / (n/4) = Q e Q̄ / n
        let image = hamilton(hamilton(qd, e), qc);
        debug_assert_eq!(image[0], 0);
        for r in 0..3 {
            m[r][t] = Ratio::new(image[r + 1], n);
        }
    }
    Ok(m)
}

pub fn mat_mul(a: &RationalMatrix3, b: &RationalMatrix3) -> RationalMatrix3 {
    let mut out = [[Ratio::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &RationalMatrix3) -> RationalMatrix3 {
    let mut out = *a;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[j][i];
        }
    }
    out
}

pub fn determinant(m: &RationalMatrix3) -> Ratio<i64> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn identity3() -> RationalMatrix3 {
    let mut m = [[Ratio::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Ratio::one();
    }
    m
}

/// Whether `q v q⁻¹ = v`, i.e. `q` commutes with `v`.
pub fn stabilizer_check(q: &Quaternion, v: &PureQuaternion) -> Result<bool> {
    if q.doubled_norm() == 0 {
        return Err(Error::ZeroQuaternion);
    }
    let vq = v.quaternion().doubled;
    Ok(hamilton(q.doubled, vq) == hamilton(vq, q.doubled))
}

// Column t holds the coordinates of e_t v1 - v2 e_t for e_t in (1, i, j, k).
fn intertwiner_matrix(v1: &PureQuaternion, v2: &PureQuaternion) -> [[i64; 4]; 4] {
    let a = [0, v1.0.x(), v1.0.y(), v1.0.z()];
    let b = [0, v2.0.x(), v2.0.y(), v2.0.z()];
    let mut m = [[0i64; 4]; 4];
    for t in 0..4 {
        let mut e = [0i64; 4];
        e[t] = 1;
        let l = hamilton(e, a);
        let r = hamilton(b, e);
        for row in 0..4 {
            m[row][t] = l[row] - r[row];
        }
    }
    m
}

fn apply4(m: &[[i64; 4]; 4], g: [i64; 4]) -> [i64; 4] {
    let mut out = [0i64; 4];
    for (row, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|t| m[row][t] * g[t]).sum();
    }
    out
}

fn digits4(n: u64, p: u64) -> [i64; 4] {
    [
        (n % p) as i64,
        (n / p % p) as i64,
        (n / (p * p) % p) as i64,
        (n / (p * p * p) % p) as i64,
    ]
}

/// Searches for a Hurwitz element `g`, invertible mod `p`, with
/// `g v1 g⁻¹ ≡ v2 (mod p^k)`.
///
/// Since 2 is a unit at odd p, the order mod p^k is spanned by 1, i, j, k, and
/// the condition `g v1 ≡ v2 g` is linear in the coordinates of `g`. The search
/// runs over residues mod p in increasing order of `a + bp + cp² + dp³`,
/// keeping those of unit norm, and lifts each one digit at a time, again
/// taking the first admissible digit vector. The returned coordinates lie in
/// `[0, p^k)`.
pub fn local_transitivity_probe(
    v1: &PureQuaternion,
    v2: &PureQuaternion,
    p: u64,
    k: u32,
) -> Result<Option<Quaternion>> {
    check_odd_prime(p)?;
    let modulus = prime_power(p, k)? as i64;
    if !v1.0.is_primitive() || !v2.0.is_primitive() {
        return Err(Error::Precondition(
            "transitivity probe needs primitive vectors".into(),
        ));
    }
    let n1 = v1.norm();
    if (n1 - v2.norm()).rem_euclid(modulus) != 0 {
        return Err(Error::Precondition(format!(
            "norms {} and {} differ mod {p}^{k}",
            n1,
            v2.norm()
        )));
    }
    if (2 * n1).rem_euclid(p as i64) == 0 {
        return Err(Error::PrimeDividesNorm { p, d: n1 });
    }
    let pi = p as i64;
    let m = intertwiner_matrix(v1, v2);
    let is_zero_mod = |v: [i64; 4], q: i64| v.iter().all(|c| c.rem_euclid(q) == 0);
    'base: for n in 0..p.pow(4) {
        let g0 = digits4(n, p);
        let norm = g0.iter().map(|c| c * c).sum::<i64>();
        if norm % pi == 0 || !is_zero_mod(apply4(&m, g0), pi) {
            continue;
        }
        let mut g = g0;
        let mut pj = pi;
        for _ in 1..k {
            let carry = apply4(&m, g).map(|c| c / pj);
            let lift = (0..p.pow(4)).map(|s| digits4(s, p)).find(|h| {
                let lh = apply4(&m, *h);
                (0..4).all(|r| (lh[r] + carry[r]).rem_euclid(pi) == 0)
            });
            match lift {
                Some(h) => {
                    for t in 0..4 {
                        g[t] += pj * h[t];
                    }
                    pj *= pi;
                }
                None => continue 'base,
            }
        }
        debug_assert!(is_zero_mod(apply4(&m, g), modulus));
        return Ok(Some(Quaternion::from_integers(g[0], g[1], g[2], g[3])));
    }
    Ok(None)
}

/// Checks `g v1 ḡ · Nr(g)⁻¹ ≡ v2 (mod p^k)` coordinatewise, with `Nr(g)` a
/// unit mod p. Independent of the linear system used by the probe.
pub fn verify_transitivity_witness(
    g: &Quaternion,
    v1: &PureQuaternion,
    v2: &PureQuaternion,
    p: u64,
    k: u32,
) -> bool {
    let Some(gi) = g.integer_coords() else {
        return false;
    };
    let Ok(modulus) = prime_power(p, k) else {
        return false;
    };
    let norm: i64 = gi.iter().map(|c| c * c).sum();
    let Some(inv) = arith::inv_mod(norm.rem_euclid(modulus as i64) as u64, modulus) else {
        return false;
    };
    let conj = [gi[0], -gi[1], -gi[2], -gi[3]];
    let a = [0, v1.0.x(), v1.0.y(), v1.0.z()];
    let image = hamilton(hamilton(gi, a), conj);
    let target = [0, v2.0.x(), v2.0.y(), v2.0.z()];
    (0..4).all(|t| {
        let lhs = arith::mul_mod(
            image[t].rem_euclid(modulus as i64) as u64,
            inv,
            modulus,
        );
        lhs == target[t].rem_euclid(modulus as i64) as u64
    })
}
