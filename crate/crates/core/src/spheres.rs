// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Primitive integer points on the spheres x² + y² + z² = d.
//!
//! Enumeration scans x and y over the ball and tests whether the remainder
//! d - x² - y² is a perfect square, which costs O(d) per sphere and yields the
//! points in lexicographic order. For scans over many d at once,
//! [`primitive_counts_upto`] counts every sphere up to a bound in one pass.

use crate::arith::{self, check_odd_prime, prime_power};
use crate::{par, Error, Result};
use num_integer::Integer;
use std::collections::HashMap;
use std::sync::OnceLock;

/// An integer vector with its squared Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint3 {
    x: i64,
    y: i64,
    z: i64,
    d: i64,
}

impl LatticePoint3 {
    pub fn new(x: i64, y: i64, z: i64) -> Self {
        Self {
            x,
            y,
            z,
            d: x * x + y * y + z * z,
        }
    }

    pub fn from_coords(c: [i64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    /// The norm x² + y² + z².
    pub fn norm(&self) -> i64 {
        self.d
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_primitive(&self) -> bool {
        arith::gcd3(self.x, self.y, self.z) == 1
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    /// Applies an integral rotation.
    pub fn rotate(&self, g: &Rotation3) -> Self {
        Self::from_coords(g.apply(self.coords()))
    }
}

/// The primitive points of norm `d`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpherePointSet {
    d: i64,
    points: Vec<LatticePoint3>,
}

impl SpherePointSet {
    pub fn norm(&self) -> i64 {
        self.d
    }

    pub fn points(&self) -> &[LatticePoint3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Unit vectors `v / sqrt(d)` for every point.
    pub fn unit_vectors(&self) -> Vec<[f64; 3]> {
        self.points
            .iter()
            .map(|p| project_to_sphere(p).expect("points of a sphere are nonzero"))
            .collect()
    }
}

/// A 3×3 signed permutation matrix with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation3 {
    perm: [usize; 3],
    signs: [i64; 3],
}

impl Rotation3 {
    /// Row `i` of the result is `signs[i] * v[perm[i]]`.
    pub fn apply(&self, v: [i64; 3]) -> [i64; 3] {
        [
            self.signs[0] * v[self.perm[0]],
            self.signs[1] * v[self.perm[1]],
            self.signs[2] * v[self.perm[2]],
        ]
    }

    pub fn matrix(&self) -> [[i64; 3]; 3] {
        let mut m = [[0; 3]; 3];
        for i in 0..3 {
            m[i][self.perm[i]] = self.signs[i];
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.perm == [0, 1, 2] && self.signs == [1, 1, 1]
    }
}

/// The 24 rotations of the cube: signed permutation matrices of determinant
/// one. Built once; the identity comes first.
pub fn rotation_group() -> &'static [Rotation3] {
    static GROUP: OnceLock<Vec<Rotation3>> = OnceLock::new();
    GROUP.get_or_init(|| {
        const PERMS: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([2, 1, 0], -1),
        ];
        let mut out = Vec::with_capacity(24);
        for (perm, parity) in PERMS {
            for bits in 0..8u8 {
                let signs = [
                    if bits & 4 == 0 { 1 } else { -1 },
                    if bits & 2 == 0 { 1 } else { -1 },
                    if bits & 1 == 0 { 1 } else { -1 },
                ];
                if parity * signs[0] * signs[1] * signs[2] == 1 {
                    out.push(Rotation3 { perm, signs });
                }
            }
        }
        out
    })
}

/// True iff `d mod 8` is not 0, 4 or 7, i.e. `d` is a sum of three squares
/// with a primitive solution.
pub fn legendre_admissible(d: i64) -> bool {
    d >= 1 && !matches!(d.rem_euclid(8), 0 | 4 | 7)
}

/// Legendre admissibility plus `-d` a nonzero square modulo `p`.
pub fn linnik_admissible(d: i64, p: u64) -> Result<bool> {
    let chi = arith::legendre_symbol(-d, p)?;
    Ok(legendre_admissible(d) && chi == 1)
}

/// All primitive solutions of x² + y² + z² = d in lexicographic order.
pub fn enumerate_primitive_points(d: i64) -> SpherePointSet {
    let mut points = Vec::new();
    if d >= 1 {
        let s = arith::isqrt(d);
        for x in -s..=s {
            let rx = d - x * x;
            let sy = arith::isqrt(rx);
            for y in -sy..=sy {
                let rem = rx - y * y;
                let z = arith::isqrt(rem);
                if z * z != rem {
                    continue;
                }
                let g = x.gcd(&y).gcd(&z);
                if g != 1 {
                    continue;
                }
                if z == 0 {
                    points.push(LatticePoint3::new(x, y, 0));
                } else {
                    points.push(LatticePoint3::new(x, y, -z));
                    points.push(LatticePoint3::new(x, y, z));
                }
            }
        }
    }
    SpherePointSet { d, points }
}

/// `|I_d|` for every `0 <= d <= n`, where `I_d` is the set of primitive
/// points of norm d. Index 0 holds 0.
///
/// Counts all representations through the two-squares table and a sum over
/// the third coordinate, then removes imprimitive ones by Möbius inversion
/// over square divisors.
pub fn primitive_counts_upto(n: usize) -> Vec<u64> {
    let n_i = n as i64;
    let mut r2 = vec![0u64; n + 1];
    let s = arith::isqrt(n_i);
    for x in -s..=s {
        let rx = n_i - x * x;
        let sy = arith::isqrt(rx);
        for y in -sy..=sy {
            r2[(x * x + y * y) as usize] += 1;
        }
    }
    let r3: Vec<u64> = par::map_range(0, n_i + 1, |k| {
        let t = arith::isqrt(k);
        (-t..=t).map(|z| r2[(k - z * z) as usize]).sum()
    });
    let mut prim = vec![0i64; n + 1];
    let mut f = 1usize;
    while f * f <= n {
        let mu = arith::mobius(f as u64) as i64;
        if mu != 0 {
            let step = f * f;
            let mut k = step;
            while k <= n {
                prim[k] += mu * r3[k / step] as i64;
                k += step;
            }
        }
        f += 1;
    }
    prim.into_iter().map(|c| c.max(0) as u64).collect()
}

/// `v / sqrt(d)` as a floating unit vector.
pub fn project_to_sphere(v: &LatticePoint3) -> Result<[f64; 3]> {
    if v.norm() == 0 {
        return Err(Error::ZeroVector);
    }
    let r = (v.norm() as f64).sqrt();
    Ok([v.x as f64 / r, v.y as f64 / r, v.z as f64 / r])
}

/// Occupancy of residue classes `(x, y, z) mod p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueSpread {
    pub occupied: usize,
    pub max_multiplicity: usize,
}

pub fn residue_spread(points: &[LatticePoint3], p: u64, m: u32) -> Result<ResidueSpread> {
    check_odd_prime(p)?;
    let modulus = prime_power(p, m)? as i64;
    let mut classes: HashMap<[i64; 3], usize> = HashMap::new();
    for v in points {
        *classes.entry(reduce_coords(v, modulus)).or_default() += 1;
    }
    Ok(ResidueSpread {
        occupied: classes.len(),
        max_multiplicity: classes.values().copied().max().unwrap_or(0),
    })
}

pub(crate) fn reduce_coords(v: &LatticePoint3, modulus: i64) -> [i64; 3] {
    [
        v.x.rem_euclid(modulus),
        v.y.rem_euclid(modulus),
        v.z.rem_euclid(modulus),
    ]
}

/// Lexicographically smallest image of `v` under the rotation group.
pub fn canonical_representative(v: &LatticePoint3) -> LatticePoint3 {
    rotation_group()
        .iter()
        .map(|g| v.rotate(g))
        .min()
        .expect("group is nonempty")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: LatticePoint3,
    pub size: usize,
}

/// Partitions `points` into orbits of the rotation group, sorted by their
/// (lexicographically minimal) representatives.
pub fn so3z_orbit_classes(points: &[LatticePoint3]) -> Vec<OrbitClass> {
    let mut sizes: HashMap<LatticePoint3, usize> = HashMap::new();
    for v in points {
        *sizes.entry(canonical_representative(v)).or_default() += 1;
    }
    let mut out: Vec<OrbitClass> = sizes
        .into_iter()
        .map(|(representative, size)| OrbitClass {
            representative,
            size,
        })
        .collect();
    out.sort_by_key(|c| c.representative);
    out
}
