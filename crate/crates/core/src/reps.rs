// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Representations of binary forms by positive definite ternary forms,
//! counted both as embeddings and as orbits of the integral orthogonal
//! group; the divisor-count example for the indefinite form `xy`; and the
//! census of congruent pairs on a sphere.

use crate::arith::{self, check_odd_prime, prime_power};
use crate::forms::BinaryForm;
use crate::spheres::{self, rotation_group, LatticePoint3, Rotation3};
use crate::{par, Error, Result};
use std::collections::{BTreeMap, HashMap, HashSet};

pub type Matrix3 = [[i64; 3]; 3];

/// An integral ternary quadratic form `Q(x) = xᵀ G x`, stored as the doubled
/// Gram matrix `M = 2G` (symmetric, integral, even diagonal).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    doubled_gram: Matrix3,
}

impl TernaryForm {
    pub fn from_doubled_gram(m: Matrix3) -> Result<Self> {
        for i in 0..3 {
            if m[i][i] % 2 != 0 {
                return Err(Error::Precondition("diagonal of 2G must be even".into()));
            }
            for j in 0..3 {
                if m[i][j] != m[j][i] {
                    return Err(Error::Precondition("Gram matrix must be symmetric".into()));
                }
            }
        }
        Ok(Self { doubled_gram: m })
    }

    /// `a x² + b y² + c z²`.
    pub fn diagonal(a: i64, b: i64, c: i64) -> Self {
        Self {
            doubled_gram: [[2 * a, 0, 0], [0, 2 * b, 0], [0, 0, 2 * c]],
        }
    }

    pub fn sum_of_three_squares() -> Self {
        Self::diagonal(1, 1, 1)
    }

    pub fn doubled_gram(&self) -> &Matrix3 {
        &self.doubled_gram
    }

    pub fn value(&self, x: [i64; 3]) -> i64 {
        self.doubled_bilinear(x, x) / 2
    }

    /// `xᵀ M y = 2 B(x, y)` where `B(x, y) = (Q(x+y) - Q(x) - Q(y))/2`.
    pub fn doubled_bilinear(&self, x: [i64; 3], y: [i64; 3]) -> i64 {
        let m = &self.doubled_gram;
        (0..3)
            .map(|i| (0..3).map(|j| x[i] * m[i][j] * y[j]).sum::<i64>())
            .sum()
    }

    pub fn is_positive_definite(&self) -> bool {
        let m = &self.doubled_gram;
        let m1 = m[0][0];
        let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        m1 > 0 && m2 > 0 && det3(m) > 0
    }

    fn is_diagonal(&self) -> bool {
        let m = &self.doubled_gram;
        m[0][1] == 0 && m[0][2] == 0 && m[1][2] == 0
    }

    /// All `x ∈ ℤ³` with `Q(x) = n`, lexicographically ordered.
    pub fn shell(&self, n: i64) -> Result<Vec<[i64; 3]>> {
        if !self.is_positive_definite() {
            return Err(Error::TernaryNotDefinite);
        }
        let mut out = Vec::new();
        if n < 0 {
            return Ok(out);
        }
        let m = &self.doubled_gram;
        if self.is_diagonal() {
            let (a, b, c) = (m[0][0] / 2, m[1][1] / 2, m[2][2] / 2);
            let sx = arith::isqrt(n / a);
            for x in -sx..=sx {
                let rx = n - a * x * x;
                let sy = arith::isqrt(rx / b);
                for y in -sy..=sy {
                    let rem = rx - b * y * y;
                    if rem % c != 0 {
                        continue;
                    }
                    let z2 = rem / c;
                    let z = arith::isqrt(z2);
                    if z * z != z2 {
                        continue;
                    }
                    if z == 0 {
                        out.push([x, y, 0]);
                    } else {
                        out.push([x, y, -z]);
                        out.push([x, y, z]);
                    }
                }
            }
            return Ok(out);
        }
        // |x_i|² <= Q(x) · (G⁻¹)_ii = 2n · cofactor_ii(M) / det(M)
        let det = det3(m) as f64;
        let bound = |i: usize| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let cof = (m[j][j] * m[k][k] - m[j][k] * m[k][j]) as f64;
            (2.0 * n as f64 * cof / det).sqrt().floor() as i64 + 1
        };
        let (bx, by, bz) = (bound(0), bound(1), bound(2));
        for x in -bx..=bx {
            for y in -by..=by {
                for z in -bz..=bz {
                    if self.value([x, y, z]) == n {
                        out.push([x, y, z]);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn det3(m: &Matrix3) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mat_vec(m: &Matrix3, v: [i64; 3]) -> [i64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

/// Determinant-one integer matrices `T` with `Tᵀ G T = G`. The columns of
/// `T` are vectors of the three diagonal norms with the right pairwise
/// inner products.
pub fn integral_automorphisms(q: &TernaryForm) -> Result<Vec<Matrix3>> {
    if !q.is_positive_definite() {
        return Err(Error::TernaryNotDefinite);
    }
    let m = q.doubled_gram();
    let shells: Vec<Vec<[i64; 3]>> = (0..3)
        .map(|i| q.shell(m[i][i] / 2))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for c1 in &shells[0] {
        for c2 in &shells[1] {
            if q.doubled_bilinear(*c1, *c2) != m[0][1] {
                continue;
            }
            for c3 in &shells[2] {
                if q.doubled_bilinear(*c1, *c3) != m[0][2]
                    || q.doubled_bilinear(*c2, *c3) != m[1][2]
                {
                    continue;
                }
                let t = [
                    [c1[0], c2[0], c3[0]],
                    [c1[1], c2[1], c3[1]],
                    [c1[2], c2[2], c3[2]],
                ];
                if det3(&t) == 1 {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// Counts of a binary form's representations by a ternary form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representations {
    /// Pairs `(u, w)` with `Q(u) = a`, `Q(w) = c`, `2B(u, w) = b`.
    pub embeddings: u64,
    /// Those pairs up to the diagonal action of `SO_Q(ℤ)`.
    pub orbits: u64,
}

fn canonical_pair(group: &[Matrix3], u: [i64; 3], w: [i64; 3]) -> ([i64; 3], [i64; 3]) {
    group
        .iter()
        .map(|g| (mat_vec(g, u), mat_vec(g, w)))
        .min()
        .expect("group contains the identity")
}

pub fn count_representations(q3: &TernaryForm, q2: &BinaryForm) -> Result<Representations> {
    if !q2.is_positive_definite() {
        return Err(Error::NotPositiveDefinite {
            a: q2.a,
            b: q2.b,
            c: q2.c,
        });
    }
    let group = integral_automorphisms(q3)?;
    let us = q3.shell(q2.a)?;
    let ws = q3.shell(q2.c)?;
    let mut embeddings = 0u64;
    let mut classes = HashSet::new();
    for u in &us {
        for w in &ws {
            if q3.doubled_bilinear(*u, *w) == q2.b {
                embeddings += 1;
                classes.insert(canonical_pair(&group, *u, *w));
            }
        }
    }
    Ok(Representations {
        embeddings,
        orbits: classes.len() as u64,
    })
}

/// Orbit counts of representations by x² + y² + z² for every primitive
/// positive definite `(a, b, c)` with `1 <= a, c <= max` and `|b| <= max`.
/// Only nonzero counts are returned, keyed by the form.
///
/// Fixes `u` to one representative per rotation orbit and counts orbits of
/// its stabilizer on the admissible `w`, which gives the same number as
/// canonicalizing whole pairs.
pub fn sum_of_squares_orbit_table(max: i64) -> BTreeMap<BinaryForm, u64> {
    let group = rotation_group();
    let shells: Vec<Vec<LatticePoint3>> = (0..=max)
        .map(all_points_of_norm)
        .collect();
    let rows: Vec<Vec<(BinaryForm, u64)>> = par::map_range(1, max + 1, |a| {
        let mut counts: HashMap<BinaryForm, u64> = HashMap::new();
        let reps = orbit_representatives(&shells[a as usize]);
        for u in reps {
            let stab: Vec<&Rotation3> = group
                .iter()
                .filter(|g| !g.is_identity() && u.rotate(g) == u)
                .collect();
            for c in 1..=max {
                let mut seen: HashSet<(i64, LatticePoint3)> = HashSet::new();
                for w in &shells[c as usize] {
                    let t = u.dot(w);
                    let b = 2 * t;
                    if b.abs() > max || t * t >= a * c || arith::gcd3(a, b, c) != 1 {
                        continue;
                    }
                    let canon = stab
                        .iter()
                        .map(|g| w.rotate(g))
                        .fold(*w, |acc, x| acc.min(x));
                    if seen.insert((t, canon)) {
                        *counts.entry(BinaryForm::new(a, b, c)).or_default() += 1;
                    }
                }
            }
        }
        counts.into_iter().collect()
    });
    rows.into_iter().flatten().collect()
}

fn all_points_of_norm(n: i64) -> Vec<LatticePoint3> {
    TernaryForm::sum_of_three_squares()
        .shell(n)
        .expect("definite")
        .into_iter()
        .map(LatticePoint3::from_coords)
        .collect()
}

fn orbit_representatives(points: &[LatticePoint3]) -> Vec<LatticePoint3> {
    let mut reps: Vec<LatticePoint3> = points
        .iter()
        .map(spheres::canonical_representative)
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    reps.sort();
    reps
}

/// Positive divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    arith::factorize(n)
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

/// Integer solutions of `xy = n` for `n >= 1`, i.e. representations of `n z²`
/// by the hyperbolic plane `xy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicCount {
    /// Solutions with `x > 0`.
    pub positive: u64,
    /// All solutions; each positive one pairs with its negative.
    pub all: u64,
}

pub fn hyperbolic_representations(n: u64) -> HyperbolicCount {
    let n = n as i64;
    let mut positive = 0;
    let mut all = 0;
    for x in (-n..=n).filter(|&x| x != 0) {
        if n % x == 0 {
            all += 1;
            if x > 0 {
                positive += 1;
            }
        }
    }
    HyperbolicCount { positive, all }
}

/// Ordered pairs of distinct primitive points of norm `d` congruent modulo
/// `p^m` coordinatewise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCensus {
    pub d: i64,
    pub p: u64,
    pub m: u32,
    pub ordered_pairs: u64,
    /// Orbits of the rotation group acting diagonally on the pairs.
    pub classes: u64,
    /// Histogram of `e = 2 w1·w2`, the middle coefficient of
    /// `Nr(x w1 + y w2) = d x² + e xy + d y²`.
    pub middle_coefficients: BTreeMap<i64, u64>,
}

impl PairCensus {
    /// Checks `|2d - e| <= 4d`, `p^{2m} | 2d - e` and `e ≠ ±2d` for every
    /// recorded pair.
    pub fn middle_coefficients_consistent(&self) -> bool {
        let q = (self.p as i128).pow(2 * self.m);
        self.middle_coefficients.keys().all(|&e| {
            let gap = 2 * self.d as i128 - e as i128;
            gap.abs() <= 4 * self.d as i128 && gap % q == 0 && e != 2 * self.d && e != -2 * self.d
        })
    }
}

fn congruent_pairs(points: &[LatticePoint3], modulus: i64) -> u64 {
    let mut buckets: HashMap<[i64; 3], u64> = HashMap::new();
    for v in points {
        *buckets.entry(spheres::reduce_coords(v, modulus)).or_default() += 1;
    }
    buckets.values().map(|k| k * (k - 1)).sum()
}

pub fn basic_lemma_census(d: i64, p: u64, m: u32) -> Result<PairCensus> {
    check_odd_prime(p)?;
    if d < 1 {
        return Err(Error::Precondition(format!("norm must be positive, got {d}")));
    }
    if d.rem_euclid(p as i64) == 0 {
        return Err(Error::PrimeDividesNorm { p, d });
    }
    let modulus = prime_power(p, m)? as i64;
    let set = spheres::enumerate_primitive_points(d);
    let points = set.points();

    let mut buckets: HashMap<[i64; 3], Vec<LatticePoint3>> = HashMap::new();
    for v in points {
        buckets
            .entry(spheres::reduce_coords(v, modulus))
            .or_default()
            .push(*v);
    }
    let mut middle_coefficients = BTreeMap::new();
    let mut ordered_pairs = 0u64;
    for bucket in buckets.values() {
        for (i, w1) in bucket.iter().enumerate() {
            for (j, w2) in bucket.iter().enumerate() {
                if i != j {
                    ordered_pairs += 1;
                    *middle_coefficients.entry(2 * w1.dot(w2)).or_default() += 1;
                }
            }
        }
    }

    // Burnside: orbits = (1/|G|) Σ_g |pairs fixed by g|; a pair is fixed
    // when both points are.
    let group = rotation_group();
    let mut fixed_total = ordered_pairs;
    for g in group.iter().filter(|g| !g.is_identity()) {
        let fixed: Vec<LatticePoint3> = points.iter().filter(|v| v.rotate(g) == **v).copied().collect();
        if fixed.len() > 1 {
            fixed_total += congruent_pairs(&fixed, modulus);
        }
    }
    debug_assert_eq!(fixed_total % group.len() as u64, 0);

    Ok(PairCensus {
        d,
        p,
        m,
        ordered_pairs,
        classes: fixed_total / group.len() as u64,
        middle_coefficients,
    })
}
