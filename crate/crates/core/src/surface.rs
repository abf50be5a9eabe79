// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! The modular surface SL₂(ℤ)\ℍ: reduction to the standard fundamental
//! domain, heights, and walks on the (p+1)-regular Hecke tree.
//!
//! CM points are carried as their binary forms, so reducing them is integer
//! arithmetic on `(a, b, c)`: translation by `n` sends `b` to `b - 2an` and
//! `z ↦ -1/z` sends `(a, b, c)` to `(c, -b, a)`. Everything else is `f64`.
//!
//! The height of a point is `sqrt(Im z')` for its reduced representative
//! `z'`: the lattice `ℤ + z'ℤ` has shortest vector 1 and covolume `Im z'`.

use crate::arith;
use crate::forms::BinaryForm;
use crate::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Tolerance for identifying two reduced floating points.
pub const POINT_TOLERANCE: f64 = 1e-9;

const UNIT_CIRCLE_TOLERANCE: f64 = 1e-12;
const MAX_REDUCTION_STEPS: usize = 100_000;

/// `(√3/2)^{1/2}`, the smallest height on the fundamental domain.
pub fn height_floor() -> f64 {
    (3f64.sqrt() / 2.0).sqrt()
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfPlanePoint {
    /// The CM point `(-b + sqrt(|d|) i)/(2a)` of a positive definite form.
    Cm(BinaryForm),
    Float { x: f64, y: f64 },
}

/// A generator of SL₂(ℤ) acting on ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// `z ↦ z + n`
    T(i64),
    /// `z ↦ -1/z`
    S,
}

impl HalfPlanePoint {
    pub fn float(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::NotInUpperHalfPlane(y));
        }
        Ok(HalfPlanePoint::Float { x, y })
    }

    pub fn from_form(f: BinaryForm) -> Result<Self> {
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite {
                a: f.a,
                b: f.b,
                c: f.c,
            });
        }
        Ok(HalfPlanePoint::Cm(f))
    }

    pub fn to_float(&self) -> (f64, f64) {
        match *self {
            HalfPlanePoint::Cm(f) => {
                let d = -f.discriminant() as f64;
                let two_a = 2.0 * f.a as f64;
                (-(f.b as f64) / two_a, d.sqrt() / two_a)
            }
            HalfPlanePoint::Float { x, y } => (x, y),
        }
    }

    pub fn re(&self) -> f64 {
        self.to_float().0
    }

    pub fn im(&self) -> f64 {
        self.to_float().1
    }

    fn check(&self) -> Result<()> {
        match *self {
            HalfPlanePoint::Cm(f) if !f.is_positive_definite() => Err(Error::NotPositiveDefinite {
                a: f.a,
                b: f.b,
                c: f.c,
            }),
            HalfPlanePoint::Float { y, .. } if !(y > 0.0) => Err(Error::NotInUpperHalfPlane(y)),
            _ => Ok(()),
        }
    }

    /// Applies a generator. Exact on CM points.
    pub fn apply(&self, m: Move) -> HalfPlanePoint {
        match (*self, m) {
            (HalfPlanePoint::Cm(f), Move::T(n)) => {
                let b = f.b - 2 * f.a * n;
                HalfPlanePoint::Cm(BinaryForm::new(f.a, b, f.c - f.b * n + f.a * n * n))
            }
            (HalfPlanePoint::Cm(f), Move::S) => HalfPlanePoint::Cm(BinaryForm::new(f.c, -f.b, f.a)),
            (HalfPlanePoint::Float { x, y }, Move::T(n)) => HalfPlanePoint::Float {
                x: x + n as f64,
                y,
            },
            (HalfPlanePoint::Float { x, y }, Move::S) => {
                let r2 = x * x + y * y;
                HalfPlanePoint::Float {
                    x: -x / r2,
                    y: y / r2,
                }
            }
        }
    }

    pub fn apply_word(&self, word: &[Move]) -> HalfPlanePoint {
        word.iter().fold(*self, |z, &m| z.apply(m))
    }

    /// Exact reducedness for CM points; for floats, within the boundary
    /// tolerance.
    pub fn is_reduced(&self) -> bool {
        match *self {
            HalfPlanePoint::Cm(f) => f.is_reduced(),
            HalfPlanePoint::Float { x, y } => {
                x.abs() <= 0.5 + POINT_TOLERANCE && x * x + y * y >= 1.0 - POINT_TOLERANCE
            }
        }
    }
}

/// Reduces `z` into `{|Re z| <= 1/2, |z| >= 1}`, preferring `Re z = -1/2` on
/// the vertical edges and `Re z <= 0` on the unit circle. The returned word,
/// applied left to right to `z`, reproduces the reduced point.
pub fn reduce_to_fundamental_domain(z: &HalfPlanePoint) -> Result<(HalfPlanePoint, Vec<Move>)> {
    z.check()?;
    let mut word = Vec::new();
    let mut cur = *z;
    match cur {
        HalfPlanePoint::Cm(_) => loop {
            let HalfPlanePoint::Cm(f) = cur else {
                unreachable!()
            };
            if !(-f.a < f.b && f.b <= f.a) {
                // -b/2a + n lands in [-1/2, 1/2)
                let n = Integer::div_floor(&(f.b + f.a - 1), &(2 * f.a));
                let m = Move::T(n);
                cur = cur.apply(m);
                word.push(m);
            }
            let HalfPlanePoint::Cm(f) = cur else {
                unreachable!()
            };
            if f.a > f.c || (f.a == f.c && f.b < 0) {
                cur = cur.apply(Move::S);
                word.push(Move::S);
                if f.a == f.c {
                    break;
                }
            } else {
                break;
            }
        },
        HalfPlanePoint::Float { .. } => {
            for _ in 0..MAX_REDUCTION_STEPS {
                let (x, y) = cur.to_float();
                let n = (x + 0.5).floor();
                if n != 0.0 {
                    let m = Move::T(-(n as i64));
                    cur = cur.apply(m);
                    word.push(m);
                }
                let (x, _) = cur.to_float();
                let r2 = x * x + y * y;
                if r2 < 1.0 - UNIT_CIRCLE_TOLERANCE {
                    cur = cur.apply(Move::S);
                    word.push(Move::S);
                } else {
                    if (r2 - 1.0).abs() <= UNIT_CIRCLE_TOLERANCE && x > 0.0 {
                        cur = cur.apply(Move::S);
                        word.push(Move::S);
                    }
                    break;
                }
            }
        }
    }
    Ok((cur, word))
}

pub fn reduce_point(z: &HalfPlanePoint) -> Result<HalfPlanePoint> {
    reduce_to_fundamental_domain(z).map(|(r, _)| r)
}

/// `sqrt(Im z')` for the reduced representative `z'`.
pub fn height(z: &HalfPlanePoint) -> Result<f64> {
    Ok(reduce_point(z)?.im().sqrt())
}

/// Exact test of `height(z) >= h` for a CM point and a rational threshold:
/// with `z'` reduced of leading coefficient `a`, `height⁴ = |d|/(4a²)`.
pub fn cm_height_at_least(f: &BinaryForm, h: Ratio<i64>) -> Result<bool> {
    let HalfPlanePoint::Cm(g) = reduce_point(&HalfPlanePoint::from_form(*f)?)? else {
        unreachable!()
    };
    let (num, den) = (*h.numer() as i128, *h.denom() as i128);
    if num <= 0 {
        return Ok(true);
    }
    let d = -(g.discriminant() as i128);
    let a = g.a as i128;
    Ok(d * den.pow(4) >= 4 * a * a * num.pow(4))
}

/// Exact test of `height(z) <= |d|^{1/4}` for a CM point.
pub fn cm_height_within_cusp_bound(f: &BinaryForm) -> Result<bool> {
    let HalfPlanePoint::Cm(g) = reduce_point(&HalfPlanePoint::from_form(*f)?)? else {
        unreachable!()
    };
    // |d|/(4a²) <= |d|  iff  4a² >= 1
    Ok(4 * (g.a as i128) * (g.a as i128) >= 1)
}

/// The p + 1 Hecke neighbours `pz, z/p, (z+1)/p, ..., (z+p-1)/p`,
/// unreduced.
pub fn hecke_neighbors(z: &HalfPlanePoint, p: u64) -> Result<Vec<HalfPlanePoint>> {
    z.check()?;
    if !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let (x, y) = z.to_float();
    let pf = p as f64;
    let mut out = Vec::with_capacity(p as usize + 1);
    out.push(HalfPlanePoint::Float { x: pf * x, y: pf * y });
    for k in 0..p {
        out.push(HalfPlanePoint::Float {
            x: (x + k as f64) / pf,
            y: y / pf,
        });
    }
    Ok(out)
}

/// Whether two reduced points agree up to the boundary identifications of
/// the fundamental domain.
pub fn same_reduced_point(u: &HalfPlanePoint, v: &HalfPlanePoint, tol: f64) -> bool {
    let (x1, y1) = u.to_float();
    let (x2, y2) = v.to_float();
    let scale = y1.max(y2).max(1.0);
    if (y1 - y2).abs() > tol * scale {
        return false;
    }
    let dx = (x1 - x2).abs();
    if dx <= tol * scale || (dx - 1.0).abs() <= tol * scale {
        return true;
    }
    let on_circle = (x1 * x1 + y1 * y1 - 1.0).abs() <= tol;
    on_circle && (x1 + x2).abs() <= tol
}

/// Heights along a walk and whether each lies at or above the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Itinerary {
    pub threshold: f64,
    pub flags: Vec<bool>,
    pub heights: Vec<f64>,
    /// Reduced vertices visited, starting with the reduced start point.
    pub points: Vec<(f64, f64)>,
}

impl Itinerary {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }
}

/// How a walk picks among the non-parent neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborRule {
    /// Uniform choice from a ChaCha stream with this seed.
    Seeded(u64),
    /// Always the neighbour at this index (mod the number of candidates).
    Fixed(usize),
}

fn walk(
    z0: &HalfPlanePoint,
    p: u64,
    steps: usize,
    threshold: f64,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<Itinerary> {
    let mut current = reduce_point(z0)?;
    let mut parent: Option<HalfPlanePoint> = None;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(current.to_float());
    for _ in 0..steps {
        let mut candidates = hecke_neighbors(&current, p)?
            .iter()
            .map(reduce_point)
            .collect::<Result<Vec<_>>>()?;
        if let Some(par) = parent {
            // Exactly one tree neighbour is the parent; other neighbours may
            // land on the same point of the quotient and are kept.
            if let Some(pos) = candidates
                .iter()
                .position(|c| same_reduced_point(c, &par, POINT_TOLERANCE))
            {
                candidates.remove(pos);
            }
        }
        let next = candidates[choose(candidates.len())];
        parent = Some(current);
        current = next;
        points.push(current.to_float());
    }
    let heights: Vec<f64> = points.iter().map(|&(_, y)| y.sqrt()).collect();
    Ok(Itinerary {
        threshold,
        flags: heights.iter().map(|&h| h >= threshold).collect(),
        heights,
        points,
    })
}

/// A non-backtracking walk of `steps` steps on the Hecke tree at `p`,
/// reducing each vertex and recording heights against `threshold`.
pub fn nonbacktracking_walk(
    z0: &HalfPlanePoint,
    p: u64,
    steps: usize,
    seed: u64,
    threshold: f64,
) -> Result<Itinerary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    walk(z0, p, steps, threshold, |n| rng.gen_range(0..n))
}

/// Walk driven by a [`NeighborRule`]; `Seeded` uses the seed as given.
pub fn walk_with_rule(
    z0: &HalfPlanePoint,
    p: u64,
    steps: usize,
    rule: NeighborRule,
    threshold: f64,
) -> Result<Itinerary> {
    match rule {
        NeighborRule::Seeded(seed) => nonbacktracking_walk(z0, p, steps, seed, threshold),
        NeighborRule::Fixed(k) => walk(z0, p, steps, threshold, |n| k % n),
    }
}

/// Number of distinct above/below patterns of length `steps + 1` over the
/// given start points. Under `Seeded(s)`, point `i` walks with seed `s + i`.
pub fn itinerary_patterns(
    points: &[HalfPlanePoint],
    p: u64,
    rule: NeighborRule,
    threshold: f64,
    steps: usize,
) -> Result<usize> {
    let mut patterns = HashSet::new();
    for (i, z) in points.iter().enumerate() {
        let rule = match rule {
            NeighborRule::Seeded(s) => NeighborRule::Seeded(s.wrapping_add(i as u64)),
            fixed => fixed,
        };
        patterns.insert(walk_with_rule(z, p, steps, rule, threshold)?.flags);
    }
    Ok(patterns.len())
}

/// `exp(2 log(p) (log log H + c)/log H · N)`, the growth rate allowed for the
/// number of cusp-visit patterns of length N.
pub fn pattern_count_bound(p: u64, threshold: f64, steps: usize, c: f64) -> f64 {
    let lh = threshold.ln();
    (2.0 * (p as f64).ln() * (lh.ln() + c) / lh * steps as f64).exp()
}
