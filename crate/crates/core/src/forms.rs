// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Positive definite binary quadratic forms `ax² + bxy + cy²`.
//!
//! Equivalence is proper (SL₂(ℤ)) equivalence. A form is reduced when
//! `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`; every class
//! of positive definite forms has exactly one reduced member. Non-fundamental
//! discriminants are handled throughout: the class group of discriminant `d`
//! is the set of primitive reduced forms, i.e. the Picard group of the order
//! of discriminant `d`.

use crate::arith;
use crate::surface::HalfPlanePoint;
use crate::{Error, Result};
use num_integer::Integer;
use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

/// The form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// An integer 2×2 matrix `[[α, β], [γ, δ]]` acting by
/// `(x, y) ↦ (αx + βy, γx + δy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transform(pub [[i64; 2]; 2]);

impl Transform {
    pub const IDENTITY: Transform = Transform([[1, 0], [0, 1]]);

    pub fn translation(t: i64) -> Self {
        Transform([[1, t], [0, 1]])
    }

    pub fn inversion() -> Self {
        Transform([[0, -1], [1, 0]])
    }

    pub fn determinant(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn compose(&self, rhs: &Transform) -> Transform {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Transform([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}

impl BinaryForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// The form of leading coefficient `a` and middle coefficient `b` with
    /// the given discriminant, if `c` comes out integral.
    pub fn from_a_b_discriminant(a: i64, b: i64, d: i64) -> Option<Self> {
        let num = b * b - d;
        if a == 0 || num % (4 * a) != 0 {
            return None;
        }
        Some(Self::new(a, b, num / (4 * a)))
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        arith::gcd3(self.a, self.b, self.c) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// The form `f ∘ T`.
    pub fn transform(&self, t: &Transform) -> BinaryForm {
        let [[al, be], [ga, de]] = t.0;
        BinaryForm {
            a: self.evaluate(al, ga),
            b: 2 * self.a * al * be + self.b * (al * de + be * ga) + 2 * self.c * ga * de,
            c: self.evaluate(be, de),
        }
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn inverse(&self) -> BinaryForm {
        BinaryForm::new(self.a, -self.b, self.c)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn is_discriminant(d: i64) -> bool {
    matches!(d.rem_euclid(4), 0 | 1)
}

fn check_definite(f: &BinaryForm) -> Result<()> {
    if f.a <= 0 || f.discriminant() >= 0 {
        return Err(Error::NotPositiveDefinite {
            a: f.a,
            b: f.b,
            c: f.c,
        });
    }
    Ok(())
}

/// Gauss reduction. Returns the reduced form and `T ∈ SL₂(ℤ)` with
/// `f ∘ T` equal to it.
pub fn reduce(f: &BinaryForm) -> Result<(BinaryForm, Transform)> {
    check_definite(f)?;
    let mut g = *f;
    let mut t = Transform::IDENTITY;
    let mut step = |g: &mut BinaryForm, s: Transform| {
        *g = g.transform(&s);
        t = t.compose(&s);
    };
    loop {
        if !(-g.a < g.b && g.b <= g.a) {
            // b + 2at lands in (-a, a]
            let shift = Integer::div_floor(&(g.a - g.b), &(2 * g.a));
            step(&mut g, Transform::translation(shift));
        }
        if g.a > g.c {
            step(&mut g, Transform::inversion());
        } else {
            break;
        }
    }
    if g.a == g.c && g.b < 0 {
        step(&mut g, Transform::inversion());
    }
    debug_assert!(g.is_reduced());
    Ok((g, t))
}

pub fn reduced(f: &BinaryForm) -> Result<BinaryForm> {
    reduce(f).map(|(g, _)| g)
}

fn check_negative_discriminant(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::NotNegative(d));
    }
    if !is_discriminant(d) {
        return Err(Error::NotDiscriminant(d));
    }
    Ok(())
}

/// Primitive reduced forms of discriminant `d`, found by scanning `b ≡ d
/// (mod 2)` with `|b| <= sqrt(|d|/3)` and factoring `(b² - d)/4 = ac`.
fn reduced_forms(d: i64) -> Vec<BinaryForm> {
    let bmax = arith::isqrt(-d / 3);
    let mut out = Vec::new();
    let start = if d.rem_euclid(2) == bmax.rem_euclid(2) {
        -bmax
    } else {
        -bmax + 1
    };
    let mut b = start;
    while b <= bmax {
        let n = (b * b - d) / 4;
        let mut a = b.abs().max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                let boundary = b.abs() == a || a == c;
                if !(boundary && b < 0) && arith::gcd3(a, b, c) == 1 {
                    out.push(BinaryForm::new(a, b, c));
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), Reverse(f.b)));
    out
}

/// Number of primitive reduced forms of discriminant `d`.
pub fn class_number(d: i64) -> Result<usize> {
    check_negative_discriminant(d)?;
    Ok(reduced_forms(d).len())
}

/// The form class group of a negative discriminant.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    discriminant: i64,
    forms: Vec<BinaryForm>,
    index: HashMap<BinaryForm, usize>,
}

impl FormClassGroup {
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// Reduced representatives, sorted by `a`, then `|b|`, positive `b`
    /// first. The principal form comes first.
    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn principal(&self) -> BinaryForm {
        principal_form(self.discriminant)
    }

    pub fn index_of(&self, f: &BinaryForm) -> Option<usize> {
        reduced(f).ok().and_then(|g| self.index.get(&g).copied())
    }

    pub fn compose_indices(&self, i: usize, j: usize) -> usize {
        let f = compose(&self.forms[i], &self.forms[j]).expect("same discriminant");
        self.index[&f]
    }

    /// Full Cayley table, `table[i][j]` the index of `forms[i] ∘ forms[j]`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|i| (0..self.order()).map(|j| self.compose_indices(i, j)).collect())
            .collect()
    }

    /// Classes of order dividing two.
    pub fn two_torsion(&self) -> Vec<BinaryForm> {
        let e = self.principal();
        self.forms
            .iter()
            .filter(|f| compose(f, f).expect("same discriminant") == e)
            .copied()
            .collect()
    }
}

/// The principal form `(1, d mod 2, (d mod 2 - d)/4)`.
pub fn principal_form(d: i64) -> BinaryForm {
    let b = d.rem_euclid(2);
    BinaryForm::new(1, b, (b - d) / 4)
}

pub fn class_group(d: i64) -> Result<FormClassGroup> {
    check_negative_discriminant(d)?;
    let forms = reduced_forms(d);
    let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    Ok(FormClassGroup {
        discriminant: d,
        forms,
        index,
    })
}

/// Dirichlet composition of two primitive forms of equal discriminant,
/// reduced.
///
/// With `e = gcd(a1, a2, (b1 + b2)/2) = u·a1 + v·a2 + w·(b1 + b2)/2`, the
/// composite is `(A, B, (B² - D)/4A)` where `A = a1·a2/e²` and
/// `B = (u·a1·b2 + v·a2·b1 + w·(b1·b2 + D)/2)/e mod 2A`.
pub fn compose(f1: &BinaryForm, f2: &BinaryForm) -> Result<BinaryForm> {
    check_definite(f1)?;
    check_definite(f2)?;
    let d = f1.discriminant();
    if d != f2.discriminant() {
        return Err(Error::DiscriminantMismatch(d, f2.discriminant()));
    }
    for f in [f1, f2] {
        if !f.is_primitive() {
            return Err(Error::NotPrimitive {
                a: f.a,
                b: f.b,
                c: f.c,
            });
        }
    }
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2) = (f2.a as i128, f2.b as i128);
    let dd = d as i128;
    let s = (b1 + b2) / 2;
    let g1 = a1.extended_gcd(&a2);
    let g2 = g1.gcd.extended_gcd(&s);
    let e = g2.gcd;
    let (u, v, w) = (g2.x * g1.x, g2.x * g1.y, g2.y);
    let big_a = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + dd) / 2;
    debug_assert_eq!(num % e, 0);
    let big_b = (num / e).rem_euclid(2 * big_a);
    let big_c = (big_b * big_b - dd) / (4 * big_a);
    debug_assert_eq!(big_b * big_b - 4 * big_a * big_c, dd);
    let composite = BinaryForm::new(
        i64::try_from(big_a).map_err(|_| Error::Precondition("composite overflows".into()))?,
        big_b as i64,
        i64::try_from(big_c).map_err(|_| Error::Precondition("composite overflows".into()))?,
    );
    reduced(&composite)
}

/// Number of classes `f` with `f ∘ f` principal.
pub fn two_torsion_count(d: i64) -> Result<usize> {
    Ok(class_group(d)?.two_torsion().len())
}

/// The CM point `(-b + sqrt(|d|) i)/(2a)`.
pub fn cm_point(f: &BinaryForm) -> Result<HalfPlanePoint> {
    check_definite(f)?;
    if !f.is_primitive() {
        return Err(Error::NotPrimitive {
            a: f.a,
            b: f.b,
            c: f.c,
        });
    }
    Ok(HalfPlanePoint::Cm(*f))
}

/// `-D` when `D ≡ 3 (mod 4)`, otherwise `-4D`.
pub fn discriminant_from_norm(norm: i64) -> Result<i64> {
    if norm < 1 {
        return Err(Error::Precondition(format!(
            "norm must be positive, got {norm}"
        )));
    }
    Ok(if norm % 4 == 3 { -norm } else { -4 * norm })
}
