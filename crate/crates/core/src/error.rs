// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Precondition failures raised by the library. Every variant corresponds to
/// input outside an operation's domain; none signal internal inconsistency.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("precision must be at least 1")]
    ZeroPrecision,

    #[error("modulus {p}^{k} does not fit in 64 bits")]
    PrecisionTooLarge { p: u64, k: u32 },

    #[error("{p} divides {a}; strip the p-adic valuation first")]
    NotCoprime { a: i64, p: u64 },

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("{0} is not a discriminant (must be 0 or 1 mod 4)")]
    NotDiscriminant(i64),

    #[error("expected a negative discriminant, got {0}")]
    NotNegative(i64),

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("form ({a}, {b}, {c}) is not primitive")]
    NotPrimitive { a: i64, b: i64, c: i64 },

    #[error("discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("ternary form is not positive definite")]
    TernaryNotDefinite,

    #[error("quaternion has zero norm")]
    ZeroQuaternion,

    #[error("imaginary part must be positive, got {0}")]
    NotInUpperHalfPlane(f64),

    #[error("{p} divides {d}")]
    PrimeDividesNorm { p: u64, d: i64 },

    #[error("point ({x}, {y}) is not in the fundamental domain")]
    NotReduced { x: f64, y: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("{0}")]
    Precondition(String),
}
