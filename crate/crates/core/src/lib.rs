// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Computational laboratory for the arithmetic objects behind Linnik-type
//! equidistribution results: primitive integer points on spheres
//! x² + y² + z² = d, Hurwitz quaternions and their rotation action, positive
//! definite binary quadratic forms and their class groups, CM points on the
//! modular surface, Hecke-tree walks, and the statistics used to watch these
//! sets equidistribute as d grows.
//!
//! All enumeration is exact integer arithmetic. Floating point only appears
//! where a statistic is inherently real-valued (projections to the unit
//! sphere, heights, discrepancies).
//!
//! With the default `parallel` feature, scans over ranges of d fan out over
//! rayon's thread pool. Without it every scan runs sequentially with
//! identical results.

pub mod arith;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod forms;
pub mod hurwitz;
mod par;
pub mod reps;
pub mod spheres;
pub mod surface;

pub use error::{Error, Result};
pub use par::with_jobs;
