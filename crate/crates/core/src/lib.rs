//! Classicality detection for generalized coherent states.
//!
//! Pure and mixed states of an irreducible representation of a compact
//! semisimple Lie group are tested for membership in the convex hull of the
//! orbit through the highest-weight vector. The pipeline is:
//!
//! 1. [`repkit`] builds generator matrices for a supported family.
//! 2. [`symdecomp`] builds the quadratic Casimir on the symmetric square and
//!    splits it into isotypic projectors.
//! 3. [`detector`] extracts the invariant antiunitary `θ = T∘conj` when the
//!    complement of the top component is a single trivial line, using the
//!    Choi-Jamiołkowski machinery from [`choi`].
//! 4. [`classicality`] evaluates the pure-state test, the closed-form convex
//!    roof when `θ` exists, and a Monte Carlo upper bound otherwise.

// Factor boundaries are genuinely lists of ranges, often of length one.
#![allow(clippy::single_range_in_vec_init)]

pub mod choi;
pub mod classicality;
pub mod detector;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod repkit;
pub mod symdecomp;

pub use error::{Error, Result};
pub use exec::Exec;
