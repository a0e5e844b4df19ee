//! Exact combinatorics of Bott towers.
//!
//! A Bott tower of height `k` is the smooth projective toric variety built
//! as an iterated `P^1`-bundle from an upper-triangular integer matrix with
//! unit diagonal. This crate builds its fan, computes intersection numbers
//! of invariant divisors with invariant curves, decides positivity of line
//! bundles, and manipulates equivariant vector bundles through their
//! Klyachko filtrations. Every closed-form criterion is paired with a
//! brute-force decider so the two can be cross-checked.
//!
//! All arithmetic is exact. Integers that describe the fan and divisors are
//! `i64`; every linear-algebra computation goes through arbitrary-precision
//! rationals.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chern;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod filtration;
pub mod klyachko;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;
pub mod positivity;
pub mod rational;

pub use divisor::{InvariantDivisor, ReducedDivisor};
pub use error::{Error, Result};
pub use fan::{BottMatrix, MaximalCone, Ray, Wall, WallRelation};
pub use filtration::{Filtration, FiltrationBundle};
pub use linalg::Subspace;
pub use rational::Rational;

/// Default upper bound on the number of subspaces a lattice closure may
/// generate before giving up.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;
