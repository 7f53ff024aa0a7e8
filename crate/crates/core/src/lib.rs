//! Verification toolkit for lift-and-project rank lower bounds on stable set
//! polytopes of the three-layer graph family `H_k` and its symmetric
//! generalizations.
//!
//! The crate is organized around six concerns:
//!
//! * [`graph`] — graph constructions (`H_k`, layer blowups, Hamming-distance
//!   graphs), destruction/deletion, automorphisms and balanced symmetrization;
//! * [`polytope`] — a brute-force stable set polytope oracle for small graphs
//!   (enumeration, validity, exact facet checks);
//! * [`shadow`] — the 2-dimensional shadow of symmetric points, exact shadow
//!   polygons, the certificate parabola and slope functions;
//! * [`cert`] — symmetric certificate matrices `W_k(a,b,c,d)`, the closed-form
//!   positive-semidefiniteness criterion, and recursive membership
//!   verification;
//! * [`rank`] — the slope-iteration machinery producing machine-checked rank
//!   lower bounds, plus the matching upper-bound chain;
//! * [`cg`] — Chvátal–Gomory rank bounds via exact witness points and an
//!   exact-rational averaging/flooring derivation.
//!
//! All verification-relevant arithmetic is exact rational or done with
//! certified enclosures ([`real`]); floating point appears only in the
//! independent eigenvalue oracle and in rendering output.

pub mod cert;
pub mod cg;
pub mod graph;
pub mod polytope;
pub mod rank;
pub mod real;
pub mod repro;
pub mod shadow;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size guard exceeded: {actual} vertices (limit {limit})")]
    SizeGuard { actual: usize, limit: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("undecided at current precision: {0}")]
    Undecided(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
