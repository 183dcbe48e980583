//! Exact combinatorics of string polytopes in type A.
//!
//! The crate computes, for a reduced word of the longest element of the
//! symmetric group S_{n+1}:
//!
//! * the wiring diagram, its chambers and rigorous paths ([`wiring`]),
//! * the string cone, λ-cone and string polytope with exact rational
//!   vertex enumeration ([`polytope`]),
//! * extension/contraction indices and the small-index classification
//!   ([`moves`]),
//! * toric fans, primitive collections, star subdivisions and
//!   basepoint-freeness certificates ([`fan`]),
//! * the Bott-manifold candidate resolution and its verdict
//!   ([`resolution`]),
//! * the Givental–Hori–Vafa disk potential ([`potential`]).
//!
//! Everything is integer or rational arithmetic; there is no floating
//! point anywhere.

pub mod fan;
pub(crate) mod linalg;
pub mod moves;
pub mod polytope;
pub mod potential;
pub mod resolution;
pub mod weyl;
pub mod wiring;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word has length {got}, expected n(n+1)/2 = {want}")]
    WrongLength { got: usize, want: usize },
    #[error("word is not a reduced word of the longest element")]
    NotReduced,
    #[error("letter {0} out of range 1..={1}")]
    LetterOutOfRange(usize, usize),
    #[error("rank {got} exceeds the resource cap {cap}; pass an explicit cap to override")]
    RankCapExceeded { got: usize, cap: usize },
    #[error("extension position {0} out of range 0..={1}")]
    BadPosition(usize, usize),
    #[error("index vector entry {entry} at position {pos} exceeds the bound {bound}")]
    BadBounds { pos: usize, entry: usize, bound: usize },
    #[error("weight vector has length {got}, expected {want}")]
    BadWeightLength { got: usize, want: usize },
    #[error("weight must be regular (all entries positive)")]
    NotRegular,
    #[error("word does not have small indices")]
    NotSmallIndices,
    #[error("no canonical path found for k = {0}")]
    NotFound(usize),
    #[error("two paths share maximal peak t_{0} but neither selection rule applies")]
    TieUnresolvable(usize),
    #[error("leftover path {0} does not match any expected wire expression")]
    UnlabeledLeftover(String),
    #[error("tau is not a cone of the fan")]
    TauNotInFan,
    #[error("a cone containing tau is not smooth")]
    NonSmoothStar,
    #[error("maximal cone {0} is singular")]
    SingularCone(usize),
    #[error("point lies outside the support of the fan")]
    OutsideSupport,
    #[error("row {0} of the H-representation is redundant")]
    RedundantRow(usize),
    #[error("dimension {d} x {m} rows exceeds the vertex-enumeration cap")]
    DimensionCapExceeded { d: usize, m: usize },
    #[error("lattice-point bounding box exceeds the {0} candidate cap")]
    BoxCapExceeded(u64),
    #[error("polytope is not integral")]
    NotIntegral,
    #[error("no formula case applies: delta_n = {dn}, k = {k}, n = {n}")]
    BadCase { dn: char, k: usize, n: usize },
    #[error("vector identity for {0} failed")]
    RelationFailed(String),
    #[error("columns do not define Bott data: {0}")]
    NotBottData(String),
    #[error("polytope is unbounded in direction of row subsystem")]
    Unbounded,
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
