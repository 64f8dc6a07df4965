//! Computing with finite idempotent ordered monoids.
//!
//! The carrier of every algebra here is a finite chain `0 < 1 < … < n-1`
//! with a monotone, associative, idempotent product and a unit. The crate
//! provides:
//!
//! - validated multiplication tables and structure maps ([`algebra`]);
//! - the nested-sum correspondence between algebras and four-letter words,
//!   with the embedding order on words ([`word`]);
//! - congruence lattices, quotients, and the congruence extension
//!   property ([`congruence`]);
//! - terms, equations, and the axiom families for the commutative
//!   subvariety lattice ([`term`]);
//! - enumeration, counting, and subvariety membership ([`variety`]);
//! - amalgamation of spans of word embeddings ([`amalgam`]).

pub mod algebra;
pub mod amalgam;
pub mod congruence;
pub mod term;
pub mod variety;
pub mod word;

pub use algebra::{check_map, ElementMap, FinOrdMonoid, ValidationError};
pub use word::{compose, decompose, decompose_peel, word_embeds, word_is_sdi, SumComponent, SumWord};

use thiserror::Error;

/// A search or enumeration refused because its input exceeds a hard cap.
///
/// Caps keep every operation a terminating, exact computation; callers see
/// which bound was hit and with what value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{what} cap exceeded: {requested} > {limit}")]
pub struct CapExceeded {
    pub what: &'static str,
    pub limit: u64,
    pub requested: u64,
}

/// Hard limits for the capped operations.
pub mod caps {
    /// Largest `n^v` (algebra size to the number of variables) an
    /// equation check will enumerate.
    pub const MAX_VALUATIONS: u64 = 100_000_000;
    /// Largest algebra size for brute-force table enumeration.
    pub const MAX_BRUTE_FORCE: usize = 6;
    /// Largest algebra size for the congruence extension check.
    pub const MAX_CEP: usize = 12;
    /// Largest algebra size for congruence-lattice based word analyses.
    pub const MAX_QUOTIENT_WORD: usize = 12;
    /// Largest algebra size for direct interval-partition enumeration of
    /// congruences; bigger algebras use join-closure of principals.
    pub const MAX_CONGRUENCE_ENUM: usize = 20;
    /// Largest word size for word enumeration by size.
    pub const MAX_WORD_ENUM: usize = 14;
    /// Largest word sizes for enumerating all embedding witnesses.
    pub const MAX_EMBED_ENUM: usize = 16;
    /// Largest amalgam size the bounded search will try.
    pub const MAX_SEARCH_AMALGAM: usize = 8;
    /// Largest target-to-the-source-size count of maps the one-sided
    /// search will enumerate per candidate.
    pub const MAX_ONE_SIDED_MAPS: u64 = 10_000_000;
}
