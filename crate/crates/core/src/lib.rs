//! Pattern-minimal inversion sequences.
//!
//! An inversion sequence `σ` has `σ_i <= i - 1`; a Cayley permutation uses every
//! value in `[0, max]`. Given a pattern `ρ`, the `ρ`-minimal inversion sequences
//! are the minimal Cayley-permutation inversion sequences that contain `ρ`.
//! This crate computes them, checks minimality, and counts the related
//! coloured sequences and increasing trees exactly.
//!
//! Sequences are written compactly with digits `0-9A-Z`, so `0023036761524` or
//! `0101342423786857 56CBA9` without the space.

pub mod containment;
pub mod error;
pub mod extensions;
pub mod generate;
pub mod minimality;
pub mod par;
pub mod seq;
pub mod series;
pub mod trees;

pub use containment::{contains, occurrences, Occurrence};
pub use error::{Error, Result};
pub use generate::{isbt, isbt_table, minimal_set, minimal_set_naive, GenOptions, IsbtTable, MinimalSet};
pub use minimality::{is_minimal_oracle, is_minimal_prop1, MinimalityVerdict, Witness};
pub use par::Execution;
pub use seq::{IntSeq, SeqClassFlags};
