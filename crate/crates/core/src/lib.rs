//! Equidistant-letter-sequence (ELS) permutation engine.
//!
//! Texts are treated as immutable symbol sequences and permuted by stepping
//! through them with a skip distance coprime to their length. The crate
//! covers:
//!
//! - [`corpus`]: loading, sectioning and factorizing texts,
//! - [`layout`]: arranging a text on 1-, 2- or 3-dimensional grids and
//!   producing traversal orders,
//! - [`engine`]: linear, rectangular, cubic and recursive permutation plus
//!   exact counting of the parameter space,
//! - [`interlock`]: the topological and directional interlock tests,
//! - [`scoring`]: lexicon, n-gram and entropy scorers with shuffle calibration,
//! - [`search`]: ranked, partitionable, resumable exhaustive search.

pub mod corpus;
pub mod engine;
mod error;
pub mod interlock;
pub mod layout;
pub mod scoring;
pub mod search;

pub use corpus::{Symbol, SymbolText};
pub use error::{Error, Result};
