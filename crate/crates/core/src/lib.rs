//! Equational theories of finitely based nil semigroup varieties.
//!
//! The crate mechanizes a small corner of universal algebra: words of the
//! free semigroup and identities between them (`words`, `identities`),
//! bounded congruence closure with total theory summaries, finite model
//! search and deduction sequences (`engine`), the subgroup calculus of
//! permutational identities (`permgroups`), and variety descriptors with
//! finite lattice checks, culminating in a machine-checked witness that
//! modular and cancellable lattice elements differ (`varlattice`).

pub mod error;
pub mod words;
pub mod identities;
pub mod permgroups;
pub mod engine;
pub mod varlattice;

pub use error::{Error, Result};
