//! Algorithmic core for experimenting with test elements in free groups and
//! surface groups: exact word calculus and ball enumeration, Stallings
//! subgroup graphs with Schreier machinery, a desk-scale surface word-problem
//! oracle, the Frattini-layer net constructions, and density/census
//! calculators.
//!
//! The crate is `no_std` (with `alloc`); all IO, persistence and the command
//! line live in the companion `testel` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod density;
pub mod stallings;
pub mod surface;
pub mod testel;
pub mod word;

pub use word::{Letter, Word};
