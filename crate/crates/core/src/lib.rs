//! Multiprecision verification of multilateral U(n) series identities and
//! their Karlsson-Minton type reductions.
//!
//! The crate is `no_std` with `alloc`; the `std` feature only forwards to
//! dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod identities;
pub mod lattice;
pub mod mparith;
pub mod sampler;

pub use error::{Error, Result};
