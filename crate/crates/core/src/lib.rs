//! Decentralized constraint satisfaction with communication-free learning.
//!
//! The crate is organized around a small CSP evaluator ([`csp`]), the
//! per-variable learning engine ([`cfl`]), problem encoders ([`encoders`]),
//! centralized local-search baselines ([`baseline`]) and a seeded benchmark
//! harness ([`bench`]).

pub mod baseline;
pub mod bench;
pub mod cfl;
pub mod csp;
pub mod encoders;
mod error;
pub mod seed;

pub use error::{Error, Result};
