//! Exact arithmetic over the two-element field for time-graphs.
//!
//! A time-graph of order `n` is a set of edges `(i, j, t)` of the complete
//! layered graph whose vertex `(i, t)` sits in layer `t`. Permutations of
//! `1..=n` are paths through the layers, and their edge and edge-pair
//! indicator vectors span the spaces `H^n` and `H_P^n` studied here.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation. File formats, reports and the command line live in the
//! `hamtg` crate.
//!
//! Modules, bottom up:
//!
//! - [`gf2`]: bit vectors and incremental echelon bases over GF(2).
//! - [`timegraph`]: edges, permutations, time-graphs, graphs, the HAMP
//!   reduction and the brute-force oracles.
//! - [`permvec`]: indicator vectors, the diagonal and row maps, value,
//!   cycles and support.
//! - [`canonical`]: layered canonical bases and the closed-cycle
//!   decomposition.
//! - [`liftbasis`]: recursive construction of a basis of `H_P^n` made of
//!   pair indicators.
//! - [`solver`]: the linear-system decision procedure for Hamiltonian paths.
//! - [`lab`]: supported subspaces, conjecture checks and cross-validation.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod error;
pub mod gf2;
pub mod lab;
pub mod liftbasis;
pub mod permvec;
pub mod solver;
pub mod timegraph;

pub use error::{Error, Result};
