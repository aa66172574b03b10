//! Quantum teleportation over generalized entangled bases.
//!
//! Any four 2×2 complex matrices whose associated two-qubit states are
//! entangled and orthonormal can replace the Bell basis as the shared
//! resource and measurement basis. This crate builds and validates such
//! bases, computes teleportation branches and Bob's corrections, samples
//! measurement outcomes reproducibly, and simulates small gate circuits that
//! prepare the basis states.

#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod reference;
pub mod teleport;

pub use error::{Error, Result};
