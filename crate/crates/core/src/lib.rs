//! Lévy processes on the quantum permutation group S_n⁺: magic unitaries,
//! first cohomology, Schürmann triples, convolution semigroups, the central
//! algebra and Monte Carlo oracles for the classical permutation processes.

pub mod acceptance;
pub mod central;
pub mod cli;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod magic;
pub mod perm;
pub mod random;
pub mod schurmann;
pub mod semigroup;
pub mod stochsim;
pub mod wordalg;

pub use error::{Error, Result};
