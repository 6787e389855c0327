//! Numerical laboratory for generalized n-th order squeezing dynamics.
//!
//! The crate simulates evolution under the order-`n` squeezing generator
//! `H_n = i[(a†)ⁿ − aⁿ]` in truncated Fock spaces, the Kerr-regularized
//! variant `H_n + χ(a†a)²`, and the two-mode quantum-pump model
//! `H = i[b(a†)ⁿ − b†aⁿ]` restricted to its exactly finite invariant chain.
//! On top of the propagators sit the quantitative studies: even/odd
//! truncation-parity divergence, oscillation detection, Kerr convergence,
//! spectrum convergence per parity class, and signal-photon scaling fits.
//!
//! Start from [`models`] for ready-made runs, [`fock`] for the underlying
//! bases and generators, and [`harness`] for the config-driven experiment
//! runner behind the `squeezelab` binary. Each major capability also has a
//! runnable example under `examples/`.

pub mod analysis;
pub mod error;
pub mod fock;
pub mod harness;
pub mod models;
pub mod propagate;
pub mod tridiag;

pub use error::{Error, Result};
pub use fock::{Generator, PumpChainLabels, SectorBasis, StateVector};
pub use propagate::{EvolutionResult, Method, PropagatorConfig};
