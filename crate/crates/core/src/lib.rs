//! Quantum risk analysis on a dense statevector simulator.
//!
//! The crate is organized bottom-up:
//!
//! * [`qsim`] simulates circuits exactly (and under relaxation/cross-talk
//!   noise with Kraus-sampled trajectories).
//! * [`circuits`] builds the circuits used by amplitude estimation:
//!   distribution loading, polynomial objective rotations, the ripple-carry
//!   comparator, the Grover operator, the inverse QFT, and a CNOT resource
//!   estimator.
//! * [`approx`] holds the Taylor machinery behind the objective encoding.
//! * [`ae`] turns evaluation-register measurements into estimates and
//!   confidence intervals.
//! * [`risk`] estimates expectation, variance, VaR and CVaR, with a classical
//!   enumeration oracle and a Monte Carlo baseline.
//! * [`finance`] ingests Treasury rate data and builds the T-bill and
//!   two-asset portfolio models.
//!
//! Basis index `i` always has qubit 0 as its least-significant bit.

pub mod ae;
pub mod approx;
pub mod circuits;
pub mod error;
pub mod finance;
pub mod qsim;
pub mod risk;

pub(crate) mod seed;

pub use error::{Error, Result};
