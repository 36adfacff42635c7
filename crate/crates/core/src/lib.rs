//! Simulation of XX-coupled qubit chains: protected logical qubits, transistor-like
//! logical couplings, and an adiabatic code-deformation CNOT under colored noise.

pub mod control;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod operators;
pub mod pauli;
pub mod seed;

pub use error::{Error, Result};
