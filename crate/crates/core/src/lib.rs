//! Exact finite-size statistics for a qubit walk driven by a noisy channel.
//!
//! Site `k` of the walk carries the state `Φᵏ(ρ₀)`; collective Pauli sums
//! over a block of sites are studied through their exact laws, moments,
//! cumulant generating functions and non-commutative word expectations.

pub mod algebra;
pub mod channel;
pub mod zoo;
pub mod walk;
pub mod cli;
