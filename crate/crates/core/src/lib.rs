//! Collision-model simulation of heat transport between two qubit reservoirs
//! whose ancillas may carry coherence.
//!
//! Two system qubits `S_A`, `S_B` interact through a partial swap, then each
//! collides with a fresh ancilla from its own reservoir. The crate provides
//! the dense linear algebra needed for that protocol ([`qdm`]), the collision
//! map itself ([`collision`]), steady-state and conductance analysis with
//! closed-form references ([`thermo`]), and exact joint-state entropy
//! accounting for short runs ([`entropy`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collision;
pub mod entropy;
pub mod error;
pub mod qdm;
pub mod thermo;

pub use error::{Error, ErrorKind, Result};
