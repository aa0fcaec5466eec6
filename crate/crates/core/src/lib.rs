//! Simulation and verification toolkit for qubits encoded in spin qudits.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin`]: kets, operators, density matrices and angular-momentum operators.
//! * [`codes`]: logical codeword pairs and Knill-Laflamme verification.
//! * [`pulses`]: two-level pulses and the encoding/decoding sequences.
//! * [`noise`]: relaxation channels and imperfect-pulse models.
//! * [`protocol`]: the full encode, idle, decode, measure and correct cycle.
//! * [`resources`]: Hilbert-space resource comparisons.

pub mod codes;
pub mod error;
pub mod noise;
pub mod protocol;
pub mod pulses;
pub mod resources;
pub mod spin;

pub use error::{Error, Result};
