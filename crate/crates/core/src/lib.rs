//! Stabilizer-code compiler and verifier.
//!
//! Turns stabilizer generators into encoder and syndrome-measurement
//! circuits, builds single-error lookup tables, routes circuits onto
//! nearest-neighbor grids, and checks every artifact with an exact
//! state-vector simulator.

pub mod circuit;
pub mod codes;
pub mod error;
pub mod f2linalg;
pub mod pauli;
pub mod route;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
