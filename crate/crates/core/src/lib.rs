//! Characterization of two-qubit quantum processes.
//!
//! The crate recovers the sixteen transfer operators of an arbitrary linear
//! process from product-state inputs and local Pauli measurements, scores the
//! process with four gate-quality figures (fidelity, purity, quantum degree and
//! entanglement capability) and simulates a sideband-pulse controlled-phase
//! gate on two trapped ions to feed the pipeline.

pub mod error;
pub mod iontrap;
pub mod linalg;
pub mod metrics;
pub mod random;
pub mod tomography;

pub use error::{Error, Result};
