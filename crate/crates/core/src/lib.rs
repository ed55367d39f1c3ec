//! Simulation toolkit for computation with non-interacting particles.
//!
//! Bosons through linear-optical interferometers (permanents, sampling,
//! bunching laws), fermions through matchgate circuits (Jordan-Wigner
//! rotations), interferometer decomposition and tomography, and statistical
//! tests for validating boson samplers.

pub mod boson;
pub mod error;
pub mod interferometer;
pub mod matchgate;
pub mod numerics;
pub mod tomography;
pub mod validation;

pub use error::{Error, Result};
pub use numerics::{CMatrix, RandomSource, C64};
