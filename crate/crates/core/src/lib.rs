//! Phonon-induced decoherence of qubit registers in laterally coupled
//! quantum-dot arrays.
//!
//! Computes collective emission/absorption rates and Lamb-shift matrices from
//! deformation-potential coupling, integrates the resulting Lindblad master
//! equation, and analyses decoherence-free structure of the circular model.

pub mod circular;
pub mod codes;
pub mod device;
pub mod error;
pub mod integrator;
pub mod lindblad;
pub mod linalg;
pub mod operators;
pub mod phonon;
pub mod quadrature;
pub mod units;

pub use device::{DeviceParams, MaterialParams};
pub use error::{Error, Result};
pub use phonon::{CouplingMatrices, MatrixPair};
