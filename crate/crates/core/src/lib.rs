//! Quantum and classical local differential privacy: mechanisms, privacy
//! audits, information measures, hypothesis-testing exponents, classical
//! optima and a Taylor-expansion verification harness.

pub mod error;
pub mod exponents;
pub mod frames;
pub mod linalg;
pub mod mechanisms;
pub mod metrics;
pub mod optimal;
pub mod reproduce;
pub mod sampling;
pub mod taylor;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Hermitian, Norms, Spectrum, C64};
