//! Random-matrix laboratory.
//!
//! Seeded samplers for the classical ensembles ([`ensembles`]), spectral
//! decompositions and empirical spectral measures ([`spectra`]), reference
//! limiting laws including the Tracy–Widom distribution ([`laws`]), distances
//! between measures ([`metrics`]) and a reproducible Monte Carlo harness that
//! checks finite-`n` spectra against those laws ([`harness`]).

pub mod ensembles;
pub mod error;
pub mod harness;
pub mod laws;
mod linalg;
pub mod metrics;
pub mod numeric;
pub mod spectra;

pub use error::{Result, RmtError};
pub use num_complex::Complex64;
