//! # qunit-bell
//!
//! Exact numerics for a Bell inequality between two N-dimensional quantum
//! systems ("quNits"). Alice chooses between two mutually unbiased von Neumann
//! measurements (the computational basis and its Fourier transform). Bob
//! chooses among N² binary measurements, each the projector onto an
//! intermediate state lying exactly between one state of each of Alice's
//! bases.
//!
//! The crate builds the functional, evaluates it on arbitrary two-quNit
//! states, bounds it over local hidden variable models, locates the noise
//! thresholds at which violation disappears, certifies the quantum maximum
//! spectrally, and simulates finite-shot experiments.
//!
//! | quantity | value |
//! |----------|-------|
//! | local hidden variable bound | 2 for every N |
//! | quantum value, maximally entangled state | 2√N |
//! | white-noise threshold | (N−1)/(N+√N−2) |
//! | separable-noise threshold | (N−√N)/(N+√N−2) |
//!
//! Tensor products always place Alice's space first (slowest index).

#![forbid(unsafe_code)]

pub mod bases;
pub mod error;
pub mod functional;
pub mod lhv;
pub mod linalg;
pub mod montecarlo;
pub mod noise;
pub mod spectral;
pub mod tolerance;

pub use error::{BellError, Result};
pub use linalg::{DensityMatrix, Ket, Operator, C64};

/// Smallest supported local dimension.
pub const MIN_DIM: usize = 2;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n < MIN_DIM {
        Err(BellError::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}
