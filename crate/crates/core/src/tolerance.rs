//! Tolerance ladder shared by every module.

/// Algebraic identities (normalization, Hermiticity, trace, sum rules).
pub const ALGEBRAIC: f64 = 1e-10;

/// Eigenvalue and eigenvector residuals.
pub const EIGEN: f64 = 1e-8;

/// Optimizer acceptance.
pub const OPTIMIZER: f64 = 1e-6;

/// Accepted deviation of a ket norm from 1 before it is rejected as input.
pub const NORM_INPUT: f64 = 1e-8;

/// Most negative eigenvalue a density matrix may carry.
pub const PSD_FLOOR: f64 = -1e-9;

/// Imaginary residue of a Born-rule trace that is silently discarded.
pub const IMAG_RESIDUE: f64 = 1e-9;

/// Spectral gap below which the top eigenvalue is treated as degenerate.
pub const DEGENERACY: f64 = 1e-8;
