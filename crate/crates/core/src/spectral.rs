//! Spectral certification of the quantum maximum.
//!
//! For fixed measurements the largest value of B_N over all states is the top
//! eigenvalue of the Bell operator. [`analyze`] reports that eigenvalue, its
//! gap to the next one, and the entanglement of a top eigenvector.

use serde::Serialize;

use crate::error::Result;
use crate::functional::{bell_operator, max_entangled_state};
use crate::linalg::{hermitian_eigensystem, schmidt_spectrum, Ket};
use crate::tolerance;

#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub dim: usize,
    pub max_eigenvalue: f64,
    /// Distance from the top eigenvalue to the second one.
    pub gap: f64,
    pub top_state: Ket,
    /// Squared Schmidt coefficients of `top_state`, descending.
    pub schmidt: Vec<f64>,
    /// Natural-log entanglement entropy of `top_state`.
    pub entropy: f64,
}

impl SpectralReport {
    pub fn is_degenerate(&self) -> bool {
        self.gap <= tolerance::DEGENERACY
    }
}

/// `−Σ s ln s`, skipping zero weights.
pub fn entanglement_entropy(schmidt: &[f64]) -> f64 {
    schmidt
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|&s| -s * s.ln())
        .sum::<f64>()
        .max(0.0)
}

pub fn analyze(n: usize) -> Result<SpectralReport> {
    let op = bell_operator(n)?;
    let eig = hermitian_eigensystem(&op)?;
    let max_eigenvalue = eig.values[0];
    let gap = max_eigenvalue - eig.values[1];
    let top_state = eig.vectors[0].normalized()?;
    let schmidt = schmidt_spectrum(&top_state, n)?;
    let entropy = entanglement_entropy(&schmidt);
    Ok(SpectralReport {
        dim: n,
        max_eigenvalue,
        gap,
        top_state,
        schmidt,
        entropy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityCheck {
    /// `⟨ψ|B|ψ⟩` for the maximally entangled state.
    pub achieved: f64,
    pub max_eigenvalue: f64,
    pub is_optimal: bool,
}

pub fn verify_max_entangled_optimality(n: usize) -> Result<OptimalityCheck> {
    let op = bell_operator(n)?;
    let psi = max_entangled_state(n)?;
    let achieved = op.sandwich(&psi)?.re;
    let max_eigenvalue = hermitian_eigensystem(&op)?.values[0];
    Ok(OptimalityCheck {
        achieved,
        max_eigenvalue,
        is_optimal: (achieved - max_eigenvalue).abs() < tolerance::EIGEN,
    })
}
