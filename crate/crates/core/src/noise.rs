//! Robustness of the violation against admixed noise.
//!
//! `ρ(λ) = λ|ψ⟩⟨ψ| + (1 − λ)σ`, with σ either the maximally mixed joint
//! state `I/N²` or the separable mixture `(1/N) Σ_i |a_i a_i⟩⟨a_i a_i|`.
//! B_N is affine in λ, so each family crosses the classical limit 2 exactly
//! once.

use serde::{Deserialize, Serialize};

use crate::bases::computational_basis;
use crate::check_dim;
use crate::error::{BellError, Result};
use crate::functional::{max_entangled_state, quantum_value};
use crate::linalg::{DensityMatrix, Ket};

/// Local hidden variable limit of B_N.
pub const CLASSICAL_LIMIT: f64 = 2.0;

/// Width of the final bisection bracket.
pub const BISECTION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// White noise, `I/N²`.
    Uncolored,
    /// `(1/N) Σ_i |a_i a_i⟩⟨a_i a_i|`.
    ClosestSeparable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFamily {
    kind: NoiseKind,
    dim: usize,
    lambda: f64,
}

impl NoiseFamily {
    pub fn new(kind: NoiseKind, dim: usize, lambda: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(BellError::LambdaOutOfRange(lambda));
        }
        Ok(Self { kind, dim, lambda })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// The noise state σ of a family, independent of λ.
pub fn noise_state(kind: NoiseKind, n: usize) -> Result<DensityMatrix> {
    check_dim(n)?;
    match kind {
        NoiseKind::Uncolored => Ok(DensityMatrix::maximally_mixed(n * n)),
        NoiseKind::ClosestSeparable => {
            let diag: Vec<Ket> = computational_basis(n)?
                .iter()
                .map(|a| a.tensor(a))
                .collect();
            DensityMatrix::uniform_mixture(&diag)
        }
    }
}

pub fn mixed_state(family: &NoiseFamily) -> Result<DensityMatrix> {
    let psi = DensityMatrix::pure(&max_entangled_state(family.dim)?)?;
    DensityMatrix::convex(family.lambda, &psi, &noise_state(family.kind, family.dim)?)
}

/// Closed-form λ at which B_N = 2.
pub fn threshold_closed_form(kind: NoiseKind, n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    let root = nf.sqrt();
    let denom = nf + root - 2.0;
    Ok(match kind {
        NoiseKind::Uncolored => (nf - 1.0) / denom,
        NoiseKind::ClosestSeparable => (nf - root) / denom,
    })
}

/// λ at which B_N = 2, by bisection through the full state → Born rule →
/// functional pipeline.
pub fn threshold_numeric(kind: NoiseKind, n: usize) -> Result<f64> {
    check_dim(n)?;
    let psi = DensityMatrix::pure(&max_entangled_state(n)?)?;
    let sigma = noise_state(kind, n)?;
    let excess = |lambda: f64| -> Result<f64> {
        let rho = DensityMatrix::convex(lambda, &psi, &sigma)?;
        Ok(quantum_value(&rho, n)? - CLASSICAL_LIMIT)
    };

    let at_zero = excess(0.0)?;
    let at_one = excess(1.0)?;
    if !(at_zero < 0.0 && at_one > 0.0) {
        return Err(BellError::NoSignChange {
            at_zero: at_zero + CLASSICAL_LIMIT,
            at_one: at_one + CLASSICAL_LIMIT,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
