//! Alice's two mutually unbiased bases and Bob's intermediate states.
//!
//! The computational basis `A = {|a_k⟩}` and its discrete Fourier transform
//! `A' = {|a'_k⟩}` with `⟨a_n|a'_k⟩ = exp(2πi·kn/N)/√N`. For every pair
//! `(i, j)` the intermediate state
//!
//! ```text
//! |m_ij⟩ = (exp(iφ_ij)|a_i⟩ + |a'_j⟩) / √C,   C = 2(1 + 1/√N)
//! ```
//!
//! sits midway between `|a_i⟩` and `|a'_j⟩`, where `φ_ij` is the argument of
//! `⟨a_i|a'_j⟩`. Indices are always `(A-index, A'-index)`.

use std::f64::consts::TAU;

use crate::check_dim;
use crate::error::{BellError, Result};
use crate::linalg::{projector, Ket, Operator, C64};

fn check_index(i: usize, j: usize, n: usize) -> Result<()> {
    if i >= n || j >= n {
        Err(BellError::IndexOutOfRange { i, j, dim: n })
    } else {
        Ok(())
    }
}

pub fn computational_basis(n: usize) -> Result<Vec<Ket>> {
    check_dim(n)?;
    Ok((0..n).map(|k| Ket::basis(n, k)).collect())
}

pub fn fourier_basis(n: usize) -> Result<Vec<Ket>> {
    check_dim(n)?;
    Ok((0..n).map(|k| fourier_state(k, n)).collect())
}

fn fourier_state(k: usize, n: usize) -> Ket {
    let amp = 1.0 / (n as f64).sqrt();
    let amps = (0..n)
        .map(|pos| C64::from_polar(amp, phase_of(k * pos, n)))
        .collect();
    Ket::new(amps).expect("finite amplitudes")
}

// Reducing k·n mod N first keeps the angle in [0, 2π).
fn phase_of(product: usize, n: usize) -> f64 {
    TAU * (product % n) as f64 / n as f64
}

/// `φ_ij`, the argument of `⟨a_i|a'_j⟩`, reduced to `[0, 2π)`.
pub fn overlap_phase(i: usize, j: usize, n: usize) -> Result<f64> {
    check_dim(n)?;
    check_index(i, j, n)?;
    Ok(phase_of(i * j, n))
}

/// `C = 2(1 + 1/√N)`.
pub fn normalization_constant(n: usize) -> f64 {
    2.0 * (1.0 + 1.0 / (n as f64).sqrt())
}

/// Probability that `|m_ij⟩` clicks on `|a_i⟩` (or on `|a'_j⟩`).
pub fn correct_identification_probability(n: usize) -> f64 {
    0.5 + 0.5 / (n as f64).sqrt()
}

/// Probability that `|m_ij⟩` clicks on a specific wrong state `|a_k⟩`, `k ≠ i`.
pub fn error_probability(n: usize) -> f64 {
    (0.5 - 0.5 / (n as f64).sqrt()) / (n as f64 - 1.0)
}

pub fn intermediate_state(i: usize, j: usize, n: usize) -> Result<Ket> {
    check_dim(n)?;
    check_index(i, j, n)?;
    Ok(build_intermediate(i, j, n))
}

fn build_intermediate(i: usize, j: usize, n: usize) -> Ket {
    let scale = 1.0 / normalization_constant(n).sqrt();
    let phase = C64::from_polar(1.0, phase_of(i * j, n));
    let a_prime = fourier_state(j, n);
    let amps = (0..n)
        .map(|pos| {
            let from_a = if pos == i { phase } else { C64::new(0.0, 0.0) };
            (from_a + a_prime.amplitude(pos)) * scale
        })
        .collect();
    Ket::new(amps).expect("finite amplitudes")
}

/// The computational and Fourier bases of one local dimension.
#[derive(Debug, Clone)]
pub struct BasisPair {
    dim: usize,
    a_states: Vec<Ket>,
    a_prime_states: Vec<Ket>,
}

impl BasisPair {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            dim: n,
            a_states: computational_basis(n)?,
            a_prime_states: fourier_basis(n)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self, k: usize) -> &Ket {
        &self.a_states[k]
    }

    pub fn a_prime(&self, k: usize) -> &Ket {
        &self.a_prime_states[k]
    }

    pub fn a_states(&self) -> &[Ket] {
        &self.a_states
    }

    pub fn a_prime_states(&self) -> &[Ket] {
        &self.a_prime_states
    }
}

/// All N² intermediate states with their phases and normalization constant.
#[derive(Debug, Clone)]
pub struct IntermediateFamily {
    dim: usize,
    states: Vec<Ket>,
    phases: Vec<f64>,
    normalization: f64,
}

impl IntermediateFamily {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut states = Vec::with_capacity(n * n);
        let mut phases = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                states.push(build_intermediate(i, j, n));
                phases.push(phase_of(i * j, n));
            }
        }
        Ok(Self {
            dim: n,
            states,
            phases,
            normalization: normalization_constant(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|m_ij⟩`.
    pub fn state(&self, i: usize, j: usize) -> &Ket {
        &self.states[i * self.dim + j]
    }

    pub fn phase(&self, i: usize, j: usize) -> f64 {
        self.phases[i * self.dim + j]
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// States in row-major `(i, j)` order.
    pub fn states(&self) -> &[Ket] {
        &self.states
    }
}

/// Largest entry of `|Σ_ij (1/N)|m_ij⟩⟨m_ij| − I|`.
pub fn povm_defect(family: &IntermediateFamily) -> f64 {
    let n = family.dim();
    let mut sum = Operator::zeros(n);
    for m in family.states() {
        let p = projector(m).expect("family states are normalized");
        sum.add_scaled_in_place(1.0 / n as f64, &p);
    }
    sum.max_abs_diff(&Operator::identity(n))
}
