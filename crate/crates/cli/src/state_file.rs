//! JSON interchange: state files and the construction document.
//!
//! Complex numbers are `[re, im]` pairs. Matrices are row-major nested
//! arrays. Floats are written in shortest round-trip form, so a parse of a
//! written document reproduces every value bit for bit.

use num_complex::Complex64;
use qunit_bell::bases::{BasisPair, IntermediateFamily};
use qunit_bell::functional::build_layout;
use qunit_bell::{BellError, DensityMatrix, Ket, Operator};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Pair = [f64; 2];

fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn from_pair(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ket,
    Density,
}

/// On-disk description of a two-quNit state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub local_dim: usize,
    pub kind: StateKind,
    pub data: serde_json::Value,
}

impl StateFile {
    pub fn from_ket(local_dim: usize, ket: &Ket) -> Self {
        let data: Vec<Pair> = ket.amplitudes().iter().copied().map(to_pair).collect();
        Self {
            local_dim,
            kind: StateKind::Ket,
            data: serde_json::to_value(data).expect("plain numbers"),
        }
    }

    pub fn from_density(local_dim: usize, rho: &DensityMatrix) -> Self {
        let total = rho.dim();
        let flat = rho.as_operator().to_row_major();
        let rows: Vec<Vec<Pair>> = flat
            .chunks(total)
            .map(|row| row.iter().copied().map(to_pair).collect())
            .collect();
        Self {
            local_dim,
            kind: StateKind::Density,
            data: serde_json::to_value(rows).expect("plain numbers"),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::State(format!("malformed state file: {e}")))
    }

    /// Converts to a validated density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        let n = self.local_dim;
        if n < 2 {
            return Err(CliError::State(format!(
                "local_dim must be at least 2, got {n}"
            )));
        }
        let total = n * n;
        let invalid =
            |e: BellError| CliError::State(format!("invalid {} state: {e}", self.kind_name()));
        match self.kind {
            StateKind::Ket => {
                let pairs: Vec<Pair> = serde_json::from_value(self.data.clone()).map_err(|e| {
                    CliError::State(format!("ket data must be an array of [re, im] pairs: {e}"))
                })?;
                if pairs.len() != total {
                    return Err(CliError::State(format!(
                        "ket data has {} entries, expected local_dim^2 = {total}",
                        pairs.len()
                    )));
                }
                let ket = Ket::new(pairs.iter().map(from_pair).collect()).map_err(invalid)?;
                DensityMatrix::pure(&ket).map_err(invalid)
            }
            StateKind::Density => {
                let rows: Vec<Vec<Pair>> =
                    serde_json::from_value(self.data.clone()).map_err(|e| {
                        CliError::State(format!("density data must be rows of [re, im] pairs: {e}"))
                    })?;
                if rows.len() != total || rows.iter().any(|r| r.len() != total) {
                    return Err(CliError::State(format!(
                        "density data must be {total}x{total} for local_dim {n}"
                    )));
                }
                let flat: Vec<Complex64> = rows.iter().flatten().map(from_pair).collect();
                let op = Operator::from_row_major(total, &flat).map_err(invalid)?;
                DensityMatrix::new(op).map_err(invalid)
            }
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            StateKind::Ket => "ket",
            StateKind::Density => "density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntermediateEntry {
    pub i: usize,
    pub j: usize,
    pub phase: f64,
    pub amplitudes: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueTableEntry {
    pub value: usize,
    pub set: usize,
    /// Intermediate-state indices `[i, j]` held in this slot.
    pub state: [usize; 2],
}

/// Output of the `construct` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionDocument {
    pub dim: usize,
    pub normalization_constant: f64,
    pub computational_basis: Vec<Vec<Pair>>,
    pub fourier_basis: Vec<Vec<Pair>>,
    pub intermediate_states: Vec<IntermediateEntry>,
    pub value_table: Vec<ValueTableEntry>,
}

fn ket_pairs(k: &Ket) -> Vec<Pair> {
    k.amplitudes().iter().copied().map(to_pair).collect()
}

impl ConstructionDocument {
    pub fn build(n: usize) -> Result<Self, BellError> {
        let pair = BasisPair::new(n)?;
        let family = IntermediateFamily::new(n)?;
        let layout = build_layout(n)?;
        let mut intermediate_states = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                intermediate_states.push(IntermediateEntry {
                    i,
                    j,
                    phase: family.phase(i, j),
                    amplitudes: ket_pairs(family.state(i, j)),
                });
            }
        }
        let value_table = layout
            .slots()
            .map(|slot| {
                let (i, k) = layout.state_of(slot);
                ValueTableEntry {
                    value: slot.value,
                    set: slot.set,
                    state: [i, k],
                }
            })
            .collect();
        Ok(Self {
            dim: n,
            normalization_constant: family.normalization(),
            computational_basis: pair.a_states().iter().map(ket_pairs).collect(),
            fourier_basis: pair.a_prime_states().iter().map(ket_pairs).collect(),
            intermediate_states,
            value_table,
        })
    }

    /// Intermediate states as kets, in the document's `(i, j)` order.
    pub fn intermediate_kets(&self) -> Result<Vec<Ket>, BellError> {
        self.intermediate_states
            .iter()
            .map(|e| Ket::new(e.amplitudes.iter().map(from_pair).collect()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ket_file_round_trip() {
        let psi = qunit_bell::functional::max_entangled_state(3).unwrap();
        let file = StateFile::from_ket(3, &psi);
        let text = serde_json::to_string(&file).unwrap();
        let rho = StateFile::parse(&text).unwrap().to_density().unwrap();
        assert_eq!(rho, DensityMatrix::pure(&psi).unwrap());
    }

    #[test]
    fn density_file_round_trip() {
        let rho = DensityMatrix::maximally_mixed(4);
        let text = serde_json::to_string(&StateFile::from_density(2, &rho)).unwrap();
        assert_eq!(StateFile::parse(&text).unwrap().to_density().unwrap(), rho);
    }

    #[test]
    fn rejects_unnormalized_ket_with_magnitude() {
        let text = r#"{"local_dim": 2, "kind": "ket", "data": [[1,0],[1,0],[0,0],[0,0]]}"#;
        let err = StateFile::parse(text)
            .unwrap()
            .to_density()
            .unwrap_err()
            .to_string();
        assert!(err.contains("not normalized"), "{err}");
        assert!(err.contains("4.142e-1"), "{err}");
    }

    #[test]
    fn rejects_wrong_shapes_and_kinds() {
        let short = r#"{"local_dim": 2, "kind": "ket", "data": [[1,0]]}"#;
        assert!(StateFile::parse(short).unwrap().to_density().is_err());
        assert!(StateFile::parse(r#"{"local_dim": 2, "kind": "mixed", "data": []}"#).is_err());
        let non_herm = r#"{"local_dim": 2, "kind": "density", "data": [
            [[0.25,0],[0.1,0],[0,0],[0,0]],
            [[0,0],[0.25,0],[0,0],[0,0]],
            [[0,0],[0,0],[0.25,0],[0,0]],
            [[0,0],[0,0],[0,0],[0.25,0]]]}"#;
        let err = StateFile::parse(non_herm)
            .unwrap()
            .to_density()
            .unwrap_err()
            .to_string();
        assert!(err.contains("not Hermitian"), "{err}");
    }
}
