//! The B_N functional: value layout, coefficients, joint click probabilities.
//!
//! Bob's N² binary measurements are organised into sets `M_0 … M_{N−1}`.
//! Row `v` of set `M_j` holds `|m_{v,(v+j) mod N}⟩` and carries the value `v`.
//! A Bob measurement is therefore identified by a [`BobSlot`] `(v, j)`.
//!
//! For Alice setting `A` with outcome `u`, Bob's correlated value is `v = u`
//! in every set. For `A'` the maximally entangled state pairs Alice's `a'_u`
//! with Bob's `a'_{−u}`, whose correct identification in set `M_j` is
//! `m_{−u−j, −u}`, so the correlated value is `v = (−u−j) mod N`. Relative to
//! Bob's partner label `b = −u` this is the `b + N − j` offset of the
//! textbook notation; see [`partner_form_value`].
//!
//! Only click outcomes carry coefficients: `+1` when correlated, `−1`
//! otherwise.

use serde::Serialize;

use crate::bases::{BasisPair, IntermediateFamily};
use crate::check_dim;
use crate::error::{BellError, Result};
use crate::linalg::{projector, tensor_product, DensityMatrix, Ket, Operator, C64};
use nalgebra::DMatrix;

/// Alice's measurement choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Setting {
    /// Computational basis.
    A,
    /// Fourier basis.
    APrime,
}

impl Setting {
    pub const ALL: [Setting; 2] = [Setting::A, Setting::APrime];

    pub fn index(self) -> usize {
        match self {
            Setting::A => 0,
            Setting::APrime => 1,
        }
    }
}

/// Bob's binary measurement, addressed by value `v` and set `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BobSlot {
    pub value: usize,
    pub set: usize,
}

/// Which intermediate state sits in each `(value, set)` slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueLayout {
    dim: usize,
}

impl ValueLayout {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Intermediate-state indices `(i, k)` of slot `(v, j)`: `(v, (v + j) mod N)`.
    pub fn state_of(&self, slot: BobSlot) -> (usize, usize) {
        (slot.value, (slot.value + slot.set) % self.dim)
    }

    /// Inverse of [`ValueLayout::state_of`].
    pub fn slot_of(&self, i: usize, k: usize) -> BobSlot {
        BobSlot {
            value: i,
            set: (k + self.dim - i) % self.dim,
        }
    }

    /// Flat index `v·N + j`.
    pub fn slot_index(&self, slot: BobSlot) -> usize {
        slot.value * self.dim + slot.set
    }

    pub fn slot_at(&self, index: usize) -> BobSlot {
        BobSlot {
            value: index / self.dim,
            set: index % self.dim,
        }
    }

    pub fn slots(&self) -> impl Iterator<Item = BobSlot> + '_ {
        (0..self.dim * self.dim).map(move |s| self.slot_at(s))
    }
}

pub fn build_layout(n: usize) -> Result<ValueLayout> {
    check_dim(n)?;
    Ok(ValueLayout { dim: n })
}

/// The value Bob must report in set `j` to be correlated with Alice.
pub fn correlated_value(setting: Setting, alice_outcome: usize, set: usize, n: usize) -> usize {
    match setting {
        Setting::A => alice_outcome,
        Setting::APrime => (2 * n - alice_outcome - set) % n,
    }
}

/// Correlated value expressed through Bob's conditional Fourier label
/// `partner` instead of Alice's raw outcome: `(partner + N − j) mod N`.
pub fn partner_form_value(partner: usize, set: usize, n: usize) -> usize {
    (partner + n - set) % n
}

/// Fourier label of Bob's conditional state when Alice finds `a'_u`.
pub fn fourier_partner(alice_outcome: usize, n: usize) -> usize {
    (n - alice_outcome) % n
}

/// Signed coefficients `c[x][u][(v, j)] ∈ {+1, −1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellFunctional {
    dim: usize,
    coeffs: Vec<i8>,
}

fn table_index(n: usize, setting: Setting, u: usize, slot: usize) -> usize {
    (setting.index() * n + u) * n * n + slot
}

impl BellFunctional {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, setting: Setting, alice_outcome: usize, slot: BobSlot) -> i8 {
        let n = self.dim;
        self.coeffs[table_index(n, setting, alice_outcome, slot.value * n + slot.set)]
    }

    /// Coefficients for one Alice outcome, indexed by flat slot.
    pub fn row(&self, setting: Setting, alice_outcome: usize) -> &[i8] {
        let n = self.dim;
        let start = table_index(n, setting, alice_outcome, 0);
        &self.coeffs[start..start + n * n]
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }
}

pub fn build_functional(n: usize) -> Result<BellFunctional> {
    check_dim(n)?;
    let mut coeffs = vec![-1i8; 2 * n * n * n];
    for setting in Setting::ALL {
        for u in 0..n {
            for j in 0..n {
                let v = correlated_value(setting, u, j, n);
                coeffs[table_index(n, setting, u, v * n + j)] = 1;
            }
        }
    }
    Ok(BellFunctional { dim: n, coeffs })
}

/// Joint click probabilities `p[x][u][(v, j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointClickTable {
    dim: usize,
    probs: Vec<f64>,
}

const TABLE_ENTRY_SLACK: f64 = 1e-12;
const TABLE_MARGINAL_SLACK: f64 = 1e-9;

impl JointClickTable {
    /// Validates a table laid out as `[x][u][v·N + j]`.
    pub fn from_probabilities(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        let expected = 2 * n * n * n;
        if probs.len() != expected {
            return Err(BellError::WrongLength {
                expected,
                found: probs.len(),
            });
        }
        for (idx, p) in probs.iter().enumerate() {
            if !p.is_finite() || *p < -TABLE_ENTRY_SLACK || *p > 1.0 + TABLE_ENTRY_SLACK {
                return Err(BellError::NonFinite(idx));
            }
        }
        let table = Self { dim: n, probs };
        for setting in Setting::ALL {
            for slot in 0..n * n {
                let total: f64 = (0..n)
                    .map(|u| table.probs[table_index(n, setting, u, slot)])
                    .sum();
                if total > 1.0 + TABLE_MARGINAL_SLACK {
                    return Err(BellError::BadTrace(total - 1.0));
                }
            }
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, setting: Setting, alice_outcome: usize, slot: BobSlot) -> f64 {
        let n = self.dim;
        self.probs[table_index(n, setting, alice_outcome, slot.value * n + slot.set)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }
}

/// Alice's projector ket for `(setting, outcome)`.
pub fn alice_state(pair: &BasisPair, setting: Setting, outcome: usize) -> &Ket {
    match setting {
        Setting::A => pair.a(outcome),
        Setting::APrime => pair.a_prime(outcome),
    }
}

/// Unnormalized conditional state of Bob, `(⟨a| ⊗ I) ρ (|a⟩ ⊗ I)`.
/// Its trace is the probability that Alice finds `|a⟩`.
pub fn conditional_bob_operator(rho: &DensityMatrix, alice: &Ket) -> Result<Operator> {
    let n = alice.dim();
    if rho.dim() != n * n {
        return Err(BellError::DimensionMismatch {
            expected: n * n,
            found: rho.dim(),
        });
    }
    let r = rho.as_operator().as_matrix();
    let mut out = DMatrix::<C64>::zeros(n, n);
    for b in 0..n {
        for b2 in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                let ca = alice.amplitude(a).conj();
                if ca == C64::new(0.0, 0.0) {
                    continue;
                }
                for a2 in 0..n {
                    acc += ca * r[(a * n + b, a2 * n + b2)] * alice.amplitude(a2);
                }
            }
            out[(b, b2)] = acc;
        }
    }
    Ok(Operator::from_matrix(out))
}

/// Born-rule probabilities `Tr(ρ · (P^x_u ⊗ |m⟩⟨m|))` for every term.
pub fn joint_click_table(rho: &DensityMatrix, layout: &ValueLayout) -> Result<JointClickTable> {
    let n = layout.dim();
    if rho.dim() != n * n {
        return Err(BellError::DimensionMismatch {
            expected: n * n,
            found: rho.dim(),
        });
    }
    let pair = BasisPair::new(n)?;
    let family = IntermediateFamily::new(n)?;
    let mut probs = vec![0.0; 2 * n * n * n];
    for setting in Setting::ALL {
        for u in 0..n {
            let bob = conditional_bob_operator(rho, alice_state(&pair, setting, u))?;
            for slot in layout.slots() {
                let (i, k) = layout.state_of(slot);
                let p = bob.sandwich(family.state(i, k))?.re;
                probs[table_index(n, setting, u, layout.slot_index(slot))] = p;
            }
        }
    }
    JointClickTable::from_probabilities(n, probs)
}

/// `Σ c · p` over all `2N·N²` terms.
pub fn evaluate(functional: &BellFunctional, table: &JointClickTable) -> Result<f64> {
    if functional.dim != table.dim {
        return Err(BellError::DimensionMismatch {
            expected: functional.dim,
            found: table.dim,
        });
    }
    Ok(functional
        .coeffs
        .iter()
        .zip(&table.probs)
        .map(|(&c, &p)| f64::from(c) * p)
        .sum())
}

/// B_N of a two-quNit state.
pub fn quantum_value(rho: &DensityMatrix, n: usize) -> Result<f64> {
    let layout = build_layout(n)?;
    let functional = build_functional(n)?;
    evaluate(&functional, &joint_click_table(rho, &layout)?)
}

/// `(1/√N) Σ_k |a_k⟩ ⊗ |a_k⟩`.
pub fn max_entangled_state(n: usize) -> Result<Ket> {
    check_dim(n)?;
    let amp = 1.0 / (n as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); n * n];
    for k in 0..n {
        amps[k * n + k] = C64::new(amp, 0.0);
    }
    Ket::new(amps)
}

/// `Σ c[x][u][(v,j)] · P^x_u ⊗ |m⟩⟨m|`, the operator whose expectation is B_N.
pub fn bell_operator(n: usize) -> Result<Operator> {
    let layout = build_layout(n)?;
    let functional = build_functional(n)?;
    let pair = BasisPair::new(n)?;
    let family = IntermediateFamily::new(n)?;
    let bob_projectors: Vec<Operator> = layout
        .slots()
        .map(|slot| {
            let (i, k) = layout.state_of(slot);
            projector(family.state(i, k))
        })
        .collect::<Result<_>>()?;
    let mut total = Operator::zeros(n * n);
    for setting in Setting::ALL {
        for u in 0..n {
            let mut bob = Operator::zeros(n);
            for (c, q) in functional.row(setting, u).iter().zip(&bob_projectors) {
                bob.add_scaled_in_place(f64::from(*c), q);
            }
            let alice = projector(alice_state(&pair, setting, u))?;
            total.add_scaled_in_place(1.0, &tensor_product(&alice, &bob));
        }
    }
    Ok(total)
}

/// Correlated and anti-correlated probability mass of one
/// (Alice setting, Bob set) combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockSummary {
    pub setting: Setting,
    pub set: usize,
    pub correlated: f64,
    pub anticorrelated: f64,
}

impl BlockSummary {
    pub fn contribution(&self) -> f64 {
        self.correlated - self.anticorrelated
    }
}

/// The `2N` block sums whose differences add up to B_N.
pub fn block_summaries(
    functional: &BellFunctional,
    table: &JointClickTable,
) -> Result<Vec<BlockSummary>> {
    let n = functional.dim;
    if table.dim != n {
        return Err(BellError::DimensionMismatch {
            expected: n,
            found: table.dim,
        });
    }
    let mut out = Vec::with_capacity(2 * n);
    for setting in Setting::ALL {
        for set in 0..n {
            let mut correlated = 0.0;
            let mut anticorrelated = 0.0;
            for u in 0..n {
                for value in 0..n {
                    let slot = BobSlot { value, set };
                    let p = table.get(setting, u, slot);
                    if functional.coefficient(setting, u, slot) > 0 {
                        correlated += p;
                    } else {
                        anticorrelated += p;
                    }
                }
            }
            out.push(BlockSummary {
                setting,
                set,
                correlated,
                anticorrelated,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::correct_identification_probability;
    use crate::linalg::{expectation, random_density_matrix, schmidt_spectrum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn slot(value: usize, set: usize) -> BobSlot {
        BobSlot { value, set }
    }

    #[test]
    fn layout_matches_tables() {
        let l3 = build_layout(3).unwrap();
        assert_eq!(l3.state_of(slot(2, 1)), (2, 0));
        assert_eq!(l3.state_of(slot(1, 2)), (1, 0));
        assert_eq!(l3.state_of(slot(1, 0)), (1, 1));
        assert_eq!(l3.state_of(slot(2, 0)), (2, 2));
        let l4 = build_layout(4).unwrap();
        assert_eq!(l4.state_of(slot(3, 1)), (3, 0));
        assert!(build_layout(1).is_err());
    }

    #[test]
    fn layout_is_a_bijection() {
        for n in 2..=8 {
            let layout = build_layout(n).unwrap();
            let mut seen = vec![false; n * n];
            for s in layout.slots() {
                let (i, k) = layout.state_of(s);
                assert!(!seen[i * n + k]);
                seen[i * n + k] = true;
                assert_eq!(layout.slot_of(i, k), s);
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn functional_shape() {
        for n in 2..=7 {
            let f = build_functional(n).unwrap();
            assert_eq!(f.term_count(), 2 * n * n * n);
            for setting in Setting::ALL {
                for u in 0..n {
                    for j in 0..n {
                        let plus = (0..n)
                            .filter(|&v| f.coefficient(setting, u, slot(v, j)) == 1)
                            .count();
                        assert_eq!(plus, 1);
                        let block: i32 = (0..n)
                            .map(|v| i32::from(f.coefficient(setting, u, slot(v, j))))
                            .sum();
                        assert_eq!(block, 2 - n as i32);
                    }
                }
            }
        }
    }

    #[test]
    fn fourier_matching_examples() {
        let f = build_functional(3).unwrap();
        let layout = build_layout(3).unwrap();
        assert_eq!(f.coefficient(Setting::APrime, 0, slot(2, 1)), 1);
        assert_eq!(layout.state_of(slot(2, 1)), (2, 0));
        assert_eq!(f.coefficient(Setting::APrime, 1, slot(1, 1)), 1);
        assert_eq!(layout.state_of(slot(1, 1)), (1, 2));
        let f2 = build_functional(2).unwrap();
        for setting in Setting::ALL {
            for u in 0..2 {
                for j in 0..2 {
                    let mut cs: Vec<i8> = (0..2)
                        .map(|v| f2.coefficient(setting, u, slot(v, j)))
                        .collect();
                    cs.sort();
                    assert_eq!(cs, vec![-1, 1]);
                }
            }
        }
    }

    #[test]
    fn raw_and_partner_forms_agree() {
        // Set M_1 for qutrits pairs m_20 with a'_0, m_01 with a'_1, m_12 with a'_2,
        // where a'_b labels Bob's conditional state.
        let layout = build_layout(3).unwrap();
        for (bob_label, expected_state) in [(0, (2, 0)), (1, (0, 1)), (2, (1, 2))] {
            let v = partner_form_value(bob_label, 1, 3);
            assert_eq!(layout.state_of(slot(v, 1)), expected_state);
            let alice = fourier_partner(bob_label, 3);
            assert_eq!(correlated_value(Setting::APrime, alice, 1, 3), v);
        }
        for n in 2..=9 {
            for u in 0..n {
                for j in 0..n {
                    assert_eq!(
                        correlated_value(Setting::APrime, u, j, n),
                        partner_form_value(fourier_partner(u, n), j, n)
                    );
                }
            }
        }
    }

    #[test]
    fn max_entangled_fourier_expansion() {
        let n = 3;
        let psi = max_entangled_state(n).unwrap();
        let pair = BasisPair::new(n).unwrap();
        let s = schmidt_spectrum(&psi, n).unwrap();
        for x in s {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
        let coeff = |l: usize, r: usize| pair.a_prime(l).tensor(pair.a_prime(r)).inner(&psi);
        assert!((coeff(1, 2) - C64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(coeff(1, 1).norm() < 1e-12);
        for l in 0..n {
            assert!((coeff(l, fourier_partner(l, n)).norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn click_table_entries() {
        let s3 = 3f64.sqrt();
        let rho = DensityMatrix::pure(&max_entangled_state(3).unwrap()).unwrap();
        let t = joint_click_table(&rho, &build_layout(3).unwrap()).unwrap();
        let want = (0.5 + 0.5 / s3) / 3.0;
        assert!((t.get(Setting::A, 0, slot(0, 0)) - want).abs() < 1e-12);
        assert!((t.get(Setting::APrime, 0, slot(2, 1)) - want).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(9);
        let t = joint_click_table(&mixed, &build_layout(3).unwrap()).unwrap();
        assert!(t.as_slice().iter().all(|p| (p - 1.0 / 9.0).abs() < 1e-12));
    }

    #[test]
    fn click_table_matches_kronecker_born_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 3;
        let rho = random_density_matrix(n * n, &mut rng);
        let layout = build_layout(n).unwrap();
        let t = joint_click_table(&rho, &layout).unwrap();
        let pair = BasisPair::new(n).unwrap();
        let fam = IntermediateFamily::new(n).unwrap();
        for setting in Setting::ALL {
            for u in 0..n {
                for s in layout.slots() {
                    let (i, k) = layout.state_of(s);
                    let joint = tensor_product(
                        &projector(alice_state(&pair, setting, u)).unwrap(),
                        &projector(fam.state(i, k)).unwrap(),
                    );
                    assert!(
                        (expectation(&rho, &joint).unwrap() - t.get(setting, u, s)).abs() < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn table_rejects_bad_input() {
        assert!(JointClickTable::from_probabilities(2, vec![0.0; 3]).is_err());
        assert!(JointClickTable::from_probabilities(2, vec![1.5; 16]).is_err());
        // four Alice outcomes summing past 1 for a fixed Bob slot
        assert!(JointClickTable::from_probabilities(2, vec![0.6; 16]).is_err());
        assert!(joint_click_table(
            &DensityMatrix::maximally_mixed(4),
            &build_layout(3).unwrap()
        )
        .is_err());
    }

    #[test]
    fn quantum_values() {
        let s3 = 3f64.sqrt();
        let value = |rho: &DensityMatrix, n| quantum_value(rho, n).unwrap();
        let psi3 = DensityMatrix::pure(&max_entangled_state(3).unwrap()).unwrap();
        assert!((value(&psi3, 3) - 2.0 * s3).abs() < 1e-12);
        assert!((value(&psi3, 3) - 3.4641).abs() < 1e-4);
        assert!((value(&DensityMatrix::maximally_mixed(9), 3) + 2.0).abs() < 1e-12);
        let psi2 = DensityMatrix::pure(&max_entangled_state(2).unwrap()).unwrap();
        assert!((value(&psi2, 2) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let psi5 = DensityMatrix::pure(&max_entangled_state(5).unwrap()).unwrap();
        assert!((value(&psi5, 5) - 2.0 * 5f64.sqrt()).abs() < 1e-12);

        let a0 = Ket::basis(3, 0);
        let product = DensityMatrix::pure(&a0.tensor(&a0)).unwrap();
        assert!(value(&product, 3) <= 2.0 + 1e-9);

        let pair = BasisPair::new(3).unwrap();
        let diag: Vec<Ket> = (0..3).map(|k| pair.a(k).tensor(pair.a(k))).collect();
        let sep = DensityMatrix::uniform_mixture(&diag).unwrap();
        assert!((value(&sep, 3) - (s3 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn bell_operator_hermitian_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 2..=6 {
            let b = bell_operator(n).unwrap();
            assert!(b.hermiticity_defect() < 1e-12);
            for _ in 0..20 {
                let rho = random_density_matrix(n * n, &mut rng);
                let via_table = quantum_value(&rho, n).unwrap();
                let via_operator = expectation(&rho, &b).unwrap();
                assert!((via_table - via_operator).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn every_block_contributes_inverse_sqrt() {
        for n in 2..=8 {
            let rho = DensityMatrix::pure(&max_entangled_state(n).unwrap()).unwrap();
            let f = build_functional(n).unwrap();
            let t = joint_click_table(&rho, &build_layout(n).unwrap()).unwrap();
            let blocks = block_summaries(&f, &t).unwrap();
            assert_eq!(blocks.len(), 2 * n);
            let p = correct_identification_probability(n);
            for b in blocks {
                assert!((b.correlated - p).abs() < 1e-10);
                assert!((b.anticorrelated - (1.0 - p)).abs() < 1e-10);
                assert!((b.contribution() - 1.0 / (n as f64).sqrt()).abs() < 1e-10);
            }
        }
    }
}
