//! Finite-shot simulation of the B_N experiment.
//!
//! Each of the `2·N²` (Alice setting, Bob measurement) combinations receives
//! the same shot budget. A shot yields Alice's outcome `u` and Bob's click
//! bit, drawn from the exact Born-rule distribution. Counts for one
//! combination are drawn as a multinomial via conditional binomials, which is
//! distributionally identical to tallying independent shots.
//!
//! Every combination draws from its own ChaCha20 stream, selected by the
//! combination index on a generator seeded from the 64-bit plan seed, so
//! results do not depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::bases::BasisPair;
use crate::error::{BellError, Result};
use crate::functional::{
    alice_state, build_functional, build_layout, conditional_bob_operator, evaluate,
    joint_click_table, BobSlot, JointClickTable, Setting,
};
use crate::linalg::DensityMatrix;

pub const GENERATOR: &str = "ChaCha20 (rand_chacha; seed_from_u64, one stream per combination)";

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub dim: usize,
    pub rho: DensityMatrix,
    pub shots_per_combination: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinationCounts {
    pub setting: Setting,
    pub slot: BobSlot,
    /// `click[u]`: shots where Alice found `u` and Bob clicked.
    pub click: Vec<u64>,
    /// `no_click[u]`: shots where Alice found `u` and Bob did not click.
    pub no_click: Vec<u64>,
}

impl CombinationCounts {
    pub fn total(&self) -> u64 {
        self.click.iter().chain(&self.no_click).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub dim: usize,
    pub seed: u64,
    pub generator: &'static str,
    pub shots_per_combination: u64,
    pub counts: Vec<CombinationCounts>,
    pub b_estimate: f64,
    pub std_error: f64,
}

fn sample_multinomial(rng: &mut ChaCha20Rng, shots: u64, probs: &[f64]) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass = 1.0_f64;
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            out[k] = remaining;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let draw = Binomial::new(remaining, q)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        out[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    out
}

pub fn run(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    let n = plan.dim;
    if plan.shots_per_combination == 0 {
        return Err(BellError::ZeroShots);
    }
    let layout = build_layout(n)?;
    if plan.rho.dim() != n * n {
        return Err(BellError::DimensionMismatch {
            expected: n * n,
            found: plan.rho.dim(),
        });
    }
    let functional = build_functional(n)?;
    let exact = joint_click_table(&plan.rho, &layout)?;
    let pair = BasisPair::new(n)?;
    let alice_marginals = Setting::ALL
        .iter()
        .map(|&setting| {
            (0..n)
                .map(|u| {
                    conditional_bob_operator(&plan.rho, alice_state(&pair, setting, u))
                        .map(|bob| bob.trace().re)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let combos: Vec<(Setting, BobSlot)> = Setting::ALL
        .iter()
        .flat_map(|&s| layout.slots().map(move |slot| (s, slot)))
        .collect();

    let shots = plan.shots_per_combination;
    let counts: Vec<CombinationCounts> = combos
        .par_iter()
        .enumerate()
        .map(|(index, &(setting, slot))| {
            // Outcomes ordered (0, click) … (N−1, click), (0, no click) … .
            let mut probs = Vec::with_capacity(2 * n);
            for u in 0..n {
                probs.push(exact.get(setting, u, slot).max(0.0));
            }
            for (u, marginal) in alice_marginals[setting.index()].iter().enumerate() {
                probs.push((marginal - exact.get(setting, u, slot)).max(0.0));
            }
            let total: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= total);

            let mut rng = ChaCha20Rng::seed_from_u64(plan.seed);
            rng.set_stream(index as u64);
            let drawn = sample_multinomial(&mut rng, shots, &probs);
            CombinationCounts {
                setting,
                slot,
                click: drawn[..n].to_vec(),
                no_click: drawn[n..].to_vec(),
            }
        })
        .collect();

    let s = shots as f64;
    let mut freqs = vec![0.0; 2 * n * n * n];
    let mut variance = 0.0;
    for c in &counts {
        let mut mean = 0.0;
        let mut second = 0.0;
        for u in 0..n {
            let f = c.click[u] as f64 / s;
            let coeff = f64::from(functional.coefficient(c.setting, u, c.slot));
            mean += coeff * f;
            second += coeff * coeff * f;
            let idx = (c.setting.index() * n + u) * n * n + layout.slot_index(c.slot);
            freqs[idx] = f;
        }
        variance += (second - mean * mean).max(0.0) / s;
    }
    let table = JointClickTable::from_probabilities(n, freqs)?;
    let b_estimate = evaluate(&functional, &table)?;

    Ok(ExperimentResult {
        dim: n,
        seed: plan.seed,
        generator: GENERATOR,
        shots_per_combination: shots,
        counts,
        b_estimate,
        std_error: variance.sqrt(),
    })
}
