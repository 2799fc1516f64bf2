//! Local hidden variable bound of B_N.
//!
//! A deterministic strategy fixes Alice's outcome for each basis and a click
//! bit for each of Bob's N² measurements. Every click bit enters exactly two
//! terms, one per Alice setting, so its gain `c[A][α] + c[A'][α']` is one of
//! `+2`, `0`, `−2` and can be maximised independently
//! ([`lhv_bound_greedy`]). [`lhv_bound_bruteforce`] enumerates every strategy
//! instead and serves as the oracle for small N.

use rayon::prelude::*;
use serde::Serialize;

use crate::check_dim;
use crate::error::{BellError, Result};
use crate::functional::{build_functional, BellFunctional, Setting};

/// Largest N enumerated by default (N² · 2^(N²) strategies).
pub const BRUTE_FORCE_MAX_DIM: usize = 4;
/// Largest N enumerated when slow runs are explicitly allowed.
pub const BRUTE_FORCE_SLOW_MAX_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterministicStrategy {
    pub alpha: usize,
    pub alpha_prime: usize,
    /// Indexed by flat Bob slot `v·N + j`.
    pub clicks: Vec<bool>,
}

impl DeterministicStrategy {
    pub fn silent(n: usize, alpha: usize, alpha_prime: usize) -> Self {
        Self {
            alpha,
            alpha_prime,
            clicks: vec![false; n * n],
        }
    }

    /// Click mask as lowercase hex, bit `v·N + j` set when that slot clicks.
    pub fn click_mask_hex(&self) -> String {
        let mut nibbles: Vec<u8> = self
            .clicks
            .chunks(4)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (b, &on)| acc | (u8::from(on) << b))
            })
            .collect();
        while nibbles.len() > 1 && nibbles.last() == Some(&0) {
            nibbles.pop();
        }
        let digits: String = nibbles
            .iter()
            .rev()
            .map(|&d| char::from_digit(u32::from(d), 16).expect("nibble"))
            .collect();
        format!("0x{digits}")
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.alpha >= n || self.alpha_prime >= n {
            return Err(BellError::IndexOutOfRange {
                i: self.alpha,
                j: self.alpha_prime,
                dim: n,
            });
        }
        if self.clicks.len() != n * n {
            return Err(BellError::WrongLength {
                expected: n * n,
                found: self.clicks.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LhvMethod {
    BruteForce,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LhvBound {
    pub bound: i64,
    pub method: LhvMethod,
    pub witness: DeterministicStrategy,
}

/// Per-slot gain of switching that click on, for fixed Alice outcomes.
pub fn click_gains(f: &BellFunctional, alpha: usize, alpha_prime: usize) -> Vec<i64> {
    f.row(Setting::A, alpha)
        .iter()
        .zip(f.row(Setting::APrime, alpha_prime))
        .map(|(&a, &b)| i64::from(a) + i64::from(b))
        .collect()
}

pub fn strategy_value(s: &DeterministicStrategy, f: &BellFunctional) -> Result<i64> {
    s.validate(f.dim())?;
    let a = f.row(Setting::A, s.alpha);
    let b = f.row(Setting::APrime, s.alpha_prime);
    Ok(s.clicks
        .iter()
        .zip(a.iter().zip(b))
        .filter(|(&on, _)| on)
        .map(|(_, (&x, &y))| i64::from(x) + i64::from(y))
        .sum())
}

pub fn lhv_bound_bruteforce(n: usize) -> Result<LhvBound> {
    lhv_bound_bruteforce_with(n, false)
}

/// Exhaustive maximum over all `N² · 2^(N²)` deterministic strategies.
/// `allow_slow` raises the cap from [`BRUTE_FORCE_MAX_DIM`] to
/// [`BRUTE_FORCE_SLOW_MAX_DIM`].
pub fn lhv_bound_bruteforce_with(n: usize, allow_slow: bool) -> Result<LhvBound> {
    let max = if allow_slow {
        BRUTE_FORCE_SLOW_MAX_DIM
    } else {
        BRUTE_FORCE_MAX_DIM
    };
    if !(crate::MIN_DIM..=max).contains(&n) {
        return Err(BellError::BruteForceRange {
            dim: n,
            min: crate::MIN_DIM,
            max,
        });
    }
    let f = build_functional(n)?;
    let bits = n * n;

    let (bound, alpha, alpha_prime, mask) = (0..n * n)
        .into_par_iter()
        .map(|pair| {
            let (alpha, alpha_prime) = (pair / n, pair % n);
            let (value, mask) = scan_masks(&click_gains(&f, alpha, alpha_prime));
            (value, alpha, alpha_prime, mask)
        })
        .reduce(
            || (i64::MIN, usize::MAX, usize::MAX, 0),
            |x, y| {
                // Ties go to the lexicographically first (alpha, alpha').
                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    y
                } else {
                    x
                }
            },
        );

    Ok(LhvBound {
        bound,
        method: LhvMethod::BruteForce,
        witness: DeterministicStrategy {
            alpha,
            alpha_prime,
            clicks: (0..bits).map(|b| mask >> b & 1 == 1).collect(),
        },
    })
}

// Walks masks 0, 1, 2, … updating the value incrementally: going from m to
// m + 1 clears the t trailing ones and sets bit t.
fn scan_masks(gains: &[i64]) -> (i64, u64) {
    let bits = gains.len();
    let mut prefix = vec![0i64; bits + 1];
    for (t, g) in gains.iter().enumerate() {
        prefix[t + 1] = prefix[t] + g;
    }
    let last: u64 = (1u64 << bits) - 1;
    let mut value = 0i64;
    let mut best = (0i64, 0u64);
    let mut mask = 0u64;
    while mask < last {
        let t = mask.trailing_ones() as usize;
        value += gains[t] - prefix[t];
        mask += 1;
        if value > best.0 {
            best = (value, mask);
        }
    }
    best
}

/// Maximum via independent per-slot optimisation; zero-gain slots stay off.
pub fn lhv_bound_greedy(n: usize) -> Result<LhvBound> {
    check_dim(n)?;
    let f = build_functional(n)?;
    let mut best: Option<(i64, DeterministicStrategy)> = None;
    for alpha in 0..n {
        for alpha_prime in 0..n {
            let gains = click_gains(&f, alpha, alpha_prime);
            let value: i64 = gains.iter().map(|&g| g.max(0)).sum();
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((
                    value,
                    DeterministicStrategy {
                        alpha,
                        alpha_prime,
                        clicks: gains.iter().map(|&g| g > 0).collect(),
                    },
                ));
            }
        }
    }
    let (bound, witness) = best.expect("at least one strategy");
    Ok(LhvBound {
        bound,
        method: LhvMethod::Greedy,
        witness,
    })
}
