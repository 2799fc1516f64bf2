//! Reference computations written directly from the defining formulas with
//! plain arrays, sharing no code path with the library.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use std::f64::consts::TAU;

pub type Vector = Vec<C>;
pub type Matrix = Vec<Vec<C>>;

pub fn fourier(k: usize, n: usize) -> Vector {
    (0..n)
        .map(|pos| C::from_polar(1.0 / (n as f64).sqrt(), TAU * (k * pos) as f64 / n as f64))
        .collect()
}

pub fn unit(k: usize, n: usize) -> Vector {
    let mut v = vec![C::new(0.0, 0.0); n];
    v[k] = C::new(1.0, 0.0);
    v
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn kron(a: &[C], b: &[C]) -> Vector {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Midpoint of |a_i⟩ and |a'_j⟩ with the overlap phase taken numerically.
pub fn midpoint(i: usize, j: usize, n: usize) -> Vector {
    let a = unit(i, n);
    let ap = fourier(j, n);
    let phase = inner(&a, &ap) / inner(&a, &ap).norm();
    let raw: Vector = a.iter().zip(&ap).map(|(x, y)| phase * x + y).collect();
    let norm = inner(&raw, &raw).re.sqrt();
    raw.into_iter().map(|z| z / norm).collect()
}

pub fn max_entangled(n: usize) -> Vector {
    let mut v = vec![C::new(0.0, 0.0); n * n];
    for k in 0..n {
        v[k * n + k] = C::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    v
}

pub fn pure(v: &[C]) -> Matrix {
    v.iter()
        .map(|x| v.iter().map(|y| x * y.conj()).collect())
        .collect()
}

pub fn sandwich(rho: &Matrix, v: &[C]) -> f64 {
    let mut acc = C::new(0.0, 0.0);
    for (r, row) in rho.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            acc += v[r].conj() * x * v[c];
        }
    }
    acc.re
}

/// Alice's ket for setting 0 (computational) or 1 (Fourier).
pub fn alice(setting: usize, u: usize, n: usize) -> Vector {
    if setting == 0 {
        unit(u, n)
    } else {
        fourier(u, n)
    }
}

/// B_N by the textbook sums: for each Alice setting and Bob set M_j, add the
/// click probability of the state correlated with Alice's outcome and
/// subtract every other click probability in that set.
pub fn bell_value(rho: &Matrix, n: usize) -> f64 {
    let mut total = 0.0;
    for setting in 0..2 {
        for j in 0..n {
            for u in 0..n {
                // Bob's correlated partner: a_u, or a'_{N-u} for the Fourier basis.
                let partner = if setting == 0 { u } else { (n - u) % n };
                for v in 0..n {
                    let m = midpoint(v, (v + j) % n, n);
                    let p = sandwich(rho, &kron(&alice(setting, u, n), &m));
                    let correct = if setting == 0 {
                        v == partner
                    } else {
                        (v + j) % n == partner
                    };
                    total += if correct { p } else { -p };
                }
            }
        }
    }
    total
}

pub fn mix(lambda: f64, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| x * lambda + y * (1.0 - lambda))
                .collect()
        })
        .collect()
}

pub fn white(n: usize) -> Matrix {
    let d = n * n;
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    if r == c {
                        C::new(1.0 / d as f64, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn diagonal_separable(n: usize) -> Matrix {
    let d = n * n;
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    if r == c && r / n == r % n {
                        C::new(1.0 / n as f64, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// Exhaustive LHV maximum computed term by term from the correlation rule.
pub fn lhv_exhaustive(n: usize) -> i64 {
    let bits = n * n;
    let mut best = i64::MIN;
    for alpha in 0..n {
        for alpha_prime in 0..n {
            let bob_partner = (n - alpha_prime) % n;
            for mask in 0u64..(1 << bits) {
                let mut value = 0i64;
                for v in 0..n {
                    for j in 0..n {
                        if mask >> (v * n + j) & 1 == 0 {
                            continue;
                        }
                        value += if v == alpha { 1 } else { -1 };
                        value += if (v + j) % n == bob_partner { 1 } else { -1 };
                    }
                }
                best = best.max(value);
            }
        }
    }
    best
}
