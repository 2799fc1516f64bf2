//! Dense complex linear algebra for Hilbert spaces of dimension up to ~100.
//!
//! [`Ket`], [`Operator`] and [`DensityMatrix`] are thin validated wrappers
//! around `nalgebra` storage. Composite systems use the Kronecker convention
//! with the first factor (Alice) as the slowest-varying index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{BellError, Result};
use crate::tolerance;

pub type C64 = Complex64;

fn check_finite<'a>(values: impl IntoIterator<Item = &'a C64>) -> Result<()> {
    for (idx, z) in values.into_iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(BellError::NonFinite(idx));
        }
    }
    Ok(())
}

/// A state vector. Not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: DVector<C64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(BellError::WrongLength {
                expected: 1,
                found: 0,
            });
        }
        check_finite(&amplitudes)?;
        Ok(Self {
            amps: DVector::from_vec(amplitudes),
        })
    }

    pub(crate) fn from_vector(amps: DVector<C64>) -> Self {
        Self { amps }
    }

    /// Standard basis vector `|k⟩` of a `dim`-dimensional space.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = DVector::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.amps[k]
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|self⟩ ⊗ |other⟩`, with `self` as the slow index.
    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket::from_vector(self.amps.kronecker(&other.amps))
    }

    pub fn normalized(&self) -> Result<Ket> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(BellError::NotNormalized(1.0));
        }
        Ok(Ket::from_vector(self.amps.unscale(norm)))
    }

    pub(crate) fn check_normalized(&self, tol: f64) -> Result<()> {
        let dev = (self.norm_sqr().sqrt() - 1.0).abs();
        if dev > tol {
            Err(BellError::NotNormalized(dev))
        } else {
            Ok(())
        }
    }
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    /// Builds a `dim × dim` operator from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(BellError::WrongLength {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(entries)?;
        Ok(Self {
            mat: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub(crate) fn from_matrix(mat: DMatrix<C64>) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            mat: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.mat.transpose().as_slice().to_vec()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_matrix(self.mat.adjoint())
    }

    /// Largest entrywise deviation `|A_rc − conj(A_cr)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.mat[(r, c)] - self.mat[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Operator {
        Operator::from_matrix(self.mat.scale(factor))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        same_dim(self.dim(), other.dim())?;
        Ok(Operator::from_matrix(&self.mat + &other.mat))
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        same_dim(self.dim(), other.dim())?;
        Ok(Operator::from_matrix(&self.mat * &other.mat))
    }

    /// `A|v⟩`.
    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        same_dim(self.dim(), v.dim())?;
        Ok(Ket::from_vector(&self.mat * v.as_vector()))
    }

    /// `⟨v|A|v⟩`.
    pub fn sandwich(&self, v: &Ket) -> Result<C64> {
        same_dim(self.dim(), v.dim())?;
        Ok(v.as_vector().dotc(&(&self.mat * v.as_vector())))
    }

    pub(crate) fn add_scaled_in_place(&mut self, factor: f64, other: &Operator) {
        self.mat.zip_apply(&other.mat, |a, b| *a += b * factor);
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(BellError::DimensionMismatch { expected, found })
    }
}

/// A physical state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validates `op` against the density-matrix invariants.
    pub fn new(op: Operator) -> Result<Self> {
        check_finite(op.mat.iter())?;
        let herm = op.hermiticity_defect();
        if herm > tolerance::ALGEBRAIC {
            return Err(BellError::NotHermitian(herm));
        }
        let tr = op.trace();
        let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
        if tr_dev > tolerance::ALGEBRAIC {
            return Err(BellError::BadTrace(tr_dev));
        }
        let min_eig = hermitian_eigensystem(&op)?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < tolerance::PSD_FLOOR {
            return Err(BellError::NotPositive(min_eig));
        }
        Ok(Self { op })
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(psi: &Ket) -> Result<Self> {
        Ok(Self {
            op: projector(psi)?,
        })
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: Operator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `λ·a + (1 − λ)·b`. Convex combinations of states stay physical.
    pub fn convex(lambda: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(BellError::LambdaOutOfRange(lambda));
        }
        same_dim(a.dim(), b.dim())?;
        let mat = a.op.mat.scale(lambda) + b.op.mat.scale(1.0 - lambda);
        Ok(Self {
            op: Operator::from_matrix(mat),
        })
    }

    /// Uniform mixture of product basis projectors, `(1/n) Σ_k |v_k⟩⟨v_k|`.
    pub fn uniform_mixture(states: &[Ket]) -> Result<Self> {
        let first = states.first().ok_or(BellError::WrongLength {
            expected: 1,
            found: 0,
        })?;
        let mut acc = Operator::zeros(first.dim());
        for s in states {
            acc.add_scaled_in_place(1.0 / states.len() as f64, &projector(s)?);
        }
        Ok(Self { op: acc })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }
}

/// Kronecker product `a ⊗ b`; `a` occupies the slow index.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    Operator::from_matrix(a.mat.kronecker(&b.mat))
}

/// `|v⟩⟨v|` for a normalized ket.
pub fn projector(v: &Ket) -> Result<Operator> {
    v.check_normalized(tolerance::NORM_INPUT)?;
    Ok(Operator::from_matrix(v.amps.clone() * v.amps.adjoint()))
}

/// Born rule `Tr(ρ·obs)`.
pub fn expectation(rho: &DensityMatrix, obs: &Operator) -> Result<f64> {
    same_dim(rho.dim(), obs.dim())?;
    // Tr(AB) = Σ_rc A_rc B_cr, without forming the product.
    let a = &rho.op.mat;
    let b = &obs.mat;
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    if acc.im.abs() > tolerance::IMAG_RESIDUE {
        return Err(BellError::ImaginaryResidue(acc.im));
    }
    Ok(acc.re)
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Ket>,
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian operator.
pub fn hermitian_eigensystem(op: &Operator) -> Result<Eigensystem> {
    let herm = op.hermiticity_defect();
    if herm > tolerance::ALGEBRAIC {
        return Err(BellError::NotHermitian(herm));
    }
    // Exact Hermitian part; the decomposition reads only one triangle.
    let sym = (&op.mat + op.mat.adjoint()).unscale(2.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| Ket::from_vector(eig.eigenvectors.column(k).into_owned()))
        .collect();
    Ok(Eigensystem { values, vectors })
}

/// Squared Schmidt coefficients of a bipartite pure state, descending.
pub fn schmidt_spectrum(psi: &Ket, local_dim: usize) -> Result<Vec<f64>> {
    if local_dim == 0 || psi.dim() != local_dim * local_dim {
        return Err(BellError::NotBipartite {
            total: psi.dim(),
            local: local_dim,
        });
    }
    psi.check_normalized(tolerance::NORM_INPUT)?;
    let coeffs = DMatrix::from_row_slice(local_dim, local_dim, psi.amplitudes());
    let svd = coeffs.svd(false, false);
    let mut spectrum: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    Ok(spectrum)
}

/// Reduced state of the first factor, `Tr_B |ψ⟩⟨ψ|`.
pub fn reduced_first(psi: &Ket, local_dim: usize) -> Result<Operator> {
    if local_dim == 0 || psi.dim() != local_dim * local_dim {
        return Err(BellError::NotBipartite {
            total: psi.dim(),
            local: local_dim,
        });
    }
    let n = local_dim;
    let mut out = DMatrix::zeros(n, n);
    for a in 0..n {
        for a2 in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..n {
                acc += psi.amplitude(a * n + b) * psi.amplitude(a2 * n + b).conj();
            }
            out[(a, a2)] = acc;
        }
    }
    Ok(Operator::from_matrix(out))
}

/// Haar-distributed pure state.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let amps = DVector::from_iterator(
        dim,
        (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))),
    );
    let norm = amps.norm();
    Ket::from_vector(amps.unscale(norm))
}

/// Full-rank random state `G G† / Tr(G G†)` with Gaussian `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m.unscale_mut(tr);
    // Restore exact Hermiticity lost to rounding.
    let m = (&m + m.adjoint()).unscale(2.0);
    DensityMatrix {
        op: Operator::from_matrix(m),
    }
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    Operator::from_matrix((&g + g.adjoint()).unscale(2.0))
}
