//! Validated density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Maximum element-wise deviation from Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("density matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0} instead of 1")]
    BadTrace(Complex64),
    #[error("density matrix has negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("density matrix contains non-finite entries")]
    NonFinite,
}

/// A Hermitian, unit-trace, positive semidefinite complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `entries` against all density-matrix invariants.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, DensityError> {
        check(&entries)?;
        Ok(Self { entries })
    }

    /// Builds a density matrix from a state vector, normalising it first.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self, DensityError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(DensityError::NonFinite);
        }
        let n = amplitudes.len();
        let entries = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / (norm * norm));
        Self::new(entries)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        Self {
            entries: DMatrix::from_diagonal_element(dim, dim, p),
        }
    }

    /// Forces exact Hermiticity and unit trace on a numerically produced
    /// matrix, then validates it.
    pub(crate) fn from_numeric(mut entries: DMatrix<Complex64>) -> Result<Self, DensityError> {
        let herm = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        entries = herm;
        let tr = entries.trace();
        if tr.norm() == 0.0 || !tr.re.is_finite() {
            return Err(DensityError::BadTrace(tr));
        }
        entries /= Complex64::new(tr.re, 0.0);
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Element `⟨i|ρ|j⟩`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.entries[(i, i)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.population(i)).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.entries)
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Reorders basis states: `perm[i]` is the old index of new state `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        let entries = DMatrix::from_fn(n, n, |i, j| self.entries[(perm[i], perm[j])]);
        Self { entries }
    }
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn check(m: &DMatrix<Complex64>) -> Result<(), DensityError> {
    if m.nrows() != m.ncols() {
        return Err(DensityError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(DensityError::NonFinite);
    }
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOL {
        return Err(DensityError::NotHermitian(dev));
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(DensityError::BadTrace(tr));
    }
    let min = eigenvalues(m).first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(DensityError::NotPositive(min));
    }
    Ok(())
}
