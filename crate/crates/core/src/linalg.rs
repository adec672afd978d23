//! Small dense helpers for density matrices.

use nalgebra::{DMatrix, Dim, Matrix, RawStorage};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues whose magnitude below zero is within this are treated as zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Default acceptance tolerance for Hermiticity, trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn max_hermitian_defect<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>>(
    m: &Matrix<Complex64, R, C, S>,
) -> f64 {
    let (rows, cols) = m.shape();
    let mut worst = 0.0_f64;
    for i in 0..rows {
        for j in 0..cols {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Checks that `m` is a square Hermitian, unit-trace, positive semidefinite
/// matrix to within `tol`.
pub fn validate_density(m: &CMatrix, tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    if m.nrows() == 0 {
        return Err(Error::NotDensityMatrix("empty matrix".into()));
    }
    let herm = max_hermitian_defect(m);
    if herm > tol {
        return Err(Error::NotDensityMatrix(format!("not Hermitian (defect {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
    }
    let min = hermitian_eigenvalues(m)[0];
    if min < -tol {
        return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// `-Σ x log₂ x` over clamped eigenvalues.
pub fn shannon_bits(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&x| clamp_eigen(x))
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

pub fn clamp_eigen(x: f64) -> f64 {
    if (-EIGEN_CLAMP..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues below the numerical rank threshold are treated as zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cutoff = 64.0 * f64::EPSILON * top * m.nrows() as f64;
    let mut d = CMatrix::zeros(m.nrows(), m.ncols());
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        let v = if v <= cutoff { 0.0 } else { v };
        d[(i, i)] = c(v.sqrt(), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Traces out the first factor of a `da·db` dimensional operator.
pub fn partial_trace_first(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    let mut out = CMatrix::zeros(db, db);
    for a in 0..da {
        for i in 0..db {
            for j in 0..db {
                out[(i, j)] += m[(a * db + i, a * db + j)];
            }
        }
    }
    out
}

/// Traces out the second factor of a `da·db` dimensional operator.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    let mut out = CMatrix::zeros(da, da);
    for i in 0..da {
        for j in 0..da {
            for b in 0..db {
                out[(i, j)] += m[(i * db + b, j * db + b)];
            }
        }
    }
    out
}

/// `|v⟩⟨v|` for a (not necessarily normalised) vector.
pub fn projector(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}
