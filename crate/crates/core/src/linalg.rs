//! Dense complex-matrix primitives.
//!
//! Everything in this crate works on small dense matrices (at most a few
//! dozen rows), so a plain `DMatrix<Complex64>` is the only storage format.
//! Tensor products use the A-major index convention throughout:
//! `(i_a, i_b) -> i_a * dim_b + i_b`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance for accepting a matrix as Hermitian before eigensolving.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below this magnitude count as zero when classifying signs.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Builds a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            found: entries.len(),
        });
    }
    let m = ComplexMatrix::from_row_slice(rows, cols, entries);
    if !is_finite(&m) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    Ok(m)
}

pub fn from_real_diagonal(diag: &[f64]) -> ComplexMatrix {
    let n = diag.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) })
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `m - m†`. Infinite for non-square input.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Squared Hilbert–Schmidt norm `Tr(m† m)`.
pub fn hs_norm_sq(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Real eigenvalues of a Hermitian matrix, sorted non-increasing.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Eigenvalues (non-increasing) and matching unit eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Trace norm: the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// Unitary `exp(i h)` for Hermitian `h`, via its eigendecomposition.
pub fn unitary_from_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let phases = ComplexMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            Complex64::from_polar(1.0, values[i])
        } else {
            c64(0.0, 0.0)
        }
    });
    Ok(&vectors * phases * vectors.adjoint())
}

/// Largest entrywise deviation of `u† u` from the identity.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}
