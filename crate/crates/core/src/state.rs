//! Bipartite density matrices and their subsystem operations.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_deviation, hermitian_eigenvalues, tensor, trace, ComplexMatrix};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// One side of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// A certified bipartite state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: (usize, usize),
}

impl DensityMatrix {
    /// Validates `matrix` against the density-matrix invariants.
    pub fn new(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        validate_density_matrix(matrix, dims)
    }

    /// Wraps a matrix already known to be a state (e.g. the output of a CPTP map).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix, dims: (usize, usize)) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.0 * dims.1);
        Self { matrix, dims }
    }

    /// Maximally mixed state `I / (d1 d2)`.
    pub fn maximally_mixed(d1: usize, d2: usize) -> Result<Self> {
        check_dim(d1)?;
        check_dim(d2)?;
        let n = d1 * d2;
        Ok(Self::new_unchecked(
            ComplexMatrix::identity(n, n).unscale(n as f64),
            (d1, d2),
        ))
    }

    /// Product state `a ⊗ b` of two single-system states.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(tensor(a, b), (a.nrows(), b.nrows()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Total Hilbert-space dimension `d1 d2`.
    pub fn dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Conjugates the state by the local unitary `u ⊗ w`.
    pub fn apply_local_unitaries(&self, u: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dims.0 {
            return Err(Error::DimensionMismatch { expected: self.dims.0, found: u.nrows() });
        }
        if w.nrows() != self.dims.1 {
            return Err(Error::DimensionMismatch { expected: self.dims.1, found: w.nrows() });
        }
        let k = tensor(u, w);
        Ok(Self::new_unchecked(&k * &self.matrix * k.adjoint(), self.dims))
    }

    /// Exchanges the roles of A and B.
    pub fn swap_subsystems(&self) -> Self {
        let (d1, d2) = self.dims;
        let m = ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
            let (ib, ia) = (r / d1, r % d1);
            let (jb, ja) = (c / d1, c % d1);
            self.matrix[(ia * d2 + ib, ja * d2 + jb)]
        });
        Self::new_unchecked(m, (d2, d1))
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension { dim: d })
    } else {
        Ok(())
    }
}

/// Measured invariant violations of a candidate density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDiagnostics {
    /// Max entrywise |m - m†|.
    pub hermitian_deviation: f64,
    /// |Tr(m) - 1| (including any imaginary part).
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part, NaN when not computable.
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn hermitian_ok(&self) -> bool {
        self.hermitian_deviation <= HERMITICITY_TOL
    }

    pub fn trace_ok(&self) -> bool {
        self.trace_deviation <= TRACE_TOL
    }

    pub fn psd_ok(&self) -> bool {
        self.min_eigenvalue >= -PSD_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.hermitian_ok() && self.trace_ok() && self.psd_ok()
    }

    /// Amount by which the PSD floor is violated, 0 when satisfied.
    pub fn psd_violation(&self) -> f64 {
        (-self.min_eigenvalue).max(0.0)
    }
}

impl fmt::Display for StateDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.hermitian_ok() {
            parts.push(format!("hermiticity violated by {:.3e}", self.hermitian_deviation));
        }
        if !self.trace_ok() {
            parts.push(format!("trace violated by {:.3e}", self.trace_deviation));
        }
        if !self.psd_ok() {
            parts.push(format!("positivity violated by {:.3e}", self.psd_violation()));
        }
        if parts.is_empty() {
            write!(f, "no violations")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Measures how far `m` is from being a density matrix.
pub fn diagnose(m: &ComplexMatrix) -> StateDiagnostics {
    let herm = hermitian_deviation(m);
    let tr = trace(m);
    let trace_deviation = (tr - c64(1.0, 0.0)).norm();
    let min_eigenvalue = if m.is_square() && herm.is_finite() {
        let h = (m + m.adjoint()).scale(0.5);
        hermitian_eigenvalues(&h).map(|ev| *ev.last().unwrap_or(&f64::NAN)).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    StateDiagnostics { hermitian_deviation: herm, trace_deviation, min_eigenvalue }
}

/// Certifies `m` as a density matrix with subsystem dimensions `dims`.
pub fn validate_density_matrix(m: ComplexMatrix, dims: (usize, usize)) -> Result<DensityMatrix> {
    check_dim(dims.0)?;
    check_dim(dims.1)?;
    let n = dims.0 * dims.1;
    if !m.is_square() || m.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
    }
    if !crate::linalg::is_finite(&m) {
        return Err(Error::domain("density matrix has non-finite entries"));
    }
    let diag = diagnose(&m);
    if diag.is_valid() {
        Ok(DensityMatrix::new_unchecked(m, dims))
    } else {
        Err(Error::InvalidState(diag))
    }
}

/// Maximally entangled state `|Φ><Φ|`, `|Φ> = d^{-1/2} Σ_i |ii>`.
pub fn make_bell_state(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = c64(1.0 / d as f64, 0.0);
        }
    }
    Ok(DensityMatrix::new_unchecked(m, (d, d)))
}

/// Partial transpose of an arbitrary `d1 d2`-square matrix.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: (usize, usize), sub: Subsystem) -> ComplexMatrix {
    let (d1, d2) = dims;
    assert_eq!(m.nrows(), d1 * d2, "matrix does not match subsystem dimensions");
    ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (ia, ib) = (r / d2, r % d2);
        let (ja, jb) = (c / d2, c % d2);
        match sub {
            Subsystem::A => m[(ja * d2 + ib, ia * d2 + jb)],
            Subsystem::B => m[(ia * d2 + jb, ja * d2 + ib)],
        }
    })
}

pub fn partial_transpose(rho: &DensityMatrix, sub: Subsystem) -> ComplexMatrix {
    partial_transpose_matrix(&rho.matrix, rho.dims, sub)
}

/// Reduced state on `keep`, tracing out the other subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> ComplexMatrix {
    let (d1, d2) = rho.dims;
    let m = &rho.matrix;
    match keep {
        Subsystem::A => ComplexMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(d2, d2, |i, j| (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_diagonal, identity, max_abs_diff, trace_norm};
    use crate::random::*;

    #[test]
    fn qutrit_bell_state_entries() {
        let rho = make_bell_state(3).unwrap();
        assert_eq!(rho.dims(), (3, 3));
        for r in 0..9 {
            for c in 0..9 {
                let want = if r % 4 == 0 && c % 4 == 0 { 1.0 / 3.0 } else { 0.0 };
                assert_eq!(rho.matrix()[(r, c)], c64(want, 0.0));
            }
        }
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qubit_bell_state_is_pure() {
        let rho = make_bell_state(2).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!(diagnose(rho.matrix()).is_valid());
    }

    #[test]
    fn bell_state_rejects_small_dimension() {
        assert!(matches!(make_bell_state(1), Err(Error::InvalidDimension { dim: 1 })));
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let rho = make_bell_state(3).unwrap();
        let third = identity(3).unscale(3.0);
        assert!(max_abs_diff(&partial_trace(&rho, Subsystem::A), &third) < 1e-15);
        assert!(max_abs_diff(&partial_trace(&rho, Subsystem::B), &third) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_product_state() {
        let mut rng = seeded_rng(10);
        let a = random_local_state(3, &mut rng);
        let b = random_local_state(3, &mut rng);
        let rho = DensityMatrix::product(&a, &b).unwrap();
        let pt = partial_transpose(&rho, Subsystem::A);
        assert!(max_abs_diff(&pt, &tensor(&a.transpose(), &b)) < 1e-15);
        let pt_b = partial_transpose(&rho, Subsystem::B);
        assert!(max_abs_diff(&pt_b, &tensor(&a, &b.transpose())) < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = make_bell_state(3).unwrap();
        let ev = hermitian_eigenvalues(&partial_transpose(&rho, Subsystem::A)).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let want = if k < 6 { 1.0 / 3.0 } else { -1.0 / 3.0 };
            assert!((v - want).abs() < 1e-12, "eigenvalue {k}: {v}");
        }
        assert!((trace_norm(&partial_transpose(&rho, Subsystem::A)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution_and_keeps_trace() {
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let rho = random_density_matrix(3, 3, &mut rng);
            for sub in [Subsystem::A, Subsystem::B] {
                let pt = partial_transpose(&rho, sub);
                assert!(hermitian_deviation(&pt) < 1e-15);
                assert!((trace(&pt).re - 1.0).abs() < 1e-12);
                let back = partial_transpose_matrix(&pt, rho.dims(), sub);
                assert_eq!(&back, rho.matrix());
            }
        }
    }

    #[test]
    fn partial_trace_of_product_and_random_states() {
        let mut rng = seeded_rng(12);
        let a = random_local_state(2, &mut rng);
        let b = random_local_state(3, &mut rng);
        let rho = DensityMatrix::product(&a, &b).unwrap();
        assert!(max_abs_diff(&partial_trace(&rho, Subsystem::B), &b) < 1e-14);
        assert!(max_abs_diff(&partial_trace(&rho, Subsystem::A), &a) < 1e-14);
        for _ in 0..10 {
            let psi = random_pure_state(3, 3, &mut rng);
            for keep in [Subsystem::A, Subsystem::B] {
                let red = partial_trace(&psi, keep);
                assert!(diagnose(&red).is_valid());
            }
        }
    }

    #[test]
    fn accepts_maximally_mixed() {
        let m = identity(9).unscale(9.0);
        assert!(validate_density_matrix(m, (3, 3)).is_ok());
    }

    #[test]
    fn reports_trace_violation_magnitude() {
        let mut diag = vec![0.0; 9];
        diag[0] = 1.5;
        match validate_density_matrix(from_real_diagonal(&diag), (3, 3)) {
            Err(Error::InvalidState(d)) => {
                assert!(!d.trace_ok());
                assert!((d.trace_deviation - 0.5).abs() < 1e-15);
                assert!(d.hermitian_ok() && d.psd_ok());
            }
            other => panic!("expected trace violation, got {other:?}"),
        }
    }

    #[test]
    fn reports_negative_eigenvalue() {
        let mut diag = vec![0.0; 9];
        diag[0] = 0.51;
        diag[1] = 0.5;
        diag[2] = -0.01;
        match validate_density_matrix(from_real_diagonal(&diag), (3, 3)) {
            Err(Error::InvalidState(d)) => {
                assert!(!d.psd_ok());
                assert!((d.psd_violation() - 0.01).abs() < 1e-14);
                assert!(d.to_string().contains("positivity"));
            }
            other => panic!("expected PSD violation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        assert!(matches!(
            validate_density_matrix(identity(4).unscale(4.0), (3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn swap_subsystems_exchanges_marginals() {
        let mut rng = seeded_rng(13);
        let rho = random_density_matrix(2, 3, &mut rng);
        let swapped = rho.swap_subsystems();
        assert_eq!(swapped.dims(), (3, 2));
        assert!(max_abs_diff(&partial_trace(&swapped, Subsystem::A), &partial_trace(&rho, Subsystem::B)) < 1e-14);
        assert_eq!(swapped.swap_subsystems(), rho);
    }
}
