//! Seeded random matrices and states for tests, validation runs and the
//! oracle's restarts. All generators are deterministic given the RNG.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, tensor, ComplexMatrix};
use crate::state::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c64(gaussian(rng), gaussian(rng)))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = random_matrix(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Normalized random ket as an `n x 1` column.
pub fn random_ket<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = random_matrix(n, 1, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.unscale(norm)
}

/// Random mixed state from the Ginibre ensemble, `W W† / Tr(W W†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> DensityMatrix {
    let n = d1 * d2;
    let w = random_matrix(n, n, rng);
    let m = &w * w.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix::new_unchecked(m.unscale(tr), (d1, d2))
}

pub fn random_pure_state<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> DensityMatrix {
    let psi = random_ket(d1 * d2, rng);
    DensityMatrix::new_unchecked(&psi * psi.adjoint(), (d1, d2))
}

/// Single-system random density matrix of dimension `d`.
pub fn random_local_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let w = random_matrix(d, d, rng);
    let m = &w * w.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m.unscale(tr)
}

pub fn random_product_state<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> DensityMatrix {
    let a = random_local_state(d1, rng);
    let b = random_local_state(d2, rng);
    DensityMatrix::new_unchecked(tensor(&a, &b), (d1, d2))
}

/// Classical-quantum state `Σ_k p_k |k><k| ⊗ ρ_k` in the computational basis of A.
pub fn random_classical_quantum_state<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> DensityMatrix {
    let weights: Vec<f64> = (0..d1).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    for (k, w) in weights.iter().enumerate() {
        let mut proj = ComplexMatrix::zeros(d1, d1);
        proj[(k, k)] = c64(w / total, 0.0);
        m += tensor(&proj, &random_local_state(d2, rng));
    }
    DensityMatrix::new_unchecked(m, (d1, d2))
}
