//! Generalized Gell-Mann generators of SU(d).
//!
//! Canonical order: the d(d-1)/2 symmetric off-diagonal generators for index
//! pairs (j, k), j < k, in lexicographic order; then the antisymmetric ones in
//! the same pair order; then the d-1 diagonal generators. For d = 2 this is
//! (σx, σy, σz). Every generator is traceless, Hermitian and satisfies
//! Tr(ξ_k ξ_l) = 2 δ_kl.

use crate::error::{Error, Result};
use crate::linalg::{c64, trace, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Symmetric,
    Antisymmetric,
    Diagonal,
}

impl GeneratorKind {
    /// Sign picked up under transposition: ξ^T = ±ξ.
    pub fn transpose_sign(self) -> f64 {
        match self {
            GeneratorKind::Antisymmetric => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
    kinds: Vec<GeneratorKind>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn kinds(&self) -> &[GeneratorKind] {
        &self.kinds
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.generators.iter()
    }

    /// Real expansion coefficients `Tr(m ξ_k)` of a Hermitian matrix.
    pub fn coefficients(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.generators.iter().map(|g| trace(&(m * g)).re).collect()
    }

    /// Inverse of [`coefficients`](Self::coefficients) for unit-trace `m`:
    /// `m = I/d + (1/2) Σ_k c_k ξ_k`.
    pub fn reconstruct(&self, coefficients: &[f64]) -> ComplexMatrix {
        let d = self.dim;
        let mut m = ComplexMatrix::identity(d, d).unscale(d as f64);
        for (g, &ck) in self.generators.iter().zip(coefficients) {
            m += g.scale(0.5 * ck);
        }
        m
    }
}

pub fn su_generators(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d });
    }
    let zero = || ComplexMatrix::zeros(d, d);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut generators = Vec::with_capacity(d * d - 1);
    let mut kinds = Vec::with_capacity(d * d - 1);

    for &(j, k) in &pairs {
        let mut g = zero();
        g[(j, k)] = c64(1.0, 0.0);
        g[(k, j)] = c64(1.0, 0.0);
        generators.push(g);
        kinds.push(GeneratorKind::Symmetric);
    }
    for &(j, k) in &pairs {
        let mut g = zero();
        g[(j, k)] = c64(0.0, -1.0);
        g[(k, j)] = c64(0.0, 1.0);
        generators.push(g);
        kinds.push(GeneratorKind::Antisymmetric);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut g = zero();
        for j in 0..l {
            g[(j, j)] = c64(norm, 0.0);
        }
        g[(l, l)] = c64(-(l as f64) * norm, 0.0);
        generators.push(g);
        kinds.push(GeneratorKind::Diagonal);
    }
    Ok(GeneratorBasis { dim: d, generators, kinds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, hermitian_deviation, max_abs_diff};
    use crate::random::{random_local_state, seeded_rng};

    fn check_basis(d: usize) {
        let basis = su_generators(d).unwrap();
        assert_eq!(basis.len(), d * d - 1);
        for (k, gk) in basis.iter().enumerate() {
            assert!(trace(gk).norm() < 1e-12);
            assert!(hermitian_deviation(gk) < 1e-15);
            for (l, gl) in basis.iter().enumerate() {
                let want = if k == l { 2.0 } else { 0.0 };
                assert!((trace(&(gk * gl)) - c64(want, 0.0)).norm() < 1e-12, "d={d} k={k} l={l}");
            }
            let sign = basis.kinds()[k].transpose_sign();
            assert!(max_abs_diff(&gk.transpose(), &gk.scale(sign)) < 1e-15);
        }
    }

    #[test]
    fn pauli_matrices_for_d2() {
        let basis = su_generators(2).unwrap();
        let o = c64(0.0, 0.0);
        let x = from_rows(2, 2, &[o, c64(1.0, 0.0), c64(1.0, 0.0), o]).unwrap();
        let y = from_rows(2, 2, &[o, c64(0.0, -1.0), c64(0.0, 1.0), o]).unwrap();
        let z = from_rows(2, 2, &[c64(1.0, 0.0), o, o, c64(-1.0, 0.0)]).unwrap();
        assert_eq!(basis.generators(), &[x, y, z]);
    }

    #[test]
    fn orthogonality_for_small_dimensions() {
        for d in 2..=5 {
            check_basis(d);
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(su_generators(3).unwrap().len(), 8);
        assert_eq!(su_generators(4).unwrap().len(), 15);
        assert!(su_generators(1).is_err());
    }

    #[test]
    fn expansion_reconstructs_states() {
        let mut rng = seeded_rng(20);
        for d in 2..=4 {
            let basis = su_generators(d).unwrap();
            for _ in 0..5 {
                let rho = random_local_state(d, &mut rng);
                let back = basis.reconstruct(&basis.coefficients(&rho));
                assert!(max_abs_diff(&rho, &back) < 1e-10);
            }
        }
    }
}
