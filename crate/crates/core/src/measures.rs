//! Negativity and the geometric-discord lower bound.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::su_generators;
use crate::linalg::{c64, hermitian_eigenvalues, identity, tensor, trace_norm, ComplexMatrix, ZERO_EIGENVALUE_TOL};
use crate::state::{make_bell_state, partial_transpose, DensityMatrix, Subsystem};

/// Largest tolerated imaginary part of a Bloch coefficient trace.
pub const BLOCH_IMAG_TOL: f64 = 1e-10;

/// Negativity from the spectrum of the partial transpose: Σ |λ| over λ < 0.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose(rho, Subsystem::A);
    // Partial transposition preserves Hermiticity exactly, so this cannot fail.
    let ev = hermitian_eigenvalues(&pt).expect("partial transpose of a state is Hermitian");
    ev.iter().filter(|&&l| l < -ZERO_EIGENVALUE_TOL).map(|l| -l).sum()
}

/// Negativity as (‖ρ^{T_A}‖₁ - 1) / 2, computed from singular values.
pub fn negativity_via_trace_norm(rho: &DensityMatrix) -> f64 {
    ((trace_norm(&partial_transpose(rho, Subsystem::A)) - 1.0) / 2.0).max(0.0)
}

/// Bloch vectors and correlation matrix of a bipartite state:
///
/// ρ = (1/(d1 d2)) [I ⊗ I + Σ y_k ξ_k ⊗ I + Σ z_l I ⊗ ξ_l + Σ v_kl ξ_k ⊗ ξ_l]
///
/// with y_k = (d1/2) Tr(ρ ξ_k ⊗ I), z_l = (d2/2) Tr(ρ I ⊗ ξ_l) and
/// v_kl = (d1 d2 / 4) Tr(ρ ξ_k ⊗ ξ_l), generators in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    pub dims: (usize, usize),
    pub y_a: Vec<f64>,
    pub z_b: Vec<f64>,
    pub v: DMatrix<f64>,
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = c64(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

fn real_part_checked(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > BLOCH_IMAG_TOL {
        return Err(Error::Numerical { what: format!("imaginary part of {what}"), residual: z.im.abs() });
    }
    Ok(z.re)
}

/// `Σ_{a,a'} g[a', a] ρ[(a, ·), (a', ·)]`: the B-side block obtained by
/// contracting the A indices of ρ against `g`, so that
/// Tr(ρ (g ⊗ h)) = Tr(block · h).
fn contract_a(m: &ComplexMatrix, g: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d2, d2);
    for a in 0..d1 {
        for a2 in 0..d1 {
            let w = g[(a2, a)];
            if w == c64(0.0, 0.0) {
                continue;
            }
            for b in 0..d2 {
                for b2 in 0..d2 {
                    out[(b, b2)] += w * m[(a * d2 + b, a2 * d2 + b2)];
                }
            }
        }
    }
    out
}

pub fn bloch_decomposition(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    let (d1, d2) = rho.dims();
    let ga = su_generators(d1)?;
    let gb = su_generators(d2)?;
    let m = rho.matrix();

    let reduced_b = contract_a(m, &identity(d1), d1, d2);
    let z_b = gb
        .iter()
        .map(|g| real_part_checked(trace_of_product(&reduced_b, g), "z_l").map(|x| x * d2 as f64 / 2.0))
        .collect::<Result<Vec<_>>>()?;

    let scale = (d1 * d2) as f64 / 4.0;
    let mut y_a = Vec::with_capacity(ga.len());
    let mut v = DMatrix::zeros(ga.len(), gb.len());
    for (k, gk) in ga.iter().enumerate() {
        let block = contract_a(m, gk, d1, d2);
        y_a.push(real_part_checked(crate::linalg::trace(&block), "y_k")? * d1 as f64 / 2.0);
        for (l, gl) in gb.iter().enumerate() {
            v[(k, l)] = scale * real_part_checked(trace_of_product(&block, gl), "v_kl")?;
        }
    }
    Ok(BlochDecomposition { dims: (d1, d2), y_a, z_b, v })
}

impl BlochDecomposition {
    /// Rebuilds the density matrix from the coefficients.
    pub fn synthesize(&self) -> Result<ComplexMatrix> {
        let (d1, d2) = self.dims;
        let ga = su_generators(d1)?;
        let gb = su_generators(d2)?;
        let (ida, idb) = (identity(d1), identity(d2));
        let mut m = identity(d1 * d2);
        for (g, &y) in ga.iter().zip(&self.y_a) {
            m += tensor(g, &idb).scale(y);
        }
        for (g, &z) in gb.iter().zip(&self.z_b) {
            m += tensor(&ida, g).scale(z);
        }
        for (k, gk) in ga.iter().enumerate() {
            for (l, gl) in gb.iter().enumerate() {
                m += tensor(gk, gl).scale(self.v[(k, l)]);
            }
        }
        Ok(m.unscale((d1 * d2) as f64))
    }

    pub fn y_norm_sq(&self) -> f64 {
        self.y_a.iter().map(|y| y * y).sum()
    }

    pub fn v_norm_sq(&self) -> f64 {
        self.v.iter().map(|v| v * v).sum()
    }

    /// G = Y Yᵀ + (2/d2) V Vᵀ, a (d1²-1)-square real symmetric matrix.
    pub fn g_matrix(&self) -> DMatrix<f64> {
        let y = DMatrix::from_column_slice(self.y_a.len(), 1, &self.y_a);
        &y * y.transpose() + (&self.v * self.v.transpose()).scale(2.0 / self.dims.1 as f64)
    }

    /// Eigenvalues of G in non-increasing order.
    pub fn g_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.g_matrix().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// How many eigenvalues of G are subtracted in the bound's bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenSumRange {
    /// The d1 - 1 largest eigenvalues (the bound).
    Leading,
    /// All d1² - 1 eigenvalues; the bracket then collapses to zero. Kept
    /// only to document that this reading is degenerate.
    All,
}

/// ‖Y‖² + (2/d2)‖V‖² - Σ λ_n over the selected eigenvalues of G.
pub fn gd_bracket(decomp: &BlochDecomposition, range: EigenSumRange) -> f64 {
    let ev = decomp.g_eigenvalues();
    let take = match range {
        EigenSumRange::Leading => decomp.dims.0 - 1,
        EigenSumRange::All => ev.len(),
    };
    let subtracted: f64 = ev.iter().take(take).sum();
    decomp.y_norm_sq() + 2.0 / decomp.dims.1 as f64 * decomp.v_norm_sq() - subtracted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GdPrefactor {
    /// 4 / (d1² d2), the normalization used for the published curves.
    Paper,
    /// 2 / (d1² d2), the squared Hilbert–Schmidt distance bound.
    Raw,
}

impl GdPrefactor {
    pub fn name(self) -> &'static str {
        match self {
            GdPrefactor::Paper => "paper",
            GdPrefactor::Raw => "raw",
        }
    }

    pub fn factor(self, dims: (usize, usize)) -> f64 {
        let (d1, d2) = (dims.0 as f64, dims.1 as f64);
        let num = match self {
            GdPrefactor::Paper => 4.0,
            GdPrefactor::Raw => 2.0,
        };
        num / (d1 * d1 * d2)
    }
}

impl fmt::Display for GdPrefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GdPrefactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(GdPrefactor::Paper),
            "raw" => Ok(GdPrefactor::Raw),
            _ => Err(Error::domain(format!("unknown GD convention `{s}` (expected paper|raw)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GdConvention {
    pub prefactor: GdPrefactor,
    pub clamp_nonnegative: bool,
}

impl GdConvention {
    pub const PAPER: GdConvention = GdConvention { prefactor: GdPrefactor::Paper, clamp_nonnegative: true };
    pub const RAW: GdConvention = GdConvention { prefactor: GdPrefactor::Raw, clamp_nonnegative: true };

    pub fn unclamped(self) -> Self {
        GdConvention { clamp_nonnegative: false, ..self }
    }
}

impl Default for GdConvention {
    fn default() -> Self {
        GdConvention::PAPER
    }
}

/// Lower bound on the geometric discord (measured on A) from an existing decomposition.
pub fn gd_lower_bound_from(decomp: &BlochDecomposition, conv: GdConvention) -> f64 {
    let value = conv.prefactor.factor(decomp.dims) * gd_bracket(decomp, EigenSumRange::Leading);
    if conv.clamp_nonnegative {
        value.max(0.0)
    } else {
        value
    }
}

pub fn gd_lower_bound(rho: &DensityMatrix, conv: GdConvention) -> Result<f64> {
    Ok(gd_lower_bound_from(&bloch_decomposition(rho)?, conv))
}

/// Isotropic two-qutrit state p |Φ><Φ| + (1 - p) I/9.
pub fn isotropic_family(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("isotropic weight must lie in [0, 1], got {p}")));
    }
    let bell = make_bell_state(3)?;
    let m = bell.matrix().scale(p) + identity(9).scale((1.0 - p) / 9.0);
    Ok(DensityMatrix::new_unchecked(m, (3, 3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random::*;

    #[test]
    fn bell_negativity_is_one() {
        let rho = make_bell_state(3).unwrap();
        assert!((negativity(&rho) - 1.0).abs() < 1e-12);
        assert!((negativity_via_trace_norm(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_no_correlations() {
        let rho = DensityMatrix::maximally_mixed(3, 3).unwrap();
        assert_eq!(negativity(&rho), 0.0);
        let d = bloch_decomposition(&rho).unwrap();
        assert!(d.y_a.iter().chain(&d.z_b).all(|x| x.abs() < 1e-15));
        assert!(d.v.iter().all(|x| x.abs() < 1e-15));
        assert_eq!(gd_lower_bound(&rho, GdConvention::PAPER).unwrap(), 0.0);
    }

    #[test]
    fn isotropic_negativity_closed_form() {
        for p in [0.0, 0.1, 0.25, 0.5, 0.8, 1.0] {
            let rho = isotropic_family(p).unwrap();
            let want = ((4.0 * p - 1.0) / 3.0).max(0.0);
            assert!((negativity(&rho) - want).abs() < 1e-12, "p={p}");
        }
        assert!((negativity(&isotropic_family(0.5).unwrap()) - 1.0 / 3.0).abs() < 1e-12);
        assert!(negativity(&isotropic_family(0.25).unwrap()) < 1e-12);
    }

    #[test]
    fn isotropic_endpoints() {
        assert_eq!(isotropic_family(1.0).unwrap(), make_bell_state(3).unwrap());
        let mixed = DensityMatrix::maximally_mixed(3, 3).unwrap();
        assert!(max_abs_diff(isotropic_family(0.0).unwrap().matrix(), mixed.matrix()) < 1e-16);
        assert!(isotropic_family(1.5).is_err());
        assert!(isotropic_family(-0.1).is_err());
    }

    #[test]
    fn bell_correlation_matrix_is_signed_diagonal() {
        let rho = make_bell_state(3).unwrap();
        let d = bloch_decomposition(&rho).unwrap();
        let kinds = su_generators(3).unwrap().kinds().to_vec();
        assert!(d.y_a.iter().chain(&d.z_b).all(|x| x.abs() < 1e-14));
        for (k, kind) in kinds.iter().enumerate() {
            for l in 0..8 {
                let want = if k == l { 1.5 * kind.transpose_sign() } else { 0.0 };
                assert!((d.v[(k, l)] - want).abs() < 1e-14, "v[{k},{l}] = {}", d.v[(k, l)]);
            }
        }
        assert!((d.v_norm_sq() - 18.0).abs() < 1e-12);
        for ev in d.g_eigenvalues() {
            assert!((ev - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_gd_lower_bound_in_both_conventions() {
        let rho = make_bell_state(3).unwrap();
        assert!((gd_lower_bound(&rho, GdConvention::PAPER).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((gd_lower_bound(&rho, GdConvention::RAW).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_correlations_factorize_and_bound_vanishes() {
        let mut rng = seeded_rng(40);
        for _ in 0..10 {
            let rho = random_product_state(3, 3, &mut rng);
            let d = bloch_decomposition(&rho).unwrap();
            // v_kl = y_k z_l for a product state under these scalings.
            for k in 0..8 {
                for l in 0..8 {
                    assert!((d.v[(k, l)] - d.y_a[k] * d.z_b[l]).abs() < 1e-12);
                }
            }
            let raw = gd_lower_bound(&rho, GdConvention::RAW.unclamped()).unwrap();
            assert!(raw.abs() < 1e-10, "product-state bound {raw}");
        }
    }

    #[test]
    fn classical_quantum_states_have_zero_bound() {
        let mut rng = seeded_rng(41);
        for _ in 0..10 {
            let rho = random_classical_quantum_state(3, 3, &mut rng);
            let raw = gd_lower_bound(&rho, GdConvention::RAW.unclamped()).unwrap();
            assert!(raw.abs() < 1e-10, "cq bound {raw}");
        }
    }

    #[test]
    fn decomposition_round_trips() {
        let mut rng = seeded_rng(42);
        for (d1, d2) in [(3, 3), (2, 3), (3, 2), (2, 2)] {
            let rho = random_density_matrix(d1, d2, &mut rng);
            let back = bloch_decomposition(&rho).unwrap().synthesize().unwrap();
            assert!(max_abs_diff(&back, rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn paper_convention_is_twice_raw() {
        let mut rng = seeded_rng(43);
        for _ in 0..10 {
            let d = bloch_decomposition(&random_density_matrix(3, 3, &mut rng)).unwrap();
            let paper = gd_lower_bound_from(&d, GdConvention::PAPER.unclamped());
            let raw = gd_lower_bound_from(&d, GdConvention::RAW.unclamped());
            assert_eq!(paper, 2.0 * raw);
        }
    }

    #[test]
    fn summing_every_eigenvalue_collapses_the_bracket() {
        let mut rng = seeded_rng(44);
        for _ in 0..20 {
            let d = bloch_decomposition(&random_density_matrix(3, 3, &mut rng)).unwrap();
            assert!(gd_bracket(&d, EigenSumRange::All).abs() < 1e-12);
        }
    }

    #[test]
    fn two_negativity_routes_agree() {
        let mut rng = seeded_rng(45);
        for _ in 0..20 {
            let rho = random_pure_state(3, 3, &mut rng);
            assert!((negativity(&rho) - negativity_via_trace_norm(&rho)).abs() < 1e-10);
        }
    }

    #[test]
    fn negativity_is_local_unitary_invariant() {
        let mut rng = seeded_rng(46);
        for _ in 0..10 {
            let rho = random_pure_state(3, 3, &mut rng);
            let u = random_unitary(3, &mut rng);
            let w = random_unitary(3, &mut rng);
            let rotated = rho.apply_local_unitaries(&u, &w).unwrap();
            assert!((negativity(&rho) - negativity(&rotated)).abs() < 1e-10);
        }
    }

    #[test]
    fn convention_names_parse() {
        assert_eq!("paper".parse::<GdPrefactor>().unwrap(), GdPrefactor::Paper);
        assert_eq!("raw".parse::<GdPrefactor>().unwrap(), GdPrefactor::Raw);
        assert!("other".parse::<GdPrefactor>().is_err());
        assert_eq!(serde_json::to_string(&GdPrefactor::Raw).unwrap(), "\"raw\"");
    }
}
