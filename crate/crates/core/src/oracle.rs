//! Independent reference values.
//!
//! [`gd_exact`] minimizes the squared Hilbert–Schmidt distance between a
//! state and its post-measurement state Π(ρ) = Σ_k (P_k ⊗ I) ρ (P_k ⊗ I)
//! over orthonormal measurement bases on one side. The search is a seeded,
//! derivative-free pattern search in a moving exponential chart
//! U ← U exp(i s ξ_k) along the SU(d) generators, with geometrically
//! shrinking step. The closed forms below cover the channel families whose
//! action on the Bell state can be solved by hand.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::su_generators;
use crate::linalg::{c64, hs_norm_sq, identity, unitarity_deviation, unitary_from_hermitian, ComplexMatrix};
use crate::measures::GdConvention;
use crate::random::random_hermitian;
use crate::state::{DensityMatrix, Subsystem};

pub const UNITARITY_TOL: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 32;

/// Sweeps improving the objective by less than this shrink the step.
const OBJECTIVE_TOL: f64 = 1e-9;
const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-7;
const MAX_SWEEPS: usize = 20_000;
const GRADIENT_PROBE: f64 = 1e-5;

/// Orthonormal basis given by the columns of a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    unitary: ComplexMatrix,
}

impl MeasurementBasis {
    pub fn new(unitary: ComplexMatrix) -> Result<Self> {
        let dev = unitarity_deviation(&unitary);
        if dev > UNITARITY_TOL {
            return Err(Error::domain(format!("measurement basis is not unitary (deviation {dev:.3e})")));
        }
        Ok(Self { unitary })
    }

    pub fn computational(d: usize) -> Self {
        Self { unitary: identity(d) }
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    fn projector(&self, k: usize) -> ComplexMatrix {
        let u = self.unitary.column(k);
        u * u.adjoint()
    }
}

fn check_basis_dim(rho: &DensityMatrix, basis: &MeasurementBasis, side: Subsystem) -> Result<()> {
    let d = match side {
        Subsystem::A => rho.dims().0,
        Subsystem::B => rho.dims().1,
    };
    if basis.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis.dim() });
    }
    Ok(())
}

/// Π(ρ) for a von Neumann measurement on subsystem A.
pub fn project_measurement(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    project_measurement_on(rho, basis, Subsystem::A)
}

pub fn project_measurement_on(rho: &DensityMatrix, basis: &MeasurementBasis, side: Subsystem) -> Result<DensityMatrix> {
    check_basis_dim(rho, basis, side)?;
    let (d1, d2) = rho.dims();
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..basis.dim() {
        let p = basis.projector(k);
        let lifted = match side {
            Subsystem::A => crate::linalg::tensor(&p, &identity(d2)),
            Subsystem::B => crate::linalg::tensor(&identity(d1), &p),
        };
        out += &lifted * rho.matrix() * &lifted;
    }
    Ok(DensityMatrix::new_unchecked(out, rho.dims()))
}

/// ‖ρ - Π(ρ)‖² computed from the explicit post-measurement state.
pub fn measurement_distance_sq(rho: &DensityMatrix, basis: &MeasurementBasis, side: Subsystem) -> Result<f64> {
    let projected = project_measurement_on(rho, basis, side)?;
    Ok(hs_norm_sq(&(rho.matrix() - projected.matrix())))
}

/// Fast objective for measurements on A: ‖ρ‖² - Σ_k ‖<u_k|ρ|u_k>‖², where
/// <u_k|ρ|u_k> is the conditional block on B. Valid because Π is an
/// orthogonal projection in Hilbert–Schmidt space.
fn objective(rho: &ComplexMatrix, purity: f64, d1: usize, d2: usize, u: &ComplexMatrix) -> f64 {
    let mut kept = 0.0;
    for k in 0..d1 {
        for b in 0..d2 {
            for b2 in 0..d2 {
                let mut acc = c64(0.0, 0.0);
                for a in 0..d1 {
                    let ua = u[(a, k)].conj();
                    for a2 in 0..d1 {
                        acc += ua * rho[(a * d2 + b, a2 * d2 + b2)] * u[(a2, k)];
                    }
                }
                kept += acc.norm_sqr();
            }
        }
    }
    (purity - kept).max(0.0)
}

/// Re-orthonormalizes the columns (Gram–Schmidt via QR).
fn polish(u: &ComplexMatrix) -> ComplexMatrix {
    let qr = u.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub restarts: usize,
    pub seed: u64,
    pub side: Subsystem,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { restarts: DEFAULT_RESTARTS, seed: 0, side: Subsystem::A }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Minimized squared Hilbert–Schmidt distance to a zero-discord state.
    pub value: f64,
    pub basis: MeasurementBasis,
    pub restarts_used: usize,
    pub seed: u64,
    /// Norm of the central-difference gradient at the optimum, in chart coordinates.
    pub residual_gradient: f64,
    /// Index of the restart that produced `value`.
    pub best_restart: usize,
}

struct LocalSearch<'a> {
    rho: &'a ComplexMatrix,
    purity: f64,
    d1: usize,
    d2: usize,
    directions: Vec<ComplexMatrix>,
}

impl LocalSearch<'_> {
    fn eval(&self, u: &ComplexMatrix) -> f64 {
        objective(self.rho, self.purity, self.d1, self.d2, u)
    }

    fn moves(&self, step: f64) -> Vec<ComplexMatrix> {
        self.directions
            .iter()
            .flat_map(|g| [step, -step].map(|s| unitary_from_hermitian(&g.scale(s)).expect("generator is Hermitian")))
            .collect()
    }

    fn refine(&self, start: ComplexMatrix) -> (f64, ComplexMatrix) {
        let mut u = start;
        let mut f = self.eval(&u);
        let mut step = INITIAL_STEP;
        let mut moves = self.moves(step);
        let mut sweeps = 0;
        while step > MIN_STEP && sweeps < MAX_SWEEPS {
            sweeps += 1;
            let before = f;
            for pair in moves.chunks(2) {
                for m in pair {
                    let cand = &u * m;
                    let fc = self.eval(&cand);
                    if fc < f {
                        u = cand;
                        f = fc;
                        break;
                    }
                }
            }
            if before - f < OBJECTIVE_TOL {
                step *= 0.5;
                u = polish(&u);
                f = self.eval(&u);
                moves = self.moves(step);
            }
        }
        (f, polish(&u))
    }

    fn gradient_norm(&self, u: &ComplexMatrix) -> f64 {
        self.moves(GRADIENT_PROBE)
            .chunks(2)
            .map(|pair| {
                let g = (self.eval(&(u * &pair[0])) - self.eval(&(u * &pair[1]))) / (2.0 * GRADIENT_PROBE);
                g * g
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Exact geometric discord by seeded multi-start search over measurement bases.
pub fn gd_exact(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<OracleResult> {
    gd_exact_with(rho, OracleOptions { restarts, seed, side: Subsystem::A })
}

pub fn gd_exact_with(rho: &DensityMatrix, opts: OracleOptions) -> Result<OracleResult> {
    if opts.restarts == 0 {
        return Err(Error::domain("oracle needs at least one restart"));
    }
    let state = match opts.side {
        Subsystem::A => rho.clone(),
        Subsystem::B => rho.swap_subsystems(),
    };
    let (d1, d2) = state.dims();
    if d1 > 4 {
        return Err(Error::domain(format!("exact discord search supports measured dimension <= 4, got {d1}")));
    }
    let search = LocalSearch {
        rho: state.matrix(),
        purity: state.purity(),
        d1,
        d2,
        directions: su_generators(d1)?.generators().to_vec(),
    };

    // Each restart draws from its own ChaCha stream, so the outcome does not
    // depend on how rayon schedules them.
    let runs: Vec<(f64, ComplexMatrix)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let start = unitary_from_hermitian(&random_hermitian(d1, &mut rng)).expect("random Hermitian");
            search.refine(start)
        })
        .collect();

    let (best_restart, (value, u)) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .0 < best.1 .0 { cur } else { best })
        .expect("at least one restart");
    let residual_gradient = search.gradient_norm(&u);
    Ok(OracleResult {
        value,
        basis: MeasurementBasis::new(u)?,
        restarts_used: opts.restarts,
        seed: opts.seed,
        residual_gradient,
        best_restart,
    })
}

fn check_rates(q_a: f64, q_b: f64, t: f64) -> Result<()> {
    for (name, v) in [("q_a", q_a), ("q_b", q_b), ("t", t)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be finite and non-negative, got {v}")));
        }
    }
    Ok(())
}

/// Negativity of the Bell state after local dephasing on both qutrits:
/// (2s + s²)/3 with s = exp(-(q_a + q_b) t / 2).
pub fn analytic_negativity_dephasing(q_a: f64, q_b: f64, t: f64) -> Result<f64> {
    check_rates(q_a, q_b, t)?;
    let s = (-(q_a + q_b) * t / 2.0).exp();
    Ok((2.0 * s + s * s) / 3.0)
}

/// Weight p of the isotropic state reached from the Bell state under local
/// depolarizing noise: p = exp(-(q_a + q_b) t).
pub fn depolarized_bell_weight(q_a: f64, q_b: f64, t: f64) -> Result<f64> {
    check_rates(q_a, q_b, t)?;
    Ok((-(q_a + q_b) * t).exp())
}

/// Negativity of the depolarized Bell state: max(0, (4p - 1)/3).
pub fn analytic_negativity_depolarizing(q_a: f64, q_b: f64, t: f64) -> Result<f64> {
    let p = depolarized_bell_weight(q_a, q_b, t)?;
    Ok(((4.0 * p - 1.0) / 3.0).max(0.0))
}

/// Time after which the depolarized Bell state is separable: ln 4 / (q_a + q_b).
pub fn sudden_death_time_depolarizing(q_a: f64, q_b: f64) -> Result<f64> {
    check_rates(q_a, q_b, 0.0)?;
    Ok(4f64.ln() / (q_a + q_b))
}

/// GD lower bound of the isotropic state: (2/3)p² raw, (4/3)p² paper.
pub fn analytic_gd_isotropic(p: f64, conv: GdConvention) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("isotropic weight must lie in [0, 1], got {p}")));
    }
    // Bracket is 9p²: ‖V‖² = 18p² and G = (3/2)p² I.
    Ok(conv.prefactor.factor((3, 3)) * 9.0 * p * p)
}
