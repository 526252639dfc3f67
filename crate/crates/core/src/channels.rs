//! Local qutrit noise channels as Kraus-operator sets.
//!
//! All four families are parameterized by a decay strength γ ∈ [0, 1] which,
//! for Markovian decay at rate q over time t, is γ = 1 - exp(-q t).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, from_real_diagonal, identity, is_finite, max_abs_diff, tensor, ComplexMatrix};
use crate::state::DensityMatrix;

/// Completeness tolerance on max |Σ E†E - I|.
pub const COMPLETENESS_TOL: f64 = 1e-12;

const OMEGA_ANGLE: f64 = 2.0 * std::f64::consts::PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelFamily {
    Dephasing,
    TritFlip,
    TritPhaseFlip,
    Depolarizing,
    Custom,
}

impl ChannelFamily {
    /// The four named families, in presentation order.
    pub const NAMED: [ChannelFamily; 4] = [
        ChannelFamily::Dephasing,
        ChannelFamily::TritFlip,
        ChannelFamily::TritPhaseFlip,
        ChannelFamily::Depolarizing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Dephasing => "dephasing",
            ChannelFamily::TritFlip => "trit-flip",
            ChannelFamily::TritPhaseFlip => "trit-phase-flip",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::Custom => "custom",
        }
    }

    /// Builds the qutrit channel of this family at strength `gamma`.
    pub fn kraus(self, gamma: f64) -> Result<KrausChannel> {
        match self {
            ChannelFamily::Dephasing => dephasing_kraus(gamma, 3),
            ChannelFamily::TritFlip => trit_flip_kraus(gamma),
            ChannelFamily::TritPhaseFlip => trit_phase_flip_kraus(gamma),
            ChannelFamily::Depolarizing => depolarizing_kraus(gamma),
            ChannelFamily::Custom => Err(Error::domain("custom channels have no parametric constructor")),
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelFamily::NAMED
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown channel family `{s}`")))
    }
}

/// Decay rate and elapsed time of one local channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayParams {
    pub q: f64,
    pub t: f64,
}

impl DecayParams {
    pub fn new(q: f64, t: f64) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::domain(format!("decay rate must be finite and non-negative, got {q}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
        }
        Ok(Self { q, t })
    }

    pub fn gamma(self) -> f64 {
        (-(-self.q * self.t).exp_m1()).clamp(0.0, 1.0)
    }
}

/// γ = 1 - exp(-q t), clamped to [0, 1].
pub fn gamma_of(q: f64, t: f64) -> Result<f64> {
    Ok(DecayParams::new(q, t)?.gamma())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must lie in [0, 1], got {gamma}")))
    }
}

/// A finite Kraus set acting on a single `dim`-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    family: ChannelFamily,
    gamma: f64,
}

impl KrausChannel {
    /// Wraps a user-supplied Kraus set. Completeness is not required here;
    /// check it with [`validate_kraus`] or let [`apply_local_channels`] reject it.
    pub fn custom(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators.first().map(|m| m.nrows()).ok_or_else(|| Error::domain("empty Kraus set"))?;
        for op in &operators {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: op.ncols().max(op.nrows()) });
            }
            if !is_finite(op) {
                return Err(Error::domain("Kraus operator has non-finite entries"));
            }
        }
        Ok(Self { dim, operators, family: ChannelFamily::Custom, gamma: f64::NAN })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, operators: vec![identity(dim)], family: ChannelFamily::Custom, gamma: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    /// Strength parameter; NaN for custom channels.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Σ_i E_i† E_i.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, e| acc + e.adjoint() * e)
    }

    /// Single-system action `ρ ↦ Σ_i E_i ρ E_i†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, e| acc + e * rho * e.adjoint())
    }
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausDiagnostics {
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl KrausDiagnostics {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for KrausDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max |sum E^dagger E - I| = {:.3e} (tolerance {:.0e})",
            self.max_deviation, self.tolerance
        )
    }
}

pub fn validate_kraus(ch: &KrausChannel) -> KrausDiagnostics {
    KrausDiagnostics {
        max_deviation: max_abs_diff(&ch.completeness_sum(), &identity(ch.dim)),
        tolerance: COMPLETENESS_TOL,
    }
}

fn real(x: f64) -> Complex64 {
    c64(x, 0.0)
}

/// Cyclic shift |j> -> |j+1 mod 3>.
fn shift_up() -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, c| if r == (c + 1) % 3 { real(1.0) } else { real(0.0) })
}

/// Cyclic shift |j> -> |j-1 mod 3>, i.e. [[0,1,0],[0,0,1],[1,0,0]].
fn shift_down() -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, c| if c == (r + 1) % 3 { real(1.0) } else { real(0.0) })
}

/// Clock operator diag(1, ω, ω²), ω = exp(2πi/3).
fn clock() -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, OMEGA_ANGLE * r as f64)
        } else {
            real(0.0)
        }
    })
}

/// Dephasing on a `d`-level system: M = diag(1, √(1-γ), ...), plus
/// √γ |k><k| for every excited level k ≥ 1.
pub fn dephasing_kraus(gamma: f64, d: usize) -> Result<KrausChannel> {
    check_gamma(gamma)?;
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d });
    }
    let keep = (1.0 - gamma).sqrt();
    let mut m = vec![keep; d];
    m[0] = 1.0;
    let mut operators = vec![from_real_diagonal(&m)];
    for k in 1..d {
        let mut diag = vec![0.0; d];
        diag[k] = gamma.sqrt();
        operators.push(from_real_diagonal(&diag));
    }
    Ok(KrausChannel { dim: d, operators, family: ChannelFamily::Dephasing, gamma })
}

/// Trit flip: √(1-2γ/3) I, √(γ/3) P, √(γ/3) P² with P the cyclic shift
/// |0> -> |1> -> |2> -> |0>.
pub fn trit_flip_kraus(gamma: f64) -> Result<KrausChannel> {
    check_gamma(gamma)?;
    let p = shift_up();
    let p2 = &p * &p;
    let w = (gamma / 3.0).sqrt();
    let operators = vec![identity(3).scale((1.0 - 2.0 * gamma / 3.0).sqrt()), p.scale(w), p2.scale(w)];
    Ok(KrausChannel { dim: 3, operators, family: ChannelFamily::TritFlip, gamma })
}

/// Trit flip with the flip operators weighted by √γ instead of √(γ/3).
///
/// This set is not trace preserving (Σ E†E = (1 + 4γ/3) I). It exists only
/// so the normalization defect can be demonstrated and regression-tested.
pub fn trit_flip_kraus_unnormalized(gamma: f64) -> Result<KrausChannel> {
    check_gamma(gamma)?;
    let p = shift_up();
    let p2 = &p * &p;
    let w = gamma.sqrt();
    let operators = vec![identity(3).scale((1.0 - 2.0 * gamma / 3.0).sqrt()), p.scale(w), p2.scale(w)];
    Ok(KrausChannel { dim: 3, operators, family: ChannelFamily::Custom, gamma })
}

/// Trit-phase flip: √(1-2γ/3) I and four √(γ/6)-weighted phased shifts N±, T±.
pub fn trit_phase_flip_kraus(gamma: f64) -> Result<KrausChannel> {
    check_gamma(gamma)?;
    let w = (gamma / 6.0).sqrt();
    let o = real(0.0);
    let one = real(1.0);
    let ph = |sign: f64| Complex64::from_polar(1.0, sign * OMEGA_ANGLE);
    let mut operators = vec![identity(3).scale((1.0 - 2.0 * gamma / 3.0).sqrt())];
    for sign in [1.0, -1.0] {
        #[rustfmt::skip]
        let n = ComplexMatrix::from_row_slice(3, 3, &[
            o,   o,          ph(sign),
            one, o,          o,
            o,   ph(-sign),  o,
        ]);
        operators.push(n.scale(w));
    }
    for sign in [1.0, -1.0] {
        #[rustfmt::skip]
        let t = ComplexMatrix::from_row_slice(3, 3, &[
            o,   ph(-sign), o,
            o,   o,         ph(sign),
            one, o,         o,
        ]);
        operators.push(t.scale(w));
    }
    Ok(KrausChannel { dim: 3, operators, family: ChannelFamily::TritPhaseFlip, gamma })
}

/// Depolarizing: α I with α = √(1-8γ/9), and β Y^a Z^b for the eight
/// non-identity Weyl operators, β = √γ / 3. Acts as ρ ↦ (1-γ)ρ + γ I/3.
pub fn depolarizing_kraus(gamma: f64) -> Result<KrausChannel> {
    check_gamma(gamma)?;
    let alpha = (1.0 - 8.0 * gamma / 9.0).max(0.0).sqrt();
    let beta = gamma.sqrt() / 3.0;
    let y = shift_down();
    let z = clock();
    let mut operators = vec![identity(3).scale(alpha)];
    let mut ya = identity(3);
    for a in 0..3 {
        let mut zb = identity(3);
        for b in 0..3 {
            if (a, b) != (0, 0) {
                operators.push((&ya * &zb).scale(beta));
            }
            zb = &zb * &z;
        }
        ya = &ya * &y;
    }
    Ok(KrausChannel { dim: 3, operators, family: ChannelFamily::Depolarizing, gamma })
}

fn lift_and_apply(rho: &ComplexMatrix, ch: &KrausChannel, on_a: bool, other_dim: usize) -> ComplexMatrix {
    let id = identity(other_dim);
    let n = rho.nrows();
    ch.operators.iter().fold(ComplexMatrix::zeros(n, n), |acc, e| {
        let lifted = if on_a { tensor(e, &id) } else { tensor(&id, e) };
        acc + &lifted * rho * lifted.adjoint()
    })
}

fn require_complete(ch: &KrausChannel) -> Result<()> {
    let diag = validate_kraus(ch);
    if diag.passed() {
        Ok(())
    } else {
        Err(Error::IncompleteKraus(diag))
    }
}

/// Applies `ch_a` on subsystem A and `ch_b` on subsystem B:
/// ρ' = Σ_ij (E_i ⊗ F_j) ρ (E_i ⊗ F_j)†.
pub fn apply_local_channels(rho: &DensityMatrix, ch_a: &KrausChannel, ch_b: &KrausChannel) -> Result<DensityMatrix> {
    let (d1, d2) = rho.dims();
    if ch_a.dim != d1 {
        return Err(Error::DimensionMismatch { expected: d1, found: ch_a.dim });
    }
    if ch_b.dim != d2 {
        return Err(Error::DimensionMismatch { expected: d2, found: ch_b.dim });
    }
    require_complete(ch_a)?;
    require_complete(ch_b)?;
    // The two local maps act on different factors and commute, so the
    // double Kraus sum factorizes into two single sums.
    let after_a = lift_and_apply(rho.matrix(), ch_a, true, d2);
    let after_b = lift_and_apply(&after_a, ch_b, false, d1);
    Ok(DensityMatrix::new_unchecked(after_b, (d1, d2)))
}

/// Evolves `rho0` for time `t` under local families with rates `q_a`, `q_b`.
pub fn evolve(
    rho0: &DensityMatrix,
    family_a: ChannelFamily,
    family_b: ChannelFamily,
    q_a: f64,
    q_b: f64,
    t: f64,
) -> Result<DensityMatrix> {
    let ch_a = family_a.kraus(gamma_of(q_a, t)?)?;
    let ch_b = family_b.kraus(gamma_of(q_b, t)?)?;
    apply_local_channels(rho0, &ch_a, &ch_b)
}
