//! Time and decay-rate sweeps over the Bell state.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::evolve;
use crate::config::{ExperimentConfig, Preset, SweepMode};
use crate::error::{Error, Result};
use crate::measures::{bloch_decomposition, gd_lower_bound_from, negativity, GdPrefactor};
use crate::oracle::gd_exact;
use crate::state::{make_bell_state, DensityMatrix};

pub const CODE_VERSION: &str = concat!("qnoise ", env!("CARGO_PKG_VERSION"));

/// Measure columns of a sweep. `gd_exact` is present only when the oracle ran.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Columns {
    pub t: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub negativity: Vec<f64>,
    pub gd_lower: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gd_exact: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDataset {
    pub meta: BTreeMap<String, String>,
    pub columns: Columns,
}

impl SweepDataset {
    pub fn len(&self) -> usize {
        self.columns.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the equal-length and non-negativity invariants.
    pub fn check(&self) -> Result<()> {
        let c = &self.columns;
        let n = c.t.len();
        let mut lens = vec![c.q1.len(), c.q2.len(), c.negativity.len(), c.gd_lower.len()];
        if let Some(ex) = &c.gd_exact {
            lens.push(ex.len());
        }
        if let Some(&bad) = lens.iter().find(|&&l| l != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad });
        }
        if c.negativity.iter().chain(&c.gd_lower).any(|&v| v.is_nan() || v < 0.0) {
            return Err(Error::Numerical { what: "negative measure value".into(), residual: 0.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Measured values at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measures {
    pub negativity: f64,
    pub gd_lower: f64,
    pub gd_exact: Option<f64>,
}

/// Grid points in row order. Rate-time sweeps run the swept rate in the
/// outer loop and time in the inner loop; rate grids are row-major in (q1, q2).
pub fn grid_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let (qa, qb, ts) = (cfg.q_a.values(), cfg.q_b.values(), cfg.time.values());
    let mut pts = Vec::with_capacity(qa.len() * qb.len() * ts.len());
    for &q1 in &qa {
        for &q2 in &qb {
            for &t in &ts {
                pts.push(Point { t, q1, q2 });
            }
        }
    }
    pts
}

/// State reached from the Bell state at `pt`.
pub fn state_at(cfg: &ExperimentConfig, pt: Point) -> Result<DensityMatrix> {
    evolve(&make_bell_state(3)?, cfg.family_a, cfg.family_b, pt.q1, pt.q2, pt.t)
}

fn measure_row(cfg: &ExperimentConfig, pt: Point, row: usize) -> Result<Measures> {
    let rho = state_at(cfg, pt)?;
    let gd_lower = gd_lower_bound_from(&bloch_decomposition(&rho)?, cfg.gd_convention);
    let gd_exact = if cfg.oracle_enabled {
        let raw = gd_exact(&rho, cfg.oracle_restarts, cfg.seed.wrapping_add(row as u64))?.value;
        // Rescale the raw distance to the dataset's convention so the two
        // discord columns are directly comparable.
        Some(match cfg.gd_convention.prefactor {
            GdPrefactor::Raw => raw,
            GdPrefactor::Paper => 2.0 * raw,
        })
    } else {
        None
    };
    Ok(Measures { negativity: negativity(&rho), gd_lower, gd_exact })
}

fn base_meta(cfg: &ExperimentConfig) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    put("code_version", CODE_VERSION.to_string());
    put("initial_state", "qutrit Bell state (|00>+|11>+|22>)/sqrt(3)".into());
    put("family_a", cfg.family_a.to_string());
    put("family_b", cfg.family_b.to_string());
    put("q1", cfg.q_a.to_string());
    put("q2", cfg.q_b.to_string());
    put("t", cfg.time.to_string());
    put("sweep_mode", cfg.sweep_mode.to_string());
    put("gd_convention", cfg.gd_convention.prefactor.to_string());
    put("gd_clamp_nonnegative", cfg.gd_convention.clamp_nonnegative.to_string());
    put("oracle_enabled", cfg.oracle_enabled.to_string());
    if cfg.oracle_enabled {
        put("oracle_restarts", cfg.oracle_restarts.to_string());
        put("gd_exact_scaling", format!("raw distance x{}", if cfg.gd_convention.prefactor == GdPrefactor::Paper { 2 } else { 1 }));
    }
    put("seed", cfg.seed.to_string());
    put("gamma", "1 - exp(-q t)".into());
    put("repair.trit_flip_weight", "sqrt(gamma/3)".into());
    put("repair.depolarizing_operators", "Weyl set Y^a Z^b, Z = diag(1, w, w^2)".into());
    put("repair.gd_eigenvalue_sum", "d1 - 1 largest eigenvalues".into());
    put("repair.gd_norm_weight", "2/d2".into());
    m
}

fn run_grid(cfg: &ExperimentConfig) -> Result<SweepDataset> {
    cfg.validate()?;
    let points = grid_points(cfg);
    // Rows are independent; collecting an indexed parallel iterator keeps
    // them in grid order regardless of scheduling.
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, &pt)| measure_row(cfg, pt, i))
        .collect::<Result<Vec<_>>>()?;
    let mut columns = Columns {
        t: points.iter().map(|p| p.t).collect(),
        q1: points.iter().map(|p| p.q1).collect(),
        q2: points.iter().map(|p| p.q2).collect(),
        negativity: rows.iter().map(|r| r.negativity).collect(),
        gd_lower: rows.iter().map(|r| r.gd_lower).collect(),
        gd_exact: None,
    };
    if cfg.oracle_enabled {
        columns.gd_exact = Some(rows.iter().map(|r| r.gd_exact.unwrap_or(f64::NAN)).collect());
    }
    let ds = SweepDataset { meta: base_meta(cfg), columns };
    ds.check()?;
    Ok(ds)
}

/// Sweep over time (and optionally one rate).
pub fn time_sweep(cfg: &ExperimentConfig) -> Result<SweepDataset> {
    match cfg.sweep_mode {
        SweepMode::Time | SweepMode::RateTime => run_grid(cfg),
        SweepMode::RateGrid => Err(Error::config("sweep_mode", "time_sweep needs mode time or rate_time")),
    }
}

/// Cartesian (q1, q2) grid at fixed time.
pub fn rate_grid(cfg: &ExperimentConfig) -> Result<SweepDataset> {
    match cfg.sweep_mode {
        SweepMode::RateGrid => run_grid(cfg),
        _ => Err(Error::config("sweep_mode", "rate_grid needs mode rate_grid")),
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepDataset> {
    match cfg.sweep_mode {
        SweepMode::RateGrid => rate_grid(cfg),
        _ => time_sweep(cfg),
    }
}

/// Runs every panel of a preset with shared convention, oracle and seed settings.
pub fn run_preset(preset: &Preset, template: &ExperimentConfig) -> Result<Vec<(String, SweepDataset)>> {
    preset
        .panels()
        .into_iter()
        .map(|panel| {
            let cfg = ExperimentConfig {
                gd_convention: template.gd_convention,
                oracle_enabled: template.oracle_enabled,
                oracle_restarts: template.oracle_restarts,
                seed: template.seed,
                ..panel.config
            };
            let mut ds = run_sweep(&cfg)?;
            ds.meta.insert("preset".into(), preset.name.into());
            ds.meta.insert("panel".into(), panel.name.into());
            if let Some(note) = preset.note {
                ds.meta.insert("preset_note".into(), note.into());
            }
            Ok((format!("{}_{}", preset.name, panel.name), ds))
        })
        .collect()
}

/// Which normalized measure is larger at a time point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Negativity,
    Gd,
    Tie,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub definition: String,
    pub family_a: String,
    pub family_b: String,
    pub q1: f64,
    pub q2: f64,
    pub gd_convention: String,
    pub times: Vec<f64>,
    /// N(t)/N(0); `None` when N(0) = 0.
    pub negativity_normalized: Option<Vec<f64>>,
    /// GD(t)/GD(0); `None` when GD(0) = 0.
    pub gd_normalized: Option<Vec<f64>>,
    pub winners: Vec<Winner>,
    /// Interpolated times at which the more robust measure changes.
    pub crossovers: Vec<f64>,
    pub verdict: Winner,
    pub negativity_wins: usize,
    pub gd_wins: usize,
    pub ties: usize,
}

/// Normalized curves closer than this count as a tie.
pub const ROBUSTNESS_TIE_TOL: f64 = 1e-12;

pub const ROBUSTNESS_DEFINITION: &str = "a measure is more robust at time t when its value \
normalized by its t = 0 value is larger; ties within 1e-12";

/// Compares initial-value-normalized negativity and GD lower-bound curves.
pub fn robustness_report(cfg: &ExperimentConfig) -> Result<RobustnessReport> {
    let (q1, q2) = match (cfg.q_a.fixed_value(), cfg.q_b.fixed_value()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::config("qa/qb", "robustness report needs fixed decay rates")),
    };
    let ds = time_sweep(cfg)?;
    let c = &ds.columns;
    let normalize = |col: &[f64]| -> Option<Vec<f64>> {
        let first = *col.first()?;
        (first > 0.0).then(|| col.iter().map(|v| v / first).collect())
    };
    // The curve is normalized by its value at the first grid time.
    let neg = normalize(&c.negativity);
    let gd = normalize(&c.gd_lower);
    let winners: Vec<Winner> = (0..ds.len())
        .map(|i| match (&neg, &gd) {
            (Some(n), Some(g)) => {
                let diff = n[i] - g[i];
                if diff.abs() <= ROBUSTNESS_TIE_TOL {
                    Winner::Tie
                } else if diff > 0.0 {
                    Winner::Negativity
                } else {
                    Winner::Gd
                }
            }
            _ => Winner::Undefined,
        })
        .collect();

    let mut crossovers = Vec::new();
    if let (Some(n), Some(g)) = (&neg, &gd) {
        let mut last: Option<(usize, Winner)> = None;
        for (i, &w) in winners.iter().enumerate() {
            if !matches!(w, Winner::Negativity | Winner::Gd) {
                continue;
            }
            if let Some((j, prev)) = last {
                if prev != w {
                    let (d0, d1) = (n[j] - g[j], n[i] - g[i]);
                    let frac = d0 / (d0 - d1);
                    crossovers.push(c.t[j] + frac * (c.t[i] - c.t[j]));
                }
            }
            last = Some((i, w));
        }
    }

    let count = |w: Winner| winners.iter().filter(|&&x| x == w).count();
    let (nw, gw, ties) = (count(Winner::Negativity), count(Winner::Gd), count(Winner::Tie));
    let verdict = if neg.is_none() || gd.is_none() {
        Winner::Undefined
    } else if nw > gw {
        Winner::Negativity
    } else if gw > nw {
        Winner::Gd
    } else {
        Winner::Tie
    };
    Ok(RobustnessReport {
        definition: ROBUSTNESS_DEFINITION.into(),
        family_a: cfg.family_a.to_string(),
        family_b: cfg.family_b.to_string(),
        q1,
        q2,
        gd_convention: cfg.gd_convention.prefactor.to_string(),
        times: c.t.clone(),
        negativity_normalized: neg,
        gd_normalized: gd,
        winners,
        crossovers,
        verdict,
        negativity_wins: nw,
        gd_wins: gw,
        ties,
    })
}

impl RobustnessReport {
    /// Index of the grid time closest to `t`.
    pub fn index_near(&self, t: f64) -> usize {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}
