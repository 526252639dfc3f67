//! Experiment configuration and the figure presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::ChannelFamily;
use crate::error::{Error, Result};
use crate::measures::GdConvention;
use crate::oracle::DEFAULT_RESTARTS;

pub const DEFAULT_TIME_MAX: f64 = 5.0;
pub const DEFAULT_TIME_STEPS: usize = 200;
pub const DEFAULT_RATE_MAX: f64 = 2.0;
pub const DEFAULT_RATE_STEPS: usize = 50;
/// Rate held fixed on one side in the time panels.
pub const PRESET_FIXED_RATE: f64 = 0.5;
/// Time of the rate-grid panels.
pub const PRESET_GRID_TIME: f64 = 1.0;

/// A parameter that is either held fixed or swept over an inclusive grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Fixed(f64),
    Range { min: f64, max: f64, steps: usize },
}

impl Axis {
    pub fn range(min: f64, max: f64, steps: usize) -> Self {
        Axis::Range { min, max, steps }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Axis::Range { .. })
    }

    pub fn fixed_value(&self) -> Option<f64> {
        match *self {
            Axis::Fixed(v) => Some(v),
            Axis::Range { .. } => None,
        }
    }

    /// Grid points, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(v) => vec![v],
            Axis::Range { min, max, steps } => {
                let h = (max - min) / (steps - 1) as f64;
                (0..steps).map(|i| if i + 1 == steps { max } else { min + h * i as f64 }).collect()
            }
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let check = |v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(field, format!("value {v} must be finite and non-negative")))
            }
        };
        match *self {
            Axis::Fixed(v) => check(v),
            Axis::Range { min, max, steps } => {
                check(min)?;
                check(max)?;
                if min > max {
                    return Err(Error::config(field, format!("range min {min} exceeds max {max}")));
                }
                if steps < 2 {
                    return Err(Error::config(field, format!("range needs at least 2 steps, got {steps}")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Fixed(v) => write!(f, "{v}"),
            Axis::Range { min, max, steps } => write!(f, "{min}:{max}:{steps}"),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Accepts a plain decimal or `min:max:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::config("axis", format!("`{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let axis = match parts.as_slice() {
            [v] => Axis::Fixed(v.trim().parse().map_err(|_| bad("not a number"))?),
            [lo, hi, n] => Axis::Range {
                min: lo.trim().parse().map_err(|_| bad("bad range minimum"))?,
                max: hi.trim().parse().map_err(|_| bad("bad range maximum"))?,
                steps: n.trim().parse().map_err(|_| bad("bad step count"))?,
            },
            _ => return Err(bad("expected a value or min:max:steps")),
        };
        axis.validate("axis").map_err(|e| match e {
            Error::Config { reason, .. } => bad(&reason),
            other => other,
        })?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Both rates fixed, time swept.
    Time,
    /// One rate swept, time fixed or swept.
    RateTime,
    /// Both rates swept on a Cartesian grid at fixed time.
    RateGrid,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Time => "time",
            SweepMode::RateTime => "rate_time",
            SweepMode::RateGrid => "rate_grid",
        }
    }

    /// The mode implied by which axes are ranges.
    pub fn infer(q_a: &Axis, q_b: &Axis, time: &Axis) -> Result<Self> {
        match (q_a.is_range(), q_b.is_range(), time.is_range()) {
            (false, false, _) => Ok(SweepMode::Time),
            (true, false, _) | (false, true, _) => Ok(SweepMode::RateTime),
            (true, true, false) => Ok(SweepMode::RateGrid),
            (true, true, true) => Err(Error::config("t", "a rate grid needs a fixed time")),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family_a: ChannelFamily,
    pub family_b: ChannelFamily,
    pub q_a: Axis,
    pub q_b: Axis,
    pub time: Axis,
    pub sweep_mode: SweepMode,
    pub gd_convention: GdConvention,
    pub oracle_enabled: bool,
    pub oracle_restarts: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Builds a config whose sweep mode follows from the axes.
    pub fn new(family_a: ChannelFamily, family_b: ChannelFamily, q_a: Axis, q_b: Axis, time: Axis) -> Result<Self> {
        let sweep_mode = SweepMode::infer(&q_a, &q_b, &time)?;
        let cfg = Self {
            family_a,
            family_b,
            q_a,
            q_b,
            time,
            sweep_mode,
            gd_convention: GdConvention::default(),
            oracle_enabled: false,
            oracle_restarts: DEFAULT_RESTARTS,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, fam) in [("channel-a", self.family_a), ("channel-b", self.family_b)] {
            if fam == ChannelFamily::Custom {
                return Err(Error::config(field, "sweeps need one of the named channel families"));
            }
        }
        self.q_a.validate("qa")?;
        self.q_b.validate("qb")?;
        self.time.validate("t")?;
        let implied = SweepMode::infer(&self.q_a, &self.q_b, &self.time)?;
        if implied != self.sweep_mode {
            return Err(Error::config(
                "sweep_mode",
                format!("axes imply `{implied}` but `{}` was requested", self.sweep_mode),
            ));
        }
        if self.oracle_enabled && self.oracle_restarts == 0 {
            return Err(Error::config("restarts", "oracle needs at least one restart"));
        }
        Ok(())
    }
}

/// One of the ten published figure parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub family_a: ChannelFamily,
    pub family_b: ChannelFamily,
    /// Annotation recorded in dataset metadata, if any.
    pub note: Option<&'static str>,
}

use ChannelFamily::{Dephasing, Depolarizing, TritFlip, TritPhaseFlip};

pub const PRESETS: [Preset; 10] = [
    Preset {
        name: "fig1",
        family_a: Dephasing,
        family_b: Dephasing,
        note: Some("caption reads 'phase-flip channels'; dephasing used, following the section it illustrates"),
    },
    Preset { name: "fig2", family_a: TritFlip, family_b: TritFlip, note: None },
    Preset { name: "fig3", family_a: TritPhaseFlip, family_b: TritPhaseFlip, note: None },
    Preset { name: "fig4", family_a: Depolarizing, family_b: Depolarizing, note: None },
    Preset { name: "fig5", family_a: Dephasing, family_b: TritFlip, note: None },
    Preset { name: "fig6", family_a: Dephasing, family_b: TritPhaseFlip, note: None },
    Preset { name: "fig7", family_a: Dephasing, family_b: Depolarizing, note: None },
    Preset { name: "fig8", family_a: TritFlip, family_b: TritPhaseFlip, note: None },
    Preset { name: "fig9", family_a: TritFlip, family_b: Depolarizing, note: None },
    Preset { name: "fig10", family_a: TritPhaseFlip, family_b: Depolarizing, note: None },
];

pub fn preset(name: &str) -> Result<Preset> {
    PRESETS
        .iter()
        .copied()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::config("name", format!("unknown preset `{name}` (expected fig1..fig10)")))
}

/// A named sub-experiment of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub name: &'static str,
    pub config: ExperimentConfig,
}

fn default_times() -> Axis {
    Axis::range(0.0, DEFAULT_TIME_MAX, DEFAULT_TIME_STEPS)
}

fn default_rates() -> Axis {
    Axis::range(0.0, DEFAULT_RATE_MAX, DEFAULT_RATE_STEPS)
}

impl Preset {
    pub fn is_identical(&self) -> bool {
        self.family_a == self.family_b
    }

    /// Panels in figure order: rate-time surface(s), then the rate grid.
    pub fn panels(&self) -> Vec<Panel> {
        let fixed = Axis::Fixed(PRESET_FIXED_RATE);
        let build = |qa, qb, t| {
            ExperimentConfig::new(self.family_a, self.family_b, qa, qb, t).expect("preset axes are valid")
        };
        let mut panels = vec![Panel { name: "q1_time", config: build(default_rates(), fixed, default_times()) }];
        if !self.is_identical() {
            panels.push(Panel { name: "q2_time", config: build(fixed, default_rates(), default_times()) });
        }
        panels.push(Panel {
            name: "rate_grid",
            config: build(default_rates(), default_rates(), Axis::Fixed(PRESET_GRID_TIME)),
        });
        panels
    }

    /// Fixed-rate time curve used for the robustness comparison.
    pub fn robustness_config(&self) -> ExperimentConfig {
        let fixed = Axis::Fixed(PRESET_FIXED_RATE);
        ExperimentConfig::new(self.family_a, self.family_b, fixed, fixed, default_times()).expect("valid axes")
    }
}
