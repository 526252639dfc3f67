//! Cross-module consistency checks, runnable from the command line.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::channels::{apply_local_channels, evolve, trit_flip_kraus_unnormalized, validate_kraus, ChannelFamily};
use crate::error::Result;
use crate::measures::{gd_lower_bound, negativity, GdConvention};
use crate::oracle::{
    analytic_negativity_dephasing, analytic_negativity_depolarizing, depolarized_bell_weight, gd_exact,
    DEFAULT_RESTARTS,
};
use crate::random::{random_density_matrix, seeded_rng};
use crate::state::{diagnose, make_bell_state, HERMITICITY_TOL, PSD_TOL, TRACE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Random states in the bound-vs-oracle check.
    pub oracle_states: usize,
    /// Random evolutions in the state-validity checks.
    pub evolutions: usize,
    /// Substitute the unnormalized trit-flip operators in the completeness check.
    pub trit_flip_erratum: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { restarts: DEFAULT_RESTARTS, seed: 0, oracle_states: 10, evolutions: 200, trit_flip_erratum: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, tolerance: f64, max_deviation: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), tolerance, max_deviation, passed: max_deviation <= tolerance, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub checks: Vec<CheckResult>,
}

impl ValidationSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  {:>9}  {:>13}  result", "check", "tolerance", "max deviation")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<width$}  {:>9.0e}  {:>13.3e}  {}{}",
                c.name,
                c.tolerance,
                c.max_deviation,
                if c.passed { "PASS" } else { "FAIL" },
                if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) }
            )?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn completeness_checks(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let gammas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let mut out = Vec::new();
    for fam in ChannelFamily::NAMED {
        let erratum = opts.trit_flip_erratum && fam == ChannelFamily::TritFlip;
        let mut worst = (0.0f64, 0.0f64);
        for &g in &gammas {
            let ch = if erratum { trit_flip_kraus_unnormalized(g)? } else { fam.kraus(g)? };
            let dev = validate_kraus(&ch).max_deviation;
            if dev > worst.0 {
                worst = (dev, g);
            }
        }
        let detail = if erratum {
            format!("unnormalized flip weights; deviation 4*gamma/3 = {:.6} at gamma = {}", worst.0, worst.1)
        } else {
            String::new()
        };
        out.push(CheckResult::new(format!("kraus completeness: {fam}"), 1e-12, worst.0, detail));
    }
    Ok(out)
}

fn validity_checks(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let mut rng = seeded_rng(opts.seed);
    let (mut herm, mut tr, mut psd) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..opts.evolutions {
        let rho = random_density_matrix(3, 3, &mut rng);
        let fa = ChannelFamily::NAMED[i % 4];
        let fb = ChannelFamily::NAMED[(i / 4) % 4];
        let ch_a = fa.kraus(rng.random())?;
        let ch_b = fb.kraus(rng.random())?;
        let d = diagnose(apply_local_channels(&rho, &ch_a, &ch_b)?.matrix());
        herm = herm.max(d.hermitian_deviation);
        tr = tr.max(d.trace_deviation);
        psd = psd.max(d.psd_violation());
    }
    let detail = format!("{} random evolutions", opts.evolutions);
    Ok(vec![
        CheckResult::new("evolved state: hermiticity", HERMITICITY_TOL, herm, detail.clone()),
        CheckResult::new("evolved state: unit trace", TRACE_TOL, tr, detail.clone()),
        CheckResult::new("evolved state: positivity", PSD_TOL, psd, detail),
    ])
}

fn closed_form_checks() -> Result<Vec<CheckResult>> {
    let bell = make_bell_state(3)?;
    let grid: Vec<(f64, f64, f64)> = (0..20)
        .flat_map(|i| (0..20).map(move |j| (i, j)))
        .map(|(i, j)| {
            let q = 2.0 * i as f64 / 19.0;
            let t = 5.0 * j as f64 / 19.0;
            (q, 0.5 + 0.75 * q, t)
        })
        .collect();
    let (mut deph, mut depol, mut gd) = (0.0f64, 0.0f64, 0.0f64);
    for &(qa, qb, t) in &grid {
        let rho = evolve(&bell, ChannelFamily::Dephasing, ChannelFamily::Dephasing, qa, qb, t)?;
        deph = deph.max((negativity(&rho) - analytic_negativity_dephasing(qa, qb, t)?).abs());
        let rho = evolve(&bell, ChannelFamily::Depolarizing, ChannelFamily::Depolarizing, qa, qb, t)?;
        depol = depol.max((negativity(&rho) - analytic_negativity_depolarizing(qa, qb, t)?).abs());
        let p = depolarized_bell_weight(qa, qb, t)?;
        gd = gd.max((gd_lower_bound(&rho, GdConvention::RAW)? - 2.0 / 3.0 * p * p).abs());
    }
    let detail = "20 x 20 (q, t) grid";
    Ok(vec![
        CheckResult::new("negativity vs closed form: dephasing", 1e-10, deph, detail),
        CheckResult::new("negativity vs closed form: depolarizing", 1e-10, depol, detail),
        CheckResult::new("gd bound vs closed form: depolarizing", 1e-10, gd, detail),
    ])
}

fn oracle_check(opts: &ValidationOptions) -> Result<CheckResult> {
    let mut rng = seeded_rng(opts.seed.wrapping_add(1));
    let mut gap = f64::NEG_INFINITY;
    for i in 0..opts.oracle_states {
        let rho = random_density_matrix(3, 3, &mut rng);
        let bound = gd_lower_bound(&rho, GdConvention::RAW)?;
        let exact = gd_exact(&rho, opts.restarts, opts.seed.wrapping_add(i as u64))?.value;
        gap = gap.max(bound - exact);
    }
    // The check passes when the bound exceeds the oracle by at most 1e-4.
    Ok(CheckResult::new(
        "gd bound <= oracle",
        1e-4,
        gap.max(0.0),
        format!("{} random states, {} restarts, largest bound - oracle = {gap:.3e}", opts.oracle_states, opts.restarts),
    ))
}

/// Runs every check and collects the results.
pub fn run_validation(opts: &ValidationOptions) -> Result<ValidationSummary> {
    let mut checks = completeness_checks(opts)?;
    checks.extend(validity_checks(opts)?);
    checks.extend(closed_form_checks()?);
    if opts.oracle_states > 0 {
        checks.push(oracle_check(opts)?);
    }
    Ok(ValidationSummary { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ValidationOptions {
        ValidationOptions { restarts: 4, oracle_states: 2, evolutions: 20, ..Default::default() }
    }

    #[test]
    fn default_checks_pass() {
        let s = run_validation(&quick()).unwrap();
        assert!(s.all_passed(), "{s}");
        assert!(s.to_string().contains("gd bound <= oracle"));
    }

    #[test]
    fn erratum_mode_fails_trit_flip_completeness() {
        let s = run_validation(&ValidationOptions { trit_flip_erratum: true, ..quick() }).unwrap();
        let failed: Vec<_> = s.failures().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "kraus completeness: trit-flip");
        assert!((failed[0].max_deviation - 4.0 / 3.0).abs() < 1e-12);
    }
}
