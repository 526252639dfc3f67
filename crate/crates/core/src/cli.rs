//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation (or computation) failure, 2 usage
//! error, 3 I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{preset, Axis, ExperimentConfig, Preset};
use crate::error::Error;
use crate::measures::{gd_lower_bound, GdConvention, GdPrefactor};
use crate::oracle::{gd_exact, DEFAULT_RESTARTS};
use crate::output::{render, write_file, Format};
use crate::sweep::{robustness_report, run_preset, run_sweep, state_at, Point, RobustnessReport, SweepDataset};
use crate::validation::{run_validation, ValidationOptions};

/// Default output directory when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "QNOISE_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::Domain(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qnoise", version, about = "Qutrit correlation dynamics under local noise channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a custom sweep.
    Run(RunArgs),
    /// Reproduce one of the figure parameterizations (fig1..fig10).
    Preset(PresetArgs),
    /// Run the consistency checks and print a summary table.
    Validate(ValidateArgs),
    /// Compare the GD lower bound with the exact optimizer value at one point.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file (run) or directory (preset); standard output when omitted
    /// and QNOISE_OUTPUT_DIR is unset. `-` forces standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat `key = value` file with the same keys as the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "channel-a")]
    channel_a: Option<String>,
    #[arg(long = "channel-b")]
    channel_b: Option<String>,
    /// Decay rate of A: a value or min:max:steps.
    #[arg(long)]
    qa: Option<String>,
    /// Decay rate of B: a value or min:max:steps.
    #[arg(long)]
    qb: Option<String>,
    /// Time: a value or min:max:steps.
    #[arg(long)]
    t: Option<String>,
    /// paper or raw.
    #[arg(long = "gd-convention")]
    gd_convention: Option<String>,
    /// Report the unclamped GD bound.
    #[arg(long = "no-clamp")]
    no_clamp: bool,
    /// Add an exact-GD column (slow).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    restarts: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PresetArgs {
    #[arg(long)]
    name: String,
    #[arg(long = "gd-convention", default_value = "paper")]
    gd_convention: String,
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random states compared against the oracle.
    #[arg(long = "oracle-states", default_value_t = 10)]
    oracle_states: usize,
    /// Use the unnormalized trit-flip operators (expected to fail).
    #[arg(long = "trit-flip-erratum")]
    trit_flip_erratum: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long = "channel-a", default_value = "dephasing")]
    channel_a: String,
    #[arg(long = "channel-b", default_value = "dephasing")]
    channel_b: String,
    #[arg(long, default_value_t = 0.5)]
    qa: f64,
    #[arg(long, default_value_t = 0.5)]
    qb: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Where results go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputTarget {
    Stdout,
    Path(PathBuf),
    /// `QNOISE_OUTPUT_DIR`; file names are derived from the run.
    DefaultDir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub format: Format,
    pub target: OutputTarget,
    pub force: bool,
}

/// A fully parsed and validated command line.
#[derive(Debug, Clone, PartialEq)]
pub enum CliInvocation {
    Run { config: ExperimentConfig, output: OutputSpec },
    Preset { preset: Preset, template: ExperimentConfig, output: OutputSpec },
    Validate(ValidationOptions),
    Oracle { config: ExperimentConfig, restarts: usize, seed: u64 },
}

fn usage(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{field}: {msg}"))
}

fn parse_output(o: &OutputArgs) -> Result<OutputSpec, CliError> {
    let format = o.format.parse::<Format>().map_err(|e| usage("format", e))?;
    let target = match &o.output {
        Some(p) if p.as_os_str() == "-" => OutputTarget::Stdout,
        Some(p) => OutputTarget::Path(p.clone()),
        None => match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => OutputTarget::DefaultDir(PathBuf::from(dir)),
            _ => OutputTarget::Stdout,
        },
    };
    Ok(OutputSpec { format, target, force: o.force })
}

const CONFIG_KEYS: [&str; 10] =
    ["channel-a", "channel-b", "qa", "qb", "t", "gd-convention", "no-clamp", "oracle", "restarts", "seed"];

/// Parses a flat `key = value` config file. Blank lines and `#` comments are ignored.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if !CONFIG_KEYS.contains(&k) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_bool(field: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(usage(field, format!("expected true/false, got `{v}`"))),
    }
}

fn resolve_run(a: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let file = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
    let family = |key: &str, flag: &Option<String>| -> Result<_, CliError> {
        let v = pick(flag, key).ok_or_else(|| usage(key, "required"))?;
        v.parse().map_err(|e| usage(key, e))
    };
    let axis = |key: &str, flag: &Option<String>, default: &str| -> Result<Axis, CliError> {
        pick(flag, key).unwrap_or_else(|| default.to_string()).parse().map_err(|e| usage(key, e))
    };
    let family_a = family("channel-a", &a.channel_a)?;
    let family_b = family("channel-b", &a.channel_b)?;
    let q_a = axis("qa", &a.qa, "0.5")?;
    let q_b = axis("qb", &a.qb, "0.5")?;
    let time = axis("t", &a.t, "0:5:200")?;

    let mut cfg = ExperimentConfig::new(family_a, family_b, q_a, q_b, time).map_err(|e| match e {
        Error::Config { field, reason } => usage(&field, reason),
        other => other.into(),
    })?;
    if let Some(v) = pick(&a.gd_convention, "gd-convention") {
        cfg.gd_convention.prefactor = v.parse::<GdPrefactor>().map_err(|e| usage("gd-convention", e))?;
    }
    let no_clamp = a.no_clamp || file.get("no-clamp").map(|v| parse_bool("no-clamp", v)).transpose()?.unwrap_or(false);
    cfg.gd_convention.clamp_nonnegative = !no_clamp;
    cfg.oracle_enabled = a.oracle || file.get("oracle").map(|v| parse_bool("oracle", v)).transpose()?.unwrap_or(false);
    if let Some(v) = pick(&a.restarts, "restarts") {
        cfg.oracle_restarts = v.parse().map_err(|_| usage("restarts", format!("not an integer: `{v}`")))?;
    }
    if let Some(v) = pick(&a.seed, "seed") {
        cfg.seed = v.parse().map_err(|_| usage("seed", format!("not an integer: `{v}`")))?;
    }
    cfg.validate().map_err(CliError::from)?;
    Ok(cfg)
}

/// Parses `argv` (including the program name) into an invocation.
pub fn parse_args<I, T>(argv: I) -> Result<CliInvocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Run(a) => Ok(CliInvocation::Run { config: resolve_run(&a)?, output: parse_output(&a.out)? }),
        Command::Preset(a) => {
            let p = preset(&a.name).map_err(|e| usage("name", e))?;
            let mut template = p.robustness_config();
            template.gd_convention = GdConvention {
                prefactor: a.gd_convention.parse().map_err(|e| usage("gd-convention", e))?,
                clamp_nonnegative: true,
            };
            template.oracle_enabled = a.oracle;
            template.oracle_restarts = a.restarts;
            template.seed = a.seed;
            template.validate().map_err(CliError::from)?;
            Ok(CliInvocation::Preset { preset: p, template, output: parse_output(&a.out)? })
        }
        Command::Validate(a) => Ok(CliInvocation::Validate(ValidationOptions {
            restarts: a.restarts,
            seed: a.seed,
            oracle_states: a.oracle_states,
            trit_flip_erratum: a.trit_flip_erratum,
            ..ValidationOptions::default()
        })),
        Command::Oracle(a) => {
            let fa = a.channel_a.parse().map_err(|e| usage("channel-a", e))?;
            let fb = a.channel_b.parse().map_err(|e| usage("channel-b", e))?;
            let config = ExperimentConfig::new(fa, fb, Axis::Fixed(a.qa), Axis::Fixed(a.qb), Axis::Fixed(a.t))
                .map_err(CliError::from)?;
            if a.restarts == 0 {
                return Err(usage("restarts", "must be at least 1"));
            }
            Ok(CliInvocation::Oracle { config, restarts: a.restarts, seed: a.seed })
        }
    }
}

fn report_to_csv_comments(r: &RobustnessReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# robustness: {}/{} at q1={} q2={}", r.family_a, r.family_b, r.q1, r.q2);
    let _ = writeln!(s, "# robustness.definition: {}", r.definition);
    let _ = writeln!(s, "# robustness.verdict: {:?}", r.verdict);
    let _ = writeln!(
        s,
        "# robustness.points: negativity {} / gd {} / tie {}",
        r.negativity_wins, r.gd_wins, r.ties
    );
    let cross: Vec<String> = r.crossovers.iter().map(|t| format!("{t:.6}")).collect();
    let _ = writeln!(s, "# robustness.crossovers: [{}]", cross.join(", "));
    s
}

/// Renders the preset output exactly as it is written to standard output.
pub fn render_preset(panels: &[(String, SweepDataset)], report: &RobustnessReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (name, ds) in panels {
                let _ = writeln!(out, "# dataset: {name}");
                out.push_str(&render(ds, Format::Csv));
                out.push('\n');
            }
            out.push_str(&report_to_csv_comments(report));
            out
        }
        Format::Json => {
            let panels: BTreeMap<&str, &SweepDataset> = panels.iter().map(|(n, d)| (n.as_str(), d)).collect();
            let v = serde_json::json!({ "panels": panels, "robustness": report });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err)
}

fn execute_run(cfg: &ExperimentConfig, spec: &OutputSpec, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ds = run_sweep(cfg)?;
    let text = render(&ds, spec.format);
    match &spec.target {
        OutputTarget::Stdout => emit(stdout, &text),
        OutputTarget::Path(p) => write_file(p, &text, spec.force).map_err(io_err),
        OutputTarget::DefaultDir(dir) => {
            let name = format!("run_{}_{}.{}", cfg.family_a, cfg.family_b, spec.format.extension());
            write_file(&dir.join(name), &text, spec.force).map_err(io_err)
        }
    }
}

fn write_preset_dir(
    dir: &Path,
    preset: &Preset,
    panels: &[(String, SweepDataset)],
    report: &RobustnessReport,
    spec: &OutputSpec,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err)?;
    for (name, ds) in panels {
        let path = dir.join(format!("{name}.{}", spec.format.extension()));
        write_file(&path, &render(ds, spec.format), spec.force).map_err(io_err)?;
    }
    let report_json = serde_json::to_string_pretty(report).expect("serializable") + "\n";
    write_file(&dir.join(format!("{}_robustness.json", preset.name)), &report_json, spec.force).map_err(io_err)
}

fn execute_preset(
    preset: &Preset,
    template: &ExperimentConfig,
    spec: &OutputSpec,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let panels = run_preset(preset, template)?;
    let mut rcfg = preset.robustness_config();
    rcfg.gd_convention = template.gd_convention;
    let report = robustness_report(&rcfg)?;
    match &spec.target {
        OutputTarget::Stdout => emit(stdout, &render_preset(&panels, &report, spec.format)),
        OutputTarget::Path(dir) | OutputTarget::DefaultDir(dir) => write_preset_dir(dir, preset, &panels, &report, spec),
    }
}

fn execute_oracle(cfg: &ExperimentConfig, restarts: usize, seed: u64, stdout: &mut dyn Write) -> Result<(), CliError> {
    let pt = Point {
        t: cfg.time.fixed_value().unwrap_or(0.0),
        q1: cfg.q_a.fixed_value().unwrap_or(0.0),
        q2: cfg.q_b.fixed_value().unwrap_or(0.0),
    };
    let rho = state_at(cfg, pt)?;
    let bound = gd_lower_bound(&rho, GdConvention::RAW)?;
    let res = gd_exact(&rho, restarts, seed)?;
    let text = format!(
        "state: bell -> {}/{} at q1={} q2={} t={}\n\
         gd_lower (raw): {:.12}\n\
         gd_exact (raw): {:.12}\n\
         exact - bound:  {:.3e}\n\
         restarts: {} (best #{}), seed: {}, residual gradient: {:.3e}\n",
        cfg.family_a,
        cfg.family_b,
        pt.q1,
        pt.q2,
        pt.t,
        bound,
        res.value,
        res.value - bound,
        res.restarts_used,
        res.best_restart,
        res.seed,
        res.residual_gradient,
    );
    emit(stdout, &text)
}

/// Executes a parsed invocation, writing human-facing output to `stdout`.
pub fn execute(inv: &CliInvocation, stdout: &mut dyn Write) -> Result<(), CliError> {
    match inv {
        CliInvocation::Run { config, output } => execute_run(config, output, stdout),
        CliInvocation::Preset { preset, template, output } => execute_preset(preset, template, output, stdout),
        CliInvocation::Validate(opts) => {
            let summary = run_validation(opts)?;
            emit(stdout, &format!("{summary}\n"))?;
            if summary.all_passed() {
                Ok(())
            } else {
                let names: Vec<_> = summary.failures().map(|c| c.name.as_str()).collect();
                Err(CliError::Failed(format!("failed checks: {}", names.join(", "))))
            }
        }
        CliInvocation::Oracle { config, restarts, seed } => execute_oracle(config, *restarts, *seed, stdout),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // Let clap print help/version itself with a zero exit.
    if let Err(e) = Cli::try_parse_from(&argv) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = e.print();
            return EXIT_OK;
        }
    }
    let result = parse_args(argv).and_then(|inv| {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        execute(&inv, &mut lock)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("qnoise: {e}");
            e.exit_code()
        }
    }
}
