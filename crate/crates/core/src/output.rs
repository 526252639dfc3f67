//! CSV and JSON serialization of sweep datasets.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use crate::error::Error;
use crate::sweep::SweepDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::config("format", format!("unknown format `{s}` (expected csv|json)"))),
        }
    }
}

/// Formats `v` with 12 significant digits, `%.12g` style.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn sanitize(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

pub fn to_csv(ds: &SweepDataset) -> String {
    let mut out = String::new();
    out.push_str("# qnoise sweep dataset\n");
    for (k, v) in &ds.meta {
        let _ = writeln!(out, "# {}: {}", sanitize(k), sanitize(v));
    }
    let c = &ds.columns;
    out.push_str("t,q1,q2,negativity,gd_lower");
    if c.gd_exact.is_some() {
        out.push_str(",gd_exact");
    }
    out.push('\n');
    for i in 0..ds.len() {
        let mut row = [c.t[i], c.q1[i], c.q2[i], c.negativity[i], c.gd_lower[i]]
            .iter()
            .map(|&v| format_sig12(v))
            .collect::<Vec<_>>();
        if let Some(ex) = &c.gd_exact {
            row.push(format_sig12(ex[i]));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(ds: &SweepDataset) -> String {
    let mut s = serde_json::to_string_pretty(ds).expect("dataset serializes");
    s.push('\n');
    s
}

pub fn render(ds: &SweepDataset, format: Format) -> String {
    match format {
        Format::Csv => to_csv(ds),
        Format::Json => to_json(ds),
    }
}

pub fn from_json(s: &str) -> serde_json::Result<SweepDataset> {
    serde_json::from_str(s)
}

/// Writes `contents` to `path`, refusing to replace an existing file unless `force`.
pub fn write_file(path: &Path, contents: &str, force: bool) -> io::Result<()> {
    if path.exists() && !force {
        return Err(io::Error::new(
            io::ErrorKind::AlreadyExists,
            format!("{} exists (pass --force to overwrite)", path.display()),
        ));
    }
    fs::write(path, contents)
}

/// Serializes a dataset to `path`.
pub fn write_dataset(ds: &SweepDataset, format: Format, path: &Path, force: bool) -> io::Result<()> {
    write_file(path, &render(ds, format), force)
}
