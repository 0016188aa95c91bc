//! Flags, the key=value config file, and the resolved run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use fhl_core::params::hardy_constant;
use fhl_core::{FracParams, LambdaMode};

use crate::data::DataSpec;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Constants,
    Curves,
    Symbol,
    KernelDump,
    Solve,
    ProbeExistence,
    Summability,
    Harnack,
    Semilinear,
    Nonexistence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "belowJ")]
    BelowJ,
    #[value(name = "atP")]
    AtP,
    #[value(name = "aboveP")]
    AboveP,
}

impl From<ModeArg> for LambdaMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::BelowJ => LambdaMode::BelowJ,
            ModeArg::AtP => LambdaMode::AtP,
            ModeArg::AboveP => LambdaMode::AboveP,
        }
    }
}

/// Fractional Hardy laboratory: constants, kernels and radial experiments for
/// (−Δ)^s u − λu/|x|^{2s} = f on the unit ball.
#[derive(Debug, Parser)]
#[command(name = "fhl", version, args_override_self = true)]
pub struct Args {
    /// What to run; may also come from the config file.
    #[arg(value_enum)]
    pub command: Option<CommandName>,

    /// Flat key=value file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Dimension N ≥ 2.
    #[arg(long = "N", allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Fractional order s ∈ (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Absolute Hardy coupling λ.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambda_frac")]
    pub lambda: Option<f64>,
    /// λ as a fraction of Λ_{N,s}.
    #[arg(long = "lambda-frac", allow_negative_numbers = true)]
    pub lambda_frac: Option<f64>,
    /// Summability exponent m.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Exponent σ of the singular term h/u^σ.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// ε in the summability data r^{−(N−ε)/m}.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Exponent ν of the data r^{−ν} in existence probes.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Power β for the symbol check.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Kernel order κ for kernel-dump (default 2s).
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Number of mesh elements M.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Mesh grading exponent g, nodes (i/M)^g.
    #[arg(long)]
    pub grade: Option<f64>,
    /// Load f in the data mini-language.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Singular-term data h in the data mini-language.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// λ placement for summability.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Refinement levels for summability.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Harnack exponent q.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Harnack radii, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub r0: Option<Vec<f64>>,
    /// Semilinear: run n = 1..n_max.
    #[arg(long = "n-max", conflicts_with = "doubling")]
    pub n_max: Option<usize>,
    /// Semilinear: run n = 1, 2, 4, …, 2^J instead.
    #[arg(long)]
    pub doubling: Option<u32>,
    /// Step cap of the iterative scheme.
    #[arg(long = "k-max")]
    pub k_max: Option<usize>,
    /// Number of m values for curves.
    #[arg(long = "m-points")]
    pub m_points: Option<usize>,
    /// Random identity checks for constants.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Linear solver for solve.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// CSV output path (curves, kernel and profile tables).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Exit with 4 when a verdict contradicts the expected one.
    #[arg(long)]
    pub assert: bool,
    /// symbol: compare with the quadrature evaluation of the operator.
    #[arg(long = "check-quadrature")]
    pub check_quadrature: bool,
    /// Record wall-clock timings in the report (off by default so reports are reproducible).
    #[arg(long)]
    pub timings: bool,
}

const SWITCHES: [&str; 3] = ["assert", "check-quadrature", "timings"];

const VALUED: [&str; 29] = [
    "N", "s", "lambda", "lambda-frac", "m", "sigma", "eps", "nu", "beta", "kappa", "nodes", "grade", "f", "h", "mode", "levels",
    "q", "r0", "n-max", "doubling", "k-max", "m-points", "samples", "seed", "method", "out", "report", "command", "config",
];

/// Read a key=value file. Blank lines and lines starting with `#` are skipped.
pub fn read_config_file(path: &std::path::Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::param("config", format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::param("config", format!("line {} is not key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "config" {
            return Err(CliError::param("config", "config files cannot include other config files"));
        }
        if !VALUED.contains(&k) && !SWITCHES.contains(&k) {
            return Err(CliError::param(k, format!("unknown key in {}", path.display())));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = a.strip_prefix("--config=") {
            return Some(rest.to_string());
        }
    }
    None
}

/// Outcome of parsing that is not a configuration: help or version text.
pub enum Parsed {
    Run(Box<Args>),
    Info(String),
}

/// Parse argv, with the entries of `--config FILE` placed before the command-line flags so
/// that the flags win.
pub fn parse_args(argv: &[String]) -> Result<Parsed, CliError> {
    let mut merged = vec![argv.first().cloned().unwrap_or_else(|| "fhl".into())];
    let mut file_command = None;
    if let Some(path) = config_path(argv) {
        for (k, v) in read_config_file(std::path::Path::new(&path))? {
            if k == "command" {
                file_command = Some(v);
            } else if SWITCHES.contains(&k.as_str()) {
                match v.as_str() {
                    "true" => merged.push(format!("--{k}")),
                    "false" => {}
                    other => return Err(CliError::param(&k, format!("'{other}' is not true or false"))),
                }
            } else {
                merged.push(format!("--{k}={v}"));
            }
        }
    }
    merged.extend(argv.iter().skip(1).cloned());
    let mut args = match Args::try_parse_from(&merged) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
                    Err(CliError::Param(first))
                }
            };
        }
    };
    if args.command.is_none() {
        if let Some(c) = file_command {
            args.command = Some(CommandName::from_str(&c, false).map_err(|_| CliError::param("command", format!("unknown command '{c}'")))?);
        }
    }
    Ok(Parsed::Run(Box::new(args)))
}

/// Validated configuration shared by every command, embedded in all outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub version: &'static str,
    pub command: CommandName,
    #[serde(rename = "N")]
    pub n: u32,
    pub s: f64,
    pub lambda: Option<f64>,
    pub lambda_frac: Option<f64>,
    pub m: Option<f64>,
    pub sigma: Option<f64>,
    pub eps: Option<f64>,
    pub nu: Option<f64>,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub nodes: Option<usize>,
    pub grade: Option<f64>,
    pub f: Option<String>,
    pub h: Option<String>,
    pub mode: Option<&'static str>,
    pub levels: Option<usize>,
    pub q: Option<f64>,
    pub r0: Option<Vec<f64>>,
    pub n_max: Option<usize>,
    pub doubling: Option<u32>,
    pub k_max: Option<usize>,
    pub m_points: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub assert: bool,
    pub check_quadrature: bool,
    pub timings: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub report: Option<PathBuf>,
    #[serde(skip)]
    pub params: FracParams,
    #[serde(skip)]
    pub f_data: Option<DataSpec>,
    #[serde(skip)]
    pub h_data: Option<DataSpec>,
    #[serde(skip)]
    pub lambda_mode: Option<LambdaMode>,
}

fn positive(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(x) if !(x > 0.0) || !x.is_finite() => Err(CliError::param(name, format!("{x} must be positive and finite"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_args(a: Args) -> Result<Self, CliError> {
        let command = a.command.ok_or_else(|| CliError::param("command", "missing (constants, curves, symbol, kernel-dump, solve, probe-existence, summability, harnack, semilinear, nonexistence)"))?;
        let n = a.n.ok_or_else(|| CliError::param("N", "missing"))?;
        if n < 2 {
            return Err(CliError::param("N", format!("{n} is not supported (N >= 2)")));
        }
        let n = u32::try_from(n).map_err(|_| CliError::param("N", format!("{n} is too large")))?;
        let s = a.s.ok_or_else(|| CliError::param("s", "missing"))?;
        if !(s > 0.0 && s < 1.0) {
            return Err(CliError::param("s", format!("{s} outside (0, 1)")));
        }
        let params = FracParams::new(n, s).map_err(|e| CliError::param("s", e))?;
        let big = hardy_constant(&params);
        let lambda = match (a.lambda, a.lambda_frac) {
            (Some(l), _) => {
                if !(l >= 0.0) || !l.is_finite() {
                    return Err(CliError::param("lambda", format!("{l} must be nonnegative and finite")));
                }
                Some(l)
            }
            (None, Some(x)) => {
                if !(x >= 0.0) || !x.is_finite() {
                    return Err(CliError::param("lambda-frac", format!("{x} must be nonnegative and finite")));
                }
                Some(x * big)
            }
            (None, None) => None,
        };
        if let Some(m) = a.nodes {
            if m < 16 {
                return Err(CliError::param("nodes", format!("{m} must be at least 16")));
            }
        }
        if let Some(g) = a.grade {
            if !(1.0..=6.0).contains(&g) {
                return Err(CliError::param("grade", format!("{g} outside [1, 6]")));
            }
        }
        positive("sigma", a.sigma)?;
        positive("kappa", a.kappa)?;
        positive("m", a.m)?;
        if let Some(q) = a.q {
            if !(q >= 1.0) || !q.is_finite() {
                return Err(CliError::param("q", format!("{q} must be at least 1")));
            }
        }
        if let Some(r) = &a.r0 {
            if r.is_empty() || r.iter().any(|&x| !(x > 0.0 && 2.0 * x <= 1.0)) {
                return Err(CliError::param("r0", "every radius must satisfy 0 < 2 r0 <= 1"));
            }
        }
        for (name, v) in [("levels", a.levels), ("n-max", a.n_max), ("k-max", a.k_max), ("m-points", a.m_points)] {
            if v == Some(0) {
                return Err(CliError::param(name, "must be at least 1"));
            }
        }
        let f_data = a.f.as_deref().map(|t| DataSpec::parse("f", t)).transpose()?;
        let h_data = a.h.as_deref().map(|t| DataSpec::parse("h", t)).transpose()?;
        let lambda_mode = a.mode.map(LambdaMode::from);
        Ok(RunConfig {
            version: env!("CARGO_PKG_VERSION"),
            command,
            n,
            s,
            lambda,
            lambda_frac: lambda.map(|l| l / big),
            m: a.m,
            sigma: a.sigma,
            eps: a.eps,
            nu: a.nu,
            beta: a.beta,
            kappa: a.kappa,
            nodes: a.nodes,
            grade: a.grade,
            f: a.f,
            h: a.h,
            mode: lambda_mode.map(|m| m.name()),
            levels: a.levels,
            q: a.q,
            r0: a.r0,
            n_max: a.n_max,
            doubling: a.doubling,
            k_max: a.k_max,
            m_points: a.m_points,
            samples: a.samples,
            seed: a.seed,
            method: a.method,
            assert: a.assert,
            check_quadrature: a.check_quadrature,
            timings: a.timings,
            out: a.out,
            report: a.report,
            params,
            f_data,
            h_data,
            lambda_mode,
        })
    }

    pub fn require_lambda(&self) -> Result<f64, CliError> {
        self.lambda.ok_or_else(|| CliError::param("lambda", "missing (give --lambda or --lambda-frac)"))
    }

    pub fn require<T: Copy>(&self, name: &str, v: Option<T>) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::param(name, "missing"))
    }

    /// The set fields as `key=value` pairs, in a fixed order.
    pub fn pairs(&self) -> BTreeMap<String, String> {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = BTreeMap::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                match v {
                    serde_json::Value::Null => {}
                    serde_json::Value::String(s) => {
                        out.insert(k, s);
                    }
                    other => {
                        out.insert(k, other.to_string());
                    }
                }
            }
        }
        out
    }
}
