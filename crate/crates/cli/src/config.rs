//! Command-line flags, `key = value` config files, and validation.
//!
//! Every option can come from a flag or from the config file; flags win.
//! The merged configuration is fully validated before any computation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use conical_ab::model::{Spin, SystemParams};
use conical_ab::routes::RouteRegistry;
use conical_ab::spectrum::ExtensionParameter;

use crate::output::Format;
use crate::CliError;

/// Largest number of channels one run may request.
pub const MAX_CHANNELS: i64 = 100_000;
/// Largest number of k points or angles one run may request.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "conical-ab", version, about = "Spin-1/2 Aharonov-Bohm problem on a cone: spectra, scattering and cross-checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-channel regime, extension parameter and bound state
    Spectrum(SpectrumArgs),
    /// Per-channel phase shifts and S-matrix over a list of momenta
    Scatter(ScatterArgs),
    /// Partial-wave amplitude and differential cross section
    Xsec(XsecArgs),
    /// Cross-check all bound-state routes on the built-in grid
    Verify(VerifyArgs),
    /// Delta-shell bound states over a sweep of core radii
    Shell(ShellArgs),
}

#[derive(Args, Debug, Default)]
pub struct OutputArgs {
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Plain-text `key = value` file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct PhysicsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub flux: Option<f64>,
    /// +1 or -1
    #[arg(long, allow_hyphen_values = true)]
    pub spin: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// Flux-core radius
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_max: Option<i64>,
}

#[derive(Args, Debug, Default)]
pub struct MomentumArgs {
    /// Comma-separated momenta, in units of 1/r0 unless --absolute-k
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Option<Vec<f64>>,
    /// START:STOP:COUNT, logarithmically spaced, endpoints included
    #[arg(long)]
    pub k_range: Option<String>,
    /// Read k in absolute units
    #[arg(long)]
    pub absolute_k: bool,
    /// Use this λ (a number or "inf") in every extension channel
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_override: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Use this λ (a number or "inf") in every extension channel
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_override: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Default)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub momentum: MomentumArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Default)]
pub struct XsecArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub momentum: MomentumArgs,
    /// Comma-separated angles in radians, or START:STOP:COUNT evenly spaced
    #[arg(long, allow_hyphen_values = true)]
    pub angles: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    /// Relative tolerance for identity-class routes
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<String>,
    /// Comma-separated route names to run, in registry order
    #[arg(long, value_delimiter = ',')]
    pub routes: Option<Vec<String>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Default)]
pub struct ShellArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Comma-separated core radii; defaults to r0, r0/10, r0/100
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r0_sweep: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Values read from a config file, keyed with `-` normalised to `_`.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(CliError::Invalid(format!("config line {}: empty key", i + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Invalid(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Invalid(format!(
                "unknown config key {k:?} for this command (allowed: {})",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Invalid(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| parse_list(v).map_err(|e| CliError::Invalid(format!("config key {key}: {e}"))))
            .transpose()
    }

    fn raw(&self, key: &str) -> Option<String> {
        self.entries.get(key).cloned()
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

fn load(out: &OutputArgs) -> Result<ConfigFile, CliError> {
    match &out.config {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

const PHYSICS_KEYS: &[&str] = &["alpha", "flux", "spin", "mass", "r0", "n_min", "n_max"];
const OUTPUT_KEYS: &[&str] = &["format", "output"];
const MOMENTUM_KEYS: &[&str] = &["k", "k_range", "absolute_k", "lambda_override"];

fn keys(groups: &[&[&'static str]], extra: &[&'static str]) -> Vec<&'static str> {
    groups.iter().flat_map(|g| g.iter().copied()).chain(extra.iter().copied()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn output_config(out: &OutputArgs, file: &ConfigFile, default: Format) -> Result<OutputConfig, CliError> {
    let format = match out.format.clone().or(file.raw("format")) {
        Some(f) => f.parse::<Format>().map_err(CliError::Invalid)?,
        None => default,
    };
    let output = out.output.clone().or(file.raw("output").map(PathBuf::from));
    if let Some(path) = &output {
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
        if path.is_dir() || parent.is_some_and(|d| !d.is_dir()) {
            return Err(CliError::Invalid(format!("cannot write output to {}", path.display())));
        }
    }
    Ok(OutputConfig { format, output })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsConfig {
    pub params: SystemParams,
    pub n_min: i64,
    pub n_max: i64,
}

fn physics_config(a: &PhysicsArgs, file: &ConfigFile) -> Result<PhysicsConfig, CliError> {
    let alpha = a.alpha.map(Ok).unwrap_or_else(|| file.get("alpha").map(|v| v.unwrap_or(1.0)))?;
    let flux = a.flux.map(Ok).unwrap_or_else(|| file.get("flux").map(|v| v.unwrap_or(0.0)))?;
    let spin = a.spin.map(Ok).unwrap_or_else(|| file.get("spin").map(|v| v.unwrap_or(1)))?;
    let mass = a.mass.map(Ok).unwrap_or_else(|| file.get("mass").map(|v| v.unwrap_or(1.0)))?;
    let r0 = a.r0.map(Ok).unwrap_or_else(|| file.get("r0").map(|v| v.unwrap_or(1.0)))?;
    let n_min = a.n_min.map(Ok).unwrap_or_else(|| file.get("n_min").map(|v| v.unwrap_or(-5)))?;
    let n_max = a.n_max.map(Ok).unwrap_or_else(|| file.get("n_max").map(|v| v.unwrap_or(5)))?;
    let spin = Spin::try_from(spin).map_err(|e| CliError::Invalid(e.to_string()))?;
    let params = SystemParams::new(alpha, flux, spin, mass, r0).map_err(|e| CliError::Invalid(e.to_string()))?;
    if n_min > n_max {
        return Err(CliError::Invalid(format!("n_min ({n_min}) must not exceed n_max ({n_max})")));
    }
    if n_max.saturating_sub(n_min) >= MAX_CHANNELS {
        return Err(CliError::Invalid(format!("at most {MAX_CHANNELS} channels per run")));
    }
    Ok(PhysicsConfig { params, n_min, n_max })
}

fn parse_lambda(s: Option<String>) -> Result<Option<ExtensionParameter>, CliError> {
    s.map(|v| v.parse::<ExtensionParameter>().map_err(|e| CliError::Invalid(e.to_string())))
        .transpose()
}

fn parse_bool(key: &str, s: &str) -> Result<bool, CliError> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Invalid(format!("config key {key}: expected true or false, got {other:?}"))),
    }
}

/// START:STOP:COUNT, log-spaced, endpoints included.
pub fn parse_log_range(s: &str) -> Result<Vec<f64>, CliError> {
    let (start, stop, count) = parse_triple(s)?;
    if !(start > 0.0 && stop > 0.0) {
        return Err(CliError::Invalid(format!("k range endpoints must be positive, got {s:?}")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..count)
        .map(|i| match i {
            0 => start,
            i if i == count - 1 => stop,
            i => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

/// START:STOP:COUNT evenly spaced with endpoints, or a comma list.
pub fn parse_angles(s: &str) -> Result<Vec<f64>, CliError> {
    if s.contains(':') {
        let (start, stop, count) = parse_triple(s)?;
        if count == 1 {
            return Ok(vec![start]);
        }
        return Ok((0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect());
    }
    let v: Vec<f64> = parse_list(s).map_err(|e| CliError::Invalid(format!("angles: {e}")))?;
    if v.iter().any(|a| !a.is_finite()) {
        return Err(CliError::Invalid("angles must be finite".into()));
    }
    Ok(v)
}

fn parse_triple(s: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Invalid(format!("expected START:STOP:COUNT, got {s:?}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() || count == 0 || count > MAX_POINTS {
        return Err(bad());
    }
    Ok((start, stop, count))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumConfig {
    /// Absolute wavenumbers.
    pub ks: Vec<f64>,
    pub lambda_override: Option<ExtensionParameter>,
}

fn momentum_config(m: &MomentumArgs, file: &ConfigFile, r0: f64) -> Result<MomentumConfig, CliError> {
    let list = match &m.k {
        Some(v) => Some(v.clone()),
        None => file.get_list::<f64>("k")?,
    };
    let range = m.k_range.clone().or(file.raw("k_range"));
    let raw = match (list, range) {
        (Some(_), Some(_)) => return Err(CliError::Invalid("give either k or k_range, not both".into())),
        (Some(v), None) => v,
        (None, Some(r)) => parse_log_range(&r)?,
        (None, None) => vec![1.0],
    };
    if raw.is_empty() || raw.len() > MAX_POINTS {
        return Err(CliError::Invalid("k list must be non-empty".into()));
    }
    if let Some(bad) = raw.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
        return Err(CliError::Invalid(format!("k must be positive and finite, got {bad}")));
    }
    let absolute = if m.absolute_k {
        true
    } else {
        match file.raw("absolute_k") {
            Some(v) => parse_bool("absolute_k", &v)?,
            None => false,
        }
    };
    let ks: Vec<f64> = if absolute { raw } else { raw.iter().map(|k| k / r0).collect() };
    if ks.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(CliError::Invalid("k/r0 overflows".into()));
    }
    let lambda_override = parse_lambda(m.lambda_override.clone().or(file.raw("lambda_override")))?;
    Ok(MomentumConfig { ks, lambda_override })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    pub physics: PhysicsConfig,
    pub lambda_override: Option<ExtensionParameter>,
    pub out: OutputConfig,
}

impl SpectrumConfig {
    pub fn from_args(a: &SpectrumArgs) -> Result<Self, CliError> {
        let file = load(&a.out)?;
        file.check_keys(&keys(&[PHYSICS_KEYS, OUTPUT_KEYS], &["lambda_override"]))?;
        Ok(Self {
            physics: physics_config(&a.physics, &file)?,
            lambda_override: parse_lambda(a.lambda_override.clone().or(file.raw("lambda_override")))?,
            out: output_config(&a.out, &file, Format::Csv)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterConfig {
    pub physics: PhysicsConfig,
    pub momentum: MomentumConfig,
    pub out: OutputConfig,
}

impl ScatterConfig {
    pub fn from_args(a: &ScatterArgs) -> Result<Self, CliError> {
        let file = load(&a.out)?;
        file.check_keys(&keys(&[PHYSICS_KEYS, OUTPUT_KEYS, MOMENTUM_KEYS], &[]))?;
        let physics = physics_config(&a.physics, &file)?;
        let momentum = momentum_config(&a.momentum, &file, physics.params.core_radius)?;
        Ok(Self {
            physics,
            momentum,
            out: output_config(&a.out, &file, Format::Csv)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XsecConfig {
    pub physics: PhysicsConfig,
    pub momentum: MomentumConfig,
    pub angles: Vec<f64>,
    pub out: OutputConfig,
}

pub const DEFAULT_ANGLES: &str = "0:3.141592653589793:19";

impl XsecConfig {
    pub fn from_args(a: &XsecArgs) -> Result<Self, CliError> {
        let file = load(&a.out)?;
        file.check_keys(&keys(&[PHYSICS_KEYS, OUTPUT_KEYS, MOMENTUM_KEYS], &["angles"]))?;
        let physics = physics_config(&a.physics, &file)?;
        let momentum = momentum_config(&a.momentum, &file, physics.params.core_radius)?;
        let angles = parse_angles(
            &a.angles
                .clone()
                .or(file.raw("angles"))
                .unwrap_or_else(|| DEFAULT_ANGLES.to_string()),
        )?;
        if angles.is_empty() || angles.len() > MAX_POINTS {
            return Err(CliError::Invalid("angle grid must be non-empty".into()));
        }
        Ok(Self {
            physics,
            momentum,
            angles,
            out: output_config(&a.out, &file, Format::Csv)?,
        })
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tolerance: f64,
    pub routes: Vec<String>,
    pub out: OutputConfig,
}

impl VerifyConfig {
    pub fn from_args(a: &VerifyArgs) -> Result<Self, CliError> {
        let file = load(&a.out)?;
        file.check_keys(&keys(&[OUTPUT_KEYS], &["tolerance", "routes"]))?;
        let tolerance = match a.tolerance.clone().or(file.raw("tolerance")) {
            Some(t) => t
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("tolerance must be a number, got {t:?}")))?,
            None => DEFAULT_TOLERANCE,
        };
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Invalid(format!("tolerance must be positive and finite, got {tolerance}")));
        }
        let registry = RouteRegistry::default();
        let routes = match &a.routes {
            Some(r) => r.clone(),
            None => match file.get_list::<String>("routes")? {
                Some(r) => r,
                None => registry.names().iter().map(|s| s.to_string()).collect(),
            },
        };
        let mut check = RouteRegistry::default();
        let names: Vec<&str> = routes.iter().map(String::as_str).collect();
        check.retain(&names).map_err(|e| CliError::Invalid(e.to_string()))?;
        if names.is_empty() {
            return Err(CliError::Invalid("at least one route is required".into()));
        }
        Ok(Self {
            tolerance,
            routes,
            out: output_config(&a.out, &file, Format::Json)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellConfig {
    pub physics: PhysicsConfig,
    pub radii: Vec<f64>,
    pub out: OutputConfig,
}

impl ShellConfig {
    pub fn from_args(a: &ShellArgs) -> Result<Self, CliError> {
        let file = load(&a.out)?;
        file.check_keys(&keys(&[PHYSICS_KEYS, OUTPUT_KEYS], &["r0_sweep"]))?;
        let physics = physics_config(&a.physics, &file)?;
        let radii = match &a.r0_sweep {
            Some(v) => v.clone(),
            None => match file.get_list::<f64>("r0_sweep")? {
                Some(v) => v,
                None => {
                    let r0 = physics.params.core_radius;
                    vec![r0, r0 / 10.0, r0 / 100.0]
                }
            },
        };
        if radii.is_empty() || radii.len() > MAX_POINTS {
            return Err(CliError::Invalid("r0 sweep must be non-empty".into()));
        }
        if let Some(bad) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(CliError::Invalid(format!("core radii must be positive and finite, got {bad}")));
        }
        Ok(Self {
            physics,
            radii,
            out: output_config(&a.out, &file, Format::Csv)?,
        })
    }
}
