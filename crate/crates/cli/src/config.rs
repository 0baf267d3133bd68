//! Run configuration: a single JSON document, optionally overridden by flags.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use dipole_core::quantize::{SearchOptions, DEFAULT_ROOT_TOLERANCE, DEFAULT_SCAN_POINTS};
use dipole_core::{Frame, SystemParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid range `{0}` (expected `a`, `a..b` or `a..=b` with a <= b)")]
    Range(String),
    #[error("invalid tolerance override `{0}` (expected name=value)")]
    ToleranceSyntax(String),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error("invalid value for {field}: {message}")]
    Invalid { field: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json|csv)")),
        }
    }
}

/// Inclusive integer interval, written `[lo, hi]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange<T>(pub T, pub T);

impl<T: Copy> IntRange<T> {
    pub fn to_range(self) -> RangeInclusive<T> {
        self.0..=self.1
    }
}

impl<T: fmt::Display> fmt::Display for IntRange<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.0, self.1)
    }
}

/// Parses `a`, `a..b` or `a..=b`; both forms of the pair are inclusive.
pub fn parse_range<T>(s: &str) -> Result<IntRange<T>, ConfigError>
where
    T: FromStr + PartialOrd + Copy,
{
    let bad = || ConfigError::Range(s.to_string());
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: T = lo.trim().parse().map_err(|_| bad())?;
    let hi: T = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(IntRange(lo, hi))
}

/// Pass/fail thresholds of `validate`, all overridable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// |χ + θ²/4 − 2|τ| − 2 − 2n|
    pub quantization: f64,
    /// Relative distance between cubic and recurrence roots.
    pub cubic_recurrence: f64,
    /// Relative rotating-vs-static difference at Ω = 0.
    pub frame_limit: f64,
    /// Absolute error of the −Ωℓ coupling.
    pub page_werner: f64,
    /// Normalized ODE residual at allowed frequencies.
    pub ode_residual: f64,
    /// Minimum normalized residual after a 1% frequency perturbation.
    pub perturbation_floor: f64,
    pub eigen_relative: f64,
    pub eigen_absolute: f64,
    /// Relative bisection tolerance of the root search.
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quantization: 1e-10,
            cubic_recurrence: 1e-10,
            frame_limit: 1e-13,
            page_werner: 1e-13,
            ode_residual: 1e-8,
            perturbation_floor: 1e-3,
            eigen_relative: 1e-4,
            eigen_absolute: 1e-6,
            root: DEFAULT_ROOT_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "quantization",
        "cubic_recurrence",
        "frame_limit",
        "page_werner",
        "ode_residual",
        "perturbation_floor",
        "eigen_relative",
        "eigen_absolute",
        "root",
    ];

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        let slot = match name {
            "quantization" => &mut self.quantization,
            "cubic_recurrence" => &mut self.cubic_recurrence,
            "frame_limit" => &mut self.frame_limit,
            "page_werner" => &mut self.page_werner,
            "ode_residual" => &mut self.ode_residual,
            "perturbation_floor" => &mut self.perturbation_floor,
            "eigen_relative" => &mut self.eigen_relative,
            "eigen_absolute" => &mut self.eigen_absolute,
            "root" => &mut self.root,
            other => return Err(ConfigError::UnknownTolerance(other.to_string())),
        };
        *slot = value;
        Ok(())
    }
}

/// Parses `name=value` with a finite, nonnegative value.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), ConfigError> {
    let bad = || ConfigError::ToleranceSyntax(s.to_string());
    let (name, value) = s.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad());
    }
    let value: f64 = value.trim().parse().map_err(|_| bad())?;
    if !value.is_finite() || value < 0.0 {
        return Err(bad());
    }
    Ok((name.to_string(), value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleToggles {
    pub eigensolver: bool,
    pub ode_residual: bool,
}

impl Default for OracleToggles {
    fn default() -> Self {
        Self {
            eigensolver: true,
            ode_residual: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavefunctionSpec {
    pub n: u32,
    pub l: i32,
    pub root_index: usize,
    pub grid_points: usize,
    /// Upper end of the dimensionless coordinate.
    pub y_max: f64,
    pub normalized: bool,
}

impl Default for WavefunctionSpec {
    fn default() -> Self {
        Self {
            n: 1,
            l: 0,
            root_index: 0,
            grid_points: 201,
            y_max: 10.0,
            normalized: false,
        }
    }
}

/// Values taken by one `SystemParams` field in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<f64>, ConfigError> {
        let invalid = |message: &str| ConfigError::Invalid {
            field: "sweep".into(),
            message: message.into(),
        };
        if let Some(values) = &self.values {
            if values.is_empty() {
                return Err(invalid("values must not be empty"));
            }
            return Ok(values.clone());
        }
        match (self.start, self.stop, self.steps) {
            (Some(start), Some(stop), Some(steps)) if steps >= 1 => Ok(if steps == 1 {
                vec![start]
            } else {
                (0..steps)
                    .map(|i| start + (stop - start) * i as f64 / (steps as f64 - 1.0))
                    .collect()
            }),
            _ => Err(invalid(
                "give either `values` or `start`, `stop` and `steps` >= 1",
            )),
        }
    }
}

/// Sets the `SystemParams` field called `name`.
pub fn set_param(p: &mut SystemParams, name: &str, value: f64) -> Result<(), ConfigError> {
    let slot = match name {
        "mass" => &mut p.mass,
        "polarizability" => &mut p.polarizability,
        "charge_density" => &mut p.charge_density,
        "magnetic_field" => &mut p.magnetic_field,
        "linear" => &mut p.linear,
        "kratzer_depth" => &mut p.kratzer_depth,
        "kratzer_length" => &mut p.kratzer_length,
        "axial_wavenumber" => &mut p.axial_wavenumber,
        "angular_velocity" => &mut p.angular_velocity,
        other => {
            return Err(ConfigError::Invalid {
                field: "sweep.parameter".into(),
                message: format!("unknown parameter `{other}`"),
            })
        }
    };
    *slot = value;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: SystemParams,
    pub frame: Frame,
    pub n_range: IntRange<u32>,
    pub l_range: IntRange<i32>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub oracles: OracleToggles,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_cap: Option<f64>,
    pub scan_points: usize,
    /// Nodes of the finite-difference grid used by `validate`.
    pub grid_points: usize,
    pub wavefunction: WavefunctionSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams {
                linear: 1.0,
                kratzer_depth: 1.0,
                kratzer_length: 1.0,
                angular_velocity: 0.5,
                ..SystemParams::default()
            },
            frame: Frame::Static,
            n_range: IntRange(1, 3),
            l_range: IntRange(-2, 2),
            format: Format::Csv,
            out: None,
            oracles: OracleToggles::default(),
            tolerances: Tolerances::default(),
            omega_cap: None,
            scan_points: DEFAULT_SCAN_POINTS,
            grid_points: 3000,
            wavefunction: WavefunctionSpec::default(),
            sweep: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let invalid = |field: &str, message: String| ConfigError::Invalid {
            field: field.into(),
            message,
        };
        self.params
            .validate()
            .map_err(|e| invalid("params", e.to_string()))?;
        if self.n_range.0 == 0 {
            return Err(invalid("n_range", "levels start at n = 1".into()));
        }
        if self.n_range.0 > self.n_range.1 {
            return Err(invalid("n_range", format!("empty range {}", self.n_range)));
        }
        if self.l_range.0 > self.l_range.1 {
            return Err(invalid("l_range", format!("empty range {}", self.l_range)));
        }
        if self.scan_points < 2 {
            return Err(invalid("scan_points", "need at least 2".into()));
        }
        if self.grid_points < 64 {
            return Err(invalid("grid_points", "need at least 64".into()));
        }
        if let Some(cap) = self.omega_cap {
            if !(cap > 0.0) {
                return Err(invalid("omega_cap", format!("must be positive, got {cap}")));
            }
        }
        let w = &self.wavefunction;
        if w.n == 0 {
            return Err(invalid("wavefunction.n", "levels start at n = 1".into()));
        }
        if w.grid_points < 2 || !(w.y_max > 0.0) {
            return Err(invalid(
                "wavefunction",
                "need grid_points >= 2 and y_max > 0".into(),
            ));
        }
        for (name, value) in [
            ("quantization", self.tolerances.quantization),
            ("cubic_recurrence", self.tolerances.cubic_recurrence),
            ("frame_limit", self.tolerances.frame_limit),
            ("page_werner", self.tolerances.page_werner),
            ("ode_residual", self.tolerances.ode_residual),
            ("perturbation_floor", self.tolerances.perturbation_floor),
            ("eigen_relative", self.tolerances.eigen_relative),
            ("eigen_absolute", self.tolerances.eigen_absolute),
            ("root", self.tolerances.root),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(invalid(
                    "tolerances",
                    format!("{name} must be finite and >= 0"),
                ));
            }
        }
        if let Some(sweep) = &self.sweep {
            sweep.points()?;
            set_param(&mut self.params.clone(), &sweep.parameter, 0.0)?;
        }
        Ok(())
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            scan_points: self.scan_points,
            root_tolerance: self.tolerances.root,
            omega_cap: self.omega_cap,
        }
    }
}

/// Command-line overrides; `None` leaves the config value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub frame: Option<Frame>,
    pub omega_cap: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub n: Option<IntRange<u32>>,
    pub l: Option<IntRange<i32>>,
    pub root_index: Option<usize>,
    /// Wavefunction sample count.
    pub samples: Option<usize>,
    /// Nodes of the eigensolver grid.
    pub grid_points: Option<usize>,
    pub tolerances: Vec<(String, f64)>,
}

impl Overrides {
    /// Applies flags over `cfg`. `--n`/`--l` also pick the wavefunction level
    /// (lower end of the range).
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        if let Some(frame) = self.frame {
            cfg.frame = frame;
        }
        if let Some(cap) = self.omega_cap {
            cfg.omega_cap = Some(cap);
        }
        if let Some(format) = self.format {
            cfg.format = format;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(n) = self.n {
            cfg.n_range = n;
            cfg.wavefunction.n = n.0;
        }
        if let Some(l) = self.l {
            cfg.l_range = l;
            cfg.wavefunction.l = l.0;
        }
        if let Some(index) = self.root_index {
            cfg.wavefunction.root_index = index;
        }
        if let Some(points) = self.samples {
            cfg.wavefunction.grid_points = points;
        }
        if let Some(points) = self.grid_points {
            cfg.grid_points = points;
        }
        for (name, value) in &self.tolerances {
            cfg.tolerances.set(name, *value)?;
        }
        cfg.check()
    }
}
