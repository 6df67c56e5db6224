//! Flat `key = value` configuration with `#` comments.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};
use std::str::FromStr;

use polaron_core::oracle::{PulseTiming, TruncatedBathConfig, DEFAULT_DIM_CAP};
use polaron_core::{BathModel, Complex64, DensityMatrixST, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    SweepS,
    SweepLambda,
    EffectiveHopping,
    Bangbang,
    OracleCompare,
    Selftest,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::Single,
        Mode::SweepS,
        Mode::SweepLambda,
        Mode::EffectiveHopping,
        Mode::Bangbang,
        Mode::OracleCompare,
        Mode::Selftest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::SweepS => "sweep-s",
            Mode::SweepLambda => "sweep-lambda",
            Mode::EffectiveHopping => "effective-hopping",
            Mode::Bangbang => "bangbang",
            Mode::OracleCompare => "oracle-compare",
            Mode::Selftest => "selftest",
        }
    }
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    CommandLine,
    Default,
}

impl Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::CommandLine => f.write_str("command line"),
            Location::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{location}: expected `key = value`, got `{text}`")]
    Syntax { location: Location, text: String },
    #[error("{location}: unknown key `{key}`")]
    UnknownKey { key: String, location: Location },
    #[error("{location}: key `{key}` given more than once")]
    Duplicate { key: String, location: Location },
    #[error("missing required key `{key}`")]
    Missing { key: String },
    #[error("{location}: invalid value for `{key}`: {reason}")]
    Invalid {
        key: String,
        location: Location,
        reason: String,
    },
}

impl ConfigError {
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::Duplicate { key, .. }
            | ConfigError::Missing { key }
            | ConfigError::Invalid { key, .. } => Some(key),
        }
    }

    pub fn location(&self) -> Option<Location> {
        match self {
            ConfigError::Syntax { location, .. }
            | ConfigError::UnknownKey { location, .. }
            | ConfigError::Duplicate { location, .. }
            | ConfigError::Invalid { location, .. } => Some(*location),
            ConfigError::Missing { .. } => None,
        }
    }
}

/// Evenly spaced sample points `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    pub modes: usize,
    pub n_max: usize,
    pub omega_max: f64,
    pub lambda: f64,
    pub s: f64,
    pub j: f64,
    pub epsilon: f64,
    pub dim_cap: usize,
    pub bb_time: f64,
    pub cycles: Vec<usize>,
    pub timing: PulseTiming,
    pub compare_tmax: f64,
    pub compare_dt: f64,
}

impl OracleSettings {
    pub fn bath(&self) -> polaron_core::Result<TruncatedBathConfig> {
        TruncatedBathConfig::discretized(
            self.lambda,
            self.s,
            self.modes,
            self.omega_max,
            self.n_max,
            self.j,
            self.epsilon,
        )
        .and_then(|c| c.with_dim_cap(self.dim_cap))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub bath: BathModel,
    pub j_hop: f64,
    pub t_max: f64,
    pub dt: f64,
    pub initial: DensityMatrixST,
    /// Scattering times for `sweep-s`.
    pub s_values: Vec<f64>,
    /// Couplings for `sweep-lambda` and the hopping-vs-s table.
    pub lambda_values: Vec<f64>,
    /// Scattering times for the hopping-vs-coupling table.
    pub hopping_s_values: Vec<f64>,
    pub lambda_range: Range,
    pub s_range: Range,
    pub oracle: OracleSettings,
    pub seed: u64,
    pub svg: bool,
}

impl ExperimentConfig {
    pub fn grid(&self) -> TimeGrid {
        TimeGrid::new(self.t_max, self.dt).expect("validated at parse time")
    }

    pub fn compare_grid(&self) -> TimeGrid {
        TimeGrid::new(self.oracle.compare_tmax, self.oracle.compare_dt).expect("validated at parse time")
    }

    /// Resolved configuration in the input format; parsing it yields `self`.
    pub fn echo(&self) -> String {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let o = &self.oracle;
        let mut out = String::from("# resolved configuration\n");
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a String");
        kv("mode", self.mode.to_string());
        kv("lambda", self.bath.lambda_g.to_string());
        kv("s", self.bath.s.to_string());
        kv("j", self.j_hop.to_string());
        kv("omega_c", self.bath.omega_c.to_string());
        kv("geometry_factor", self.bath.geometry_factor.to_string());
        kv("tmax", self.t_max.to_string());
        kv("dt", self.dt.to_string());
        kv("rho_ss", self.initial.rho_ss.to_string());
        kv("re_rho_st", self.initial.rho_st.re.to_string());
        kv("im_rho_st", self.initial.rho_st.im.to_string());
        kv("s_values", list(&self.s_values));
        kv("lambda_values", list(&self.lambda_values));
        kv("hopping_s_values", list(&self.hopping_s_values));
        kv("lambda_min", self.lambda_range.min.to_string());
        kv("lambda_max", self.lambda_range.max.to_string());
        kv("lambda_points", self.lambda_range.points.to_string());
        kv("s_min", self.s_range.min.to_string());
        kv("s_max", self.s_range.max.to_string());
        kv("s_points", self.s_range.points.to_string());
        kv("modes", o.modes.to_string());
        kv("nmax", o.n_max.to_string());
        kv("omega_max", o.omega_max.to_string());
        kv("oracle_lambda", o.lambda.to_string());
        kv("oracle_s", o.s.to_string());
        kv("oracle_j", o.j.to_string());
        kv("epsilon", o.epsilon.to_string());
        kv("dim_cap", o.dim_cap.to_string());
        kv("bb_time", o.bb_time.to_string());
        kv(
            "cycles",
            o.cycles.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        );
        kv("timing", o.timing.to_string());
        kv("compare_tmax", o.compare_tmax.to_string());
        kv("compare_dt", o.compare_dt.to_string());
        kv("seed", self.seed.to_string());
        kv("svg", self.svg.to_string());
        out
    }
}

struct Entry {
    value: String,
    location: Location,
}

struct Raw {
    entries: BTreeMap<String, Entry>,
}

trait Value: Sized {
    fn parse_value(s: &str) -> Result<Self, String>;
}

macro_rules! scalar_value {
    ($($t:ty),*) => {$(
        impl Value for $t {
            fn parse_value(s: &str) -> Result<Self, String> {
                s.parse::<$t>().map_err(|e| format!("`{s}`: {e}"))
            }
        }
    )*};
}
scalar_value!(f64, usize, u64, bool);

impl Value for Mode {
    fn parse_value(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

impl Value for PulseTiming {
    fn parse_value(s: &str) -> Result<Self, String> {
        s.parse().map_err(|e: polaron_core::Error| e.to_string())
    }
}

impl<T: Value> Value for Vec<T> {
    fn parse_value(s: &str) -> Result<Self, String> {
        let items: Vec<&str> = s.split(',').map(str::trim).collect();
        if items.iter().any(|i| i.is_empty()) {
            return Err(format!("`{s}`: empty list element"));
        }
        items.into_iter().map(T::parse_value).collect()
    }
}

impl Raw {
    fn location(&self, key: &str) -> Location {
        self.entries.get(key).map_or(Location::Default, |e| e.location)
    }

    fn take<T: Value>(&mut self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(default),
            Some(e) => T::parse_value(&e.value).map_err(|reason| ConfigError::Invalid {
                key: key.to_string(),
                location: e.location,
                reason,
            }),
        }
    }

    fn take_required<T: Value>(&mut self, key: &str) -> Result<T, ConfigError> {
        let location = self.location(key);
        let e = self
            .entries
            .remove(key)
            .ok_or_else(|| ConfigError::Missing { key: key.to_string() })?;
        T::parse_value(&e.value).map_err(|reason| ConfigError::Invalid {
            key: key.to_string(),
            location,
            reason,
        })
    }
}

/// Splits `text` into entries; later command-line `overrides` replace file values.
fn collect(text: &str, overrides: &[(String, String)]) -> Result<Raw, ConfigError> {
    let mut entries = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let location = Location::Line(i + 1);
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            location,
            text: content.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                location,
                text: content.to_string(),
            });
        }
        let entry = Entry {
            value: value.trim().to_string(),
            location,
        };
        if entries.insert(key.to_string(), entry).is_some() {
            return Err(ConfigError::Duplicate {
                key: key.to_string(),
                location,
            });
        }
    }
    for (key, value) in overrides {
        entries.insert(
            key.clone(),
            Entry {
                value: value.trim().to_string(),
                location: Location::CommandLine,
            },
        );
    }
    Ok(Raw { entries })
}

fn invalid(raw_loc: Location, key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        location: raw_loc,
        reason: reason.into(),
    }
}

/// Resolves a configuration from file text and command-line overrides.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<ExperimentConfig, ConfigError> {
    let mut raw = collect(text, overrides)?;
    let loc: BTreeMap<&'static str, Location> = KEYS.iter().map(|&k| (k, raw.location(k))).collect();
    if let Some((key, e)) = raw.entries.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
        return Err(ConfigError::UnknownKey {
            key: key.clone(),
            location: e.location,
        });
    }

    let mode: Mode = raw.take_required("mode")?;
    let bath = BathModel {
        lambda_g: raw.take("lambda", 1.0)?,
        s: raw.take("s", 1.0)?,
        omega_c: raw.take("omega_c", 1.0)?,
        geometry_factor: raw.take("geometry_factor", 1.0)?,
    };
    let j_hop: f64 = raw.take("j", 1.0)?;
    let t_max: f64 = raw.take("tmax", 50.0)?;
    let dt: f64 = raw.take("dt", 0.005)?;
    let rho_ss: f64 = raw.take("rho_ss", 2.0 / 3.0)?;
    let re_st: f64 = raw.take("re_rho_st", 2f64.sqrt() / 3.0)?;
    let im_st: f64 = raw.take("im_rho_st", 0.0)?;
    let s_values: Vec<f64> = raw.take("s_values", vec![1.0, 10.0, 100.0])?;
    let lambda_values: Vec<f64> = raw.take("lambda_values", vec![0.5, 1.0, 2.0])?;
    let hopping_s_values: Vec<f64> = raw.take("hopping_s_values", vec![1.0, 5.0, 10.0])?;
    let lambda_range = Range {
        min: raw.take("lambda_min", 0.0)?,
        max: raw.take("lambda_max", 2.0)?,
        points: raw.take("lambda_points", 41)?,
    };
    let s_range = Range {
        min: raw.take("s_min", 0.0)?,
        max: raw.take("s_max", 20.0)?,
        points: raw.take("s_points", 81)?,
    };
    let oracle = OracleSettings {
        modes: raw.take("modes", 2)?,
        n_max: raw.take("nmax", 6)?,
        omega_max: raw.take("omega_max", 4.0)?,
        lambda: raw.take("oracle_lambda", 1.0)?,
        s: raw.take("oracle_s", 1.0)?,
        j: raw.take("oracle_j", 0.1)?,
        epsilon: raw.take("epsilon", 0.0)?,
        dim_cap: raw.take("dim_cap", DEFAULT_DIM_CAP)?,
        bb_time: raw.take("bb_time", 2.0)?,
        cycles: raw.take("cycles", vec![4, 8, 16, 32, 64])?,
        timing: raw.take("timing", PulseTiming::Symmetric)?,
        compare_tmax: raw.take("compare_tmax", 10.0)?,
        compare_dt: raw.take("compare_dt", 0.01)?,
    };
    let seed: u64 = raw.take("seed", 0)?;
    let svg: bool = raw.take("svg", false)?;
    debug_assert!(raw.entries.is_empty());

    let at = |k: &'static str| loc[k];
    let core_key = |name: &str| -> &'static str {
        match name {
            "lambda_g" => "lambda",
            "omega_c" => "omega_c",
            "geometry_factor" => "geometry_factor",
            _ => "s",
        }
    };
    bath.validate().map_err(|e| match e {
        polaron_core::Error::InvalidParameter { name, reason } => invalid(at(core_key(name)), core_key(name), reason),
        other => invalid(at("lambda"), "lambda", other.to_string()),
    })?;
    if !j_hop.is_finite() {
        return Err(invalid(at("j"), "j", "must be finite"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(invalid(at("tmax"), "tmax", "must be > 0"));
    }
    TimeGrid::new(t_max, dt).map_err(|e| invalid(at("dt"), "dt", e.to_string()))?;
    if !(0.0..=1.0).contains(&rho_ss) {
        return Err(invalid(
            at("rho_ss"),
            "rho_ss",
            format!("population {rho_ss} outside [0, 1]"),
        ));
    }
    let initial = DensityMatrixST::new(rho_ss, Complex64::new(re_st, im_st))
        .map_err(|e| invalid(at("re_rho_st"), "re_rho_st", e.to_string()))?;

    for (key, values) in [("s_values", &s_values), ("hopping_s_values", &hopping_s_values)] {
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(invalid(at(key), key, "scattering times must be finite and >= 0"));
        }
    }
    if lambda_values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(invalid(
            at("lambda_values"),
            "lambda_values",
            "couplings must be finite and >= 0",
        ));
    }
    for (prefix, r) in [("lambda", &lambda_range), ("s", &s_range)] {
        let key_min: &'static str = if prefix == "lambda" { "lambda_min" } else { "s_min" };
        let key_pts: &'static str = if prefix == "lambda" {
            "lambda_points"
        } else {
            "s_points"
        };
        if !(r.min >= 0.0) || !(r.max >= r.min) || !r.max.is_finite() {
            return Err(invalid(at(key_min), key_min, "need 0 <= min <= max"));
        }
        if r.points == 0 {
            return Err(invalid(at(key_pts), key_pts, "need at least one point"));
        }
    }
    oracle.bath().map_err(|e| {
        let key = match &e {
            polaron_core::Error::DimensionCap { .. } => "dim_cap",
            polaron_core::Error::InvalidParameter { name, .. } => match *name {
                "lambda_g" => "oracle_lambda",
                "s" => "oracle_s",
                "modes" => "modes",
                "omega_max" => "omega_max",
                _ => "oracle_j",
            },
            _ => "modes",
        };
        invalid(at(key), key, e.to_string())
    })?;
    if !(oracle.bb_time > 0.0) || !oracle.bb_time.is_finite() {
        return Err(invalid(at("bb_time"), "bb_time", "must be > 0"));
    }
    if oracle.cycles.len() < 2 || oracle.cycles.contains(&0) {
        return Err(invalid(
            at("cycles"),
            "cycles",
            "need at least two positive cycle counts",
        ));
    }
    TimeGrid::new(oracle.compare_tmax, oracle.compare_dt)
        .map_err(|e| invalid(at("compare_dt"), "compare_dt", e.to_string()))?;

    Ok(ExperimentConfig {
        mode,
        bath,
        j_hop,
        t_max,
        dt,
        initial,
        s_values,
        lambda_values,
        hopping_s_values,
        lambda_range,
        s_range,
        oracle,
        seed,
        svg,
    })
}

pub const KEYS: [&str; 35] = [
    "mode",
    "lambda",
    "s",
    "j",
    "omega_c",
    "geometry_factor",
    "tmax",
    "dt",
    "rho_ss",
    "re_rho_st",
    "im_rho_st",
    "s_values",
    "lambda_values",
    "hopping_s_values",
    "lambda_min",
    "lambda_max",
    "lambda_points",
    "s_min",
    "s_max",
    "s_points",
    "modes",
    "nmax",
    "omega_max",
    "oracle_lambda",
    "oracle_s",
    "oracle_j",
    "epsilon",
    "dim_cap",
    "bb_time",
    "cycles",
    "timing",
    "compare_tmax",
    "compare_dt",
    "seed",
    "svg",
];
