//! Run configuration: defaults, `key = value` config files, flag
//! overrides, validation, and grid construction.

use std::fmt;
use std::path::PathBuf;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Pulsed,
    Continuous,
    Rabi,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "pulsed" => Ok(Scheme::Pulsed),
            "continuous" => Ok(Scheme::Continuous),
            "rabi" => Ok(Scheme::Rabi),
            other => Err(CliError::Config(format!(
                "scheme must be pulsed|continuous|rabi, got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Pulsed => "pulsed",
            Scheme::Continuous => "continuous",
            Scheme::Rabi => "rabi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Lin,
    Log,
}

impl GridScale {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "lin" => Ok(GridScale::Lin),
            "log" => Ok(GridScale::Log),
            other => Err(CliError::Config(format!(
                "grid_scale must be lin|log, got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for GridScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridScale::Lin => "lin",
            GridScale::Log => "log",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega_a: f64,
    pub lambda: f64,
    pub big_lambda: f64,
    pub scheme: Scheme,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub grid_scale: GridScale,
    pub n_modes: usize,
    pub horizon: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            omega_a: 3.0,
            lambda: 0.1,
            big_lambda: 1.0,
            scheme: Scheme::Pulsed,
            grid_min: 0.0,
            grid_max: 500.0,
            grid_points: 501,
            grid_scale: GridScale::Lin,
            n_modes: 4000,
            horizon: 500.0,
            out: None,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` assignment; unknown keys are hard errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Config(format!("key '{key}': invalid {what} '{value}'"));
        match key {
            "omega_a" => self.omega_a = value.parse().map_err(|_| bad("number"))?,
            "lambda" => self.lambda = value.parse().map_err(|_| bad("number"))?,
            "big_lambda" => self.big_lambda = value.parse().map_err(|_| bad("number"))?,
            "scheme" => self.scheme = Scheme::parse(value)?,
            "grid_min" => self.grid_min = value.parse().map_err(|_| bad("number"))?,
            "grid_max" => self.grid_max = value.parse().map_err(|_| bad("number"))?,
            "grid_points" => self.grid_points = value.parse().map_err(|_| bad("count"))?,
            "grid_scale" => self.grid_scale = GridScale::parse(value)?,
            "n_modes" => self.n_modes = value.parse().map_err(|_| bad("count"))?,
            "horizon" => self.horizon = value.parse().map_err(|_| bad("number"))?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => {
                return Err(CliError::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Parse a config file body: `key = value` lines, `#` comments and
    /// blank lines ignored.
    pub fn apply_file(&mut self, body: &str) -> Result<(), CliError> {
        for (idx, raw) in body.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config line {}: expected 'key = value', got '{line}'",
                    idx + 1
                )));
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.omega_a.is_finite() {
            return Err(CliError::Config(format!(
                "key 'omega_a': must be finite, got {}",
                self.omega_a
            )));
        }
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(CliError::Config(format!(
                "key 'lambda': must be positive, got {}",
                self.lambda
            )));
        }
        if self.big_lambda <= 0.0 || !self.big_lambda.is_finite() {
            return Err(CliError::Config(format!(
                "key 'big_lambda': must be positive, got {}",
                self.big_lambda
            )));
        }
        if self.grid_min.is_nan() || self.grid_max.is_nan() || self.grid_min >= self.grid_max {
            return Err(CliError::Config(format!(
                "key 'grid_min': grid_min = {} must be below grid_max = {}",
                self.grid_min, self.grid_max
            )));
        }
        if self.grid_points < 1 {
            return Err(CliError::Config(
                "key 'grid_points': need at least one point".into(),
            ));
        }
        if self.grid_scale == GridScale::Log && self.grid_min <= 0.0 {
            return Err(CliError::Config(format!(
                "key 'grid_scale': log scale needs grid_min > 0, got {}",
                self.grid_min
            )));
        }
        if self.n_modes < 1 {
            return Err(CliError::Config("key 'n_modes': need at least one mode".into()));
        }
        if self.horizon <= 0.0 || !self.horizon.is_finite() {
            return Err(CliError::Config(format!(
                "key 'horizon': must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }

    pub fn out_path(&self) -> Result<&PathBuf, CliError> {
        self.out
            .as_ref()
            .ok_or_else(|| CliError::Config("key 'out': output path is required".into()))
    }

    /// The control/time grid: grid_points values from grid_min to
    /// grid_max, linear or logarithmic, endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        if n == 1 {
            return vec![self.grid_min];
        }
        let mut out = Vec::with_capacity(n);
        match self.grid_scale {
            GridScale::Lin => {
                let step = (self.grid_max - self.grid_min) / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.grid_min + step * i as f64);
                }
            }
            GridScale::Log => {
                let (la, lb) = (self.grid_min.ln(), self.grid_max.ln());
                for i in 0..n {
                    out.push((la + (lb - la) * i as f64 / (n - 1) as f64).exp());
                }
            }
        }
        out[0] = self.grid_min;
        out[n - 1] = self.grid_max;
        out
    }

    /// `#`-prefixed echo of every key in canonical order.
    pub fn echo_lines(&self) -> Vec<String> {
        use crate::output::fmt_g;
        vec![
            format!("# omega_a = {}", fmt_g(self.omega_a)),
            format!("# lambda = {}", fmt_g(self.lambda)),
            format!("# big_lambda = {}", fmt_g(self.big_lambda)),
            format!("# scheme = {}", self.scheme),
            format!("# grid_min = {}", fmt_g(self.grid_min)),
            format!("# grid_max = {}", fmt_g(self.grid_max)),
            format!("# grid_points = {}", self.grid_points),
            format!("# grid_scale = {}", self.grid_scale),
            format!("# n_modes = {}", self.n_modes),
            format!("# horizon = {}", fmt_g(self.horizon)),
            format!(
                "# out = {}",
                self.out
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default()
            ),
        ]
    }
}
