//! TOML run configuration, command-line overrides and resolution against
//! the per-case defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cases::{CaseOptions, ConvergenceDomain, DoubleMachState, SupportSpec, TestCase};
use crate::error::{Error, Result};
use crate::filter::{AdaptiveFilterSettings, FilterMode, IndicatorVariable, LambdaFormula};
use crate::kernel::{support_width, validate_epsilon};
use crate::physics::{GlmSettings, LaxFriedrichs};

pub const MAX_DEGREE: usize = 15;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: String,
    #[serde(default)]
    pub double_mach_state: DoubleMachState,
    /// Width over which the initial double Mach shock is smeared; 0 keeps it sharp.
    #[serde(default)]
    pub double_mach_shock_width: f64,
    #[serde(default)]
    pub convergence_domain: ConvergenceDomain,
    pub degree: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    #[serde(default)]
    pub flux: LaxFriedrichs,
    /// Abort after this many time steps (guards runaway configurations).
    pub max_steps: Option<usize>,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub glm: GlmSettings,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub enabled: Option<bool>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    /// Bandwidth parameter for `eps = cos(pi ((N - N_d)/2) / N)`.
    pub n_d: Option<f64>,
    /// Explicit support half-width; takes precedence over `n_d`.
    pub epsilon: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub mode: Option<FilterMode>,
    pub indicator: Option<IndicatorVariable>,
    pub lambda_formula: Option<LambdaFormula>,
    /// Also filter the initial condition before the first step.
    pub initial_condition: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceKind {
    /// The line `x = y` across the domain.
    Diagonal,
    /// The line `y = const`.
    Horizontal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub kind: SliceKind,
    /// Height of a horizontal slice.
    pub y: Option<f64>,
    /// Primitive variable name, e.g. `rho` or `p`.
    #[serde(default = "default_slice_variable")]
    pub variable: String,
    /// Optional reference profile (CSV with coordinate and value columns).
    pub reference: Option<PathBuf>,
}

fn default_slice_variable() -> String {
    "rho".into()
}

fn default_samples() -> usize {
    512
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
    /// Simulation-time interval between snapshots; the final state is always written.
    pub snapshot_interval: Option<f64>,
    #[serde(default = "default_true")]
    pub vtk: bool,
    #[serde(default)]
    pub slices: Vec<SliceSpec>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: None, snapshot_interval: None, vtk: true, slices: Vec::new(), samples: 512 }
    }
}

/// Filter parameters after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedFilter {
    pub m: usize,
    pub k: usize,
    pub epsilon: f64,
    pub settings: AdaptiveFilterSettings,
    pub filter_initial_condition: bool,
}

/// Fully specified run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub case: TestCase,
    pub degree: usize,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub flux: LaxFriedrichs,
    pub max_steps: Option<usize>,
    pub filter: Option<ResolvedFilter>,
    pub glm: GlmSettings,
    pub output: OutputConfig,
}

/// Sets `key.path = value` in a TOML table. `value` is parsed as a TOML
/// value when possible and taken as a string otherwise.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(format!("override '{assignment}' is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(Error::config(format!("override '{assignment}' has an empty key")));
    }
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed table has key v"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::config(format!("override key '{key}': '{part}' is not a table")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| Error::config(format!("invalid TOML: {e}")))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::config(format!("invalid configuration: {e}")))
    }

    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    /// Configuration that runs `case` with all of its defaults.
    pub fn for_case(case: &str) -> Self {
        Self { case: case.into(), ..Default::default() }
    }

    pub fn resolve(&self) -> Result<ResolvedRun> {
        if !(self.double_mach_shock_width >= 0.0 && self.double_mach_shock_width.is_finite()) {
            return Err(Error::config("double_mach_shock_width must be finite and non-negative"));
        }
        let case = TestCase::by_name(&self.case, &CaseOptions {
            double_mach_state: self.double_mach_state,
            double_mach_shock_width: self.double_mach_shock_width,
            convergence_domain: self.convergence_domain,
        })?;
        let d = case.defaults;
        let degree = self.degree.unwrap_or(d.degree);
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::config(format!("polynomial degree {degree} outside [1, {MAX_DEGREE}]")));
        }
        let nx = self.nx.unwrap_or(d.nx);
        let ny = self.ny.unwrap_or(d.ny);
        if nx == 0 || ny == 0 {
            return Err(Error::config("element counts must be positive"));
        }
        let cfl = self.cfl.unwrap_or(d.cfl);
        if !(cfl.is_finite() && cfl > 0.0) {
            return Err(Error::config(format!("CFL {cfl} must be positive")));
        }
        let t_end = self.t_end.unwrap_or(d.t_end);
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::config(format!("final time {t_end} must be non-negative")));
        }
        if !(self.glm.c_r.is_finite() && self.glm.c_r > 0.0) {
            return Err(Error::config("glm.c_r must be positive"));
        }
        if let Some(dt) = self.output.snapshot_interval {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::config("output.snapshot_interval must be positive"));
            }
        }
        if self.output.samples < 2 {
            return Err(Error::config("output.samples must be at least 2"));
        }
        for s in &self.output.slices {
            if s.kind == SliceKind::Horizontal && s.y.is_none() {
                return Err(Error::config("horizontal slices need a y coordinate"));
            }
        }
        let filter = self.resolve_filter(&case, degree)?;
        Ok(ResolvedRun {
            case,
            degree,
            nx,
            ny,
            cfl,
            t_end,
            flux: self.flux,
            max_steps: self.max_steps,
            filter,
            glm: self.glm,
            output: self.output.clone(),
        })
    }

    fn resolve_filter(&self, case: &TestCase, degree: usize) -> Result<Option<ResolvedFilter>> {
        let f = &self.filter;
        let defaults = case.defaults.filter;
        let enabled = f.enabled.unwrap_or(defaults.is_some() || f.m.is_some());
        let mode = f.mode.or(defaults.map(|d| d.mode)).unwrap_or(FilterMode::Adaptive);
        if !enabled || mode == FilterMode::Off {
            return Ok(None);
        }
        let missing = |what: &str| {
            Error::config(format!("filter.{what} is required: case '{}' has no default filter", case.name))
        };
        let m = f.m.or(defaults.map(|d| d.m)).ok_or_else(|| missing("m"))?;
        if m == 0 {
            return Err(Error::config("filter.m must be at least 1"));
        }
        let k = f.k.or(defaults.map(|d| d.k)).ok_or_else(|| missing("k"))?;
        let support = match (f.epsilon, f.n_d) {
            (Some(e), _) => SupportSpec::Epsilon(e),
            (None, Some(n)) => SupportSpec::ND(n),
            (None, None) => defaults.map(|d| d.support).ok_or_else(|| missing("n_d or filter.epsilon"))?,
        };
        let epsilon = match support {
            SupportSpec::Epsilon(e) => {
                validate_epsilon(e)?;
                e
            }
            SupportSpec::ND(n) => support_width(degree, n)?,
        };
        let settings = AdaptiveFilterSettings {
            mode,
            sigma_min: f.sigma_min.or(defaults.map(|d| d.sigma_min)).unwrap_or(-8.0),
            sigma_max: f.sigma_max.or(defaults.map(|d| d.sigma_max)).unwrap_or(-5.0),
            indicator: f.indicator.or(defaults.map(|d| d.indicator)).unwrap_or_default(),
            lambda_formula: f.lambda_formula.unwrap_or_default(),
        };
        settings.validate()?;
        Ok(Some(ResolvedFilter { m, k, epsilon, settings, filter_initial_condition: f.initial_condition.unwrap_or(false) }))
    }
}
