//! TOML configuration files for synthesis and optimization runs.
//!
//! ```toml
//! order = 4
//! f0 = 10e9            # Hz
//! bandwidth = 0.5e9    # Hz; or `fbw = 0.05`
//! ripple_db = 0.04321
//! ```

use serde::Deserialize;

use super::toml_error;
use crate::error::{invalid, Error, Result};
use crate::optimizer::{FreeParameter, Method, OptimizerOptions};
use crate::prototype::FilterSpec;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FilterConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub order: usize,
    pub f0: f64,
    #[serde(default)]
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub fbw: Option<f64>,
    pub ripple_db: f64,
}

impl FilterConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| toml_error(e, text))?;
        match (cfg.bandwidth, cfg.fbw) {
            (Some(_), Some(_)) => Err(Error::Parse {
                line: None,
                message: "give either `bandwidth` or `fbw`, not both".into(),
            }),
            (None, None) => Err(Error::Parse {
                line: None,
                message: "missing field `bandwidth` (or `fbw`)".into(),
            }),
            _ => Ok(cfg),
        }
    }

    pub fn to_spec(&self) -> Result<FilterSpec<f64>> {
        match (self.bandwidth, self.fbw) {
            (Some(bw), _) => FilterSpec::new(self.order, self.f0, bw, self.ripple_db),
            (None, Some(fbw)) => {
                if !(fbw > 0.0 && fbw < 1.0) {
                    return Err(invalid(format!("fbw must lie in (0, 1), got {fbw}")));
                }
                FilterSpec::with_fbw(self.order, self.f0, fbw, self.ripple_db)
            }
            (None, None) => Err(invalid("no bandwidth given")),
        }
    }
}

/// Optimizer settings.
///
/// ```toml
/// max_iter = 2000
/// tol = 1e-10
/// method = "coordinate"     # or "nelder-mead"
/// vary_qe = true
/// vary_diagonal = false
/// perturb = 0.1             # optional: scale couplings by 1 ± perturb first
/// seed = 1                  # used with `perturb` unless RESONET_SEED is set
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    #[serde(default = "default_max_iter")]
    pub max_iter: i64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub method: MethodName,
    #[serde(default = "default_true")]
    pub vary_qe: bool,
    #[serde(default)]
    pub vary_diagonal: bool,
    #[serde(default)]
    pub perturb: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    #[default]
    Coordinate,
    NelderMead,
}

fn default_max_iter() -> i64 {
    2000
}

fn default_tol() -> f64 {
    1e-10
}

fn default_true() -> bool {
    true
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            max_iter: default_max_iter(),
            tol: default_tol(),
            method: MethodName::default(),
            vary_qe: true,
            vary_diagonal: false,
            perturb: None,
            seed: None,
        }
    }
}

impl OptimizeConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(e, text))
    }

    pub fn options(&self) -> Result<OptimizerOptions<f64>> {
        if self.max_iter < 1 {
            return Err(invalid(format!("max_iter must be at least 1, got {}", self.max_iter)));
        }
        if !(self.tol >= 0.0) {
            return Err(invalid(format!("tol must be non-negative, got {}", self.tol)));
        }
        Ok(OptimizerOptions {
            max_iter: self.max_iter as usize,
            tol: self.tol,
            method: match self.method {
                MethodName::Coordinate => Method::CoordinateDescent,
                MethodName::NelderMead => Method::NelderMead,
            },
            ..OptimizerOptions::default()
        })
    }

    pub fn free_parameters(&self, n: usize) -> Vec<FreeParameter> {
        let mut free: Vec<FreeParameter> =
            (0..n - 1).map(|i| FreeParameter::coupling(i, i + 1)).collect();
        if self.vary_diagonal {
            free.extend((0..n).map(|i| FreeParameter::coupling(i, i)));
        }
        if self.vary_qe {
            free.push(FreeParameter::Qe1);
            free.push(FreeParameter::Qen);
        }
        free
    }
}
