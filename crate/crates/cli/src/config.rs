//! Run configuration: defaults, then the `--config` file, then flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Base radius of the global map, `R1 > 2`.
    pub r1: f64,
    /// Number of constructed levels.
    pub n_max: usize,
    pub seed: u64,
    pub verify: VerifyConfig,
    pub julia: JuliaConfig,
    pub render: RenderConfig,
    pub growth: GrowthConfig,
    pub orbit: OrbitConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r1: 3.0,
            n_max: 12,
            seed: 1,
            verify: VerifyConfig::default(),
            julia: JuliaConfig::default(),
            render: RenderConfig::default(),
            growth: GrowthConfig::default(),
            orbit: OrbitConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Zorich,
    Interp,
    Dynamics,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaKeyword {
    Random,
}

/// `"random"` or an explicit list of `log lambda_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Keyword(LambdaKeyword),
    Values(Vec<f64>),
}

impl std::str::FromStr for LambdaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "random" {
            return Ok(LambdaSpec::Keyword(LambdaKeyword::Random));
        }
        parse_list(s).map(LambdaSpec::Values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    /// Degree of the ring interpolation.
    pub d: u64,
    pub k_min: usize,
    pub k_max: usize,
    /// Random samples per check.
    pub samples: usize,
    /// Finite-difference step for dilatation estimates.
    pub h: f64,
    /// Seam exclusion margin in lifted coordinates.
    pub margin: f64,
    /// Identities in log coordinates.
    pub tolerance: f64,
    /// Agreement of the interpolation with the power maps on the boundary spheres.
    pub boundary_tolerance: f64,
    pub flap_sites: usize,
    /// Voxels per cell side in the component census.
    pub grid_n: usize,
    /// Sanity bound on the surveyed dilatation of the interpolation.
    pub k_bound: f64,
    pub lambda: LambdaSpec,
    /// Length of a random lambda sequence.
    pub lambda_n: usize,
    pub blowup_eps: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: vec![Suite::Zorich, Suite::Interp, Suite::Dynamics, Suite::Growth],
            d: 3,
            k_min: 1,
            k_max: 4,
            samples: 2000,
            h: 1e-7,
            margin: 2e-3,
            tolerance: 1e-10,
            boundary_tolerance: 1e-8,
            flap_sites: 200,
            grid_n: 64,
            k_bound: 1e4,
            lambda: LambdaSpec::Keyword(LambdaKeyword::Random),
            lambda_n: 8,
            blowup_eps: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JuliaConfig {
    pub k_min: usize,
    pub k_max: usize,
    /// Pullback depth for the ring `Gamma_{k,n}`.
    pub n_pullback: usize,
    pub tolerance: f64,
}

impl Default for JuliaConfig {
    fn default() -> Self {
        JuliaConfig { k_min: 1, k_max: 3, n_pullback: 8, tolerance: 1e-9 }
    }
}

/// The coordinate that vanishes on the slice plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    X1,
    X2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub plane: Plane,
    /// Horizontal axis: log-radius.
    pub t_min: f64,
    pub t_max: f64,
    /// Vertical axis: angle from the positive `x3` axis, radians.
    pub theta_min: f64,
    pub theta_max: f64,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    /// Escape means passing `R_level`.
    pub threshold_level: usize,
    pub overlays: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            plane: Plane::X2,
            t_min: 0.0,
            t_max: 11.0,
            theta_min: 0.0,
            theta_max: std::f64::consts::PI,
            width: 440,
            height: 220,
            max_iter: 12,
            threshold_level: 6,
            overlays: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMode {
    Fast,
    Slow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthConfig {
    pub mode: GrowthMode,
    /// `log R` of the growth map.
    pub log_r: f64,
    /// Fast mode: `log T_k`.
    pub log_t: Vec<f64>,
    /// Fast mode: lower bounds on the order.
    pub eta: Vec<f64>,
    /// Slow mode: upper bounds on the order.
    pub eps: Vec<f64>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        let log_r = std::f64::consts::LN_2;
        GrowthConfig {
            mode: GrowthMode::Fast,
            log_r,
            log_t: vec![2.0 + log_r, 5.0 + log_r, 9.0 + log_r],
            eta: vec![2.0, 4.0, 8.0],
            eps: vec![0.5, 0.1, 0.02],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitConfig {
    /// Start point: beam coordinates with log-radius `log R_level + offset`.
    pub level: usize,
    pub offset: f64,
    pub y1: f64,
    pub y2: f64,
    pub steps: usize,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { level: 1, offset: 0.8, y1: 0.3, y2: 0.1, steps: 5 }
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}")))
        .collect()
}

/// `a..b` (inclusive) or a single level.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad level {v:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((parse(a)?, parse(b)?))
        }
        None => {
            let k = parse(s)?;
            Ok((k, k))
        }
    }
}

pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.display().to_string(), e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Checks the parts that are common to every command and the section of `command`.
    pub fn validate(&self, command: &str) -> Result<(), CliError> {
        if !(self.r1 > 2.0 && self.r1.is_finite()) {
            return Err(CliError::Config(format!("r1 must exceed 2, got {}", self.r1)));
        }
        match command {
            "verify" => {
                let v = &self.verify;
                for (n, x) in [
                    ("verify.h", v.h),
                    ("verify.margin", v.margin),
                    ("verify.tolerance", v.tolerance),
                    ("verify.boundary_tolerance", v.boundary_tolerance),
                    ("verify.k_bound", v.k_bound),
                    ("verify.blowup_eps", v.blowup_eps),
                ] {
                    positive(n, x)?;
                }
                if v.suites.is_empty() {
                    return Err(CliError::Config("verify.suites is empty".into()));
                }
                if v.k_min == 0 || v.k_min > v.k_max {
                    return Err(CliError::Config(format!("bad level range {}..{}", v.k_min, v.k_max)));
                }
                if v.samples == 0 || v.flap_sites == 0 {
                    return Err(CliError::Config("sample counts must be positive".into()));
                }
            }
            "julia-spheres" => {
                let j = &self.julia;
                positive("julia.tolerance", j.tolerance)?;
                if j.k_min == 0 || j.k_min > j.k_max {
                    return Err(CliError::Config(format!("bad level range {}..{}", j.k_min, j.k_max)));
                }
            }
            "render-slice" => {
                let r = &self.render;
                if r.width == 0 || r.height == 0 {
                    return Err(CliError::Config("image size must be positive".into()));
                }
                if !(r.t_min.is_finite() && r.t_max.is_finite() && r.theta_min.is_finite() && r.theta_max.is_finite()) {
                    return Err(CliError::Config("render window must be finite".into()));
                }
                if r.t_min >= r.t_max || r.theta_min >= r.theta_max {
                    return Err(CliError::Config("empty render window".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
