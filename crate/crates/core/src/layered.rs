//! Piecewise maps built from alternating interpolation and power rings,
//! evaluated in absolute log-radius.
//!
//! The layout is `p_3` on `|x| <= R_1`, then for `n = 1, 2, ...` the map
//! `F_{R_n, d_n, a_n}` on `[R_n, S_n]` and `b_n p_{d_{n+1}}` on
//! `[S_n, R_{n+1}]`, with `S_n = e^{1/d_n} R_n`. Absolute coordinates are
//! only accurate while the log-radii stay moderate; the global map of the
//! dynamics module uses level-relative coordinates instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{scaled_interp, InterpSpec};
use crate::power::{scaled_power_log, ScaledPower};
use crate::zorich::BeamPoint;

/// Which formula a point is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `p_3` on `|x| <= R_1`.
    Inner,
    /// `F_{R_n, d_n, *}` on `[R_n, S_n]`.
    Interp(usize),
    /// `* p_{d_{n+1}}` on `[S_n, R_{n+1}]`, tagged with `n + 1`.
    Power(usize),
}

/// `3^n` as a float.
pub fn degree(n: usize) -> f64 {
    3f64.powi(n as i32)
}

/// `3^n` as an integer; `n <= 40`.
pub fn degree_u64(n: usize) -> u64 {
    3u64.pow(n as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredMap {
    /// `log R_n`, index `n - 1`.
    log_r: Vec<f64>,
    /// `log a_n`, coefficient of the interpolation on ring `n`.
    log_interp_c: Vec<f64>,
    /// `log b_n`, coefficient of `p_{d_{n+1}}` on `[S_n, R_{n+1}]`.
    log_power_c: Vec<f64>,
}

impl LayeredMap {
    /// Needs `N >= 2` radii, `N` interpolation coefficients and `N - 1`
    /// power coefficients.
    pub fn new(log_r: Vec<f64>, log_interp_c: Vec<f64>, log_power_c: Vec<f64>) -> Result<Self> {
        let n = log_r.len();
        if n < 2 || log_interp_c.len() < n || log_power_c.len() + 1 < n {
            return Err(Error::InvalidParameter("layered map needs matching sequences of length >= 2".into()));
        }
        for i in 0..n - 1 {
            let s = log_r[i] + 1.0 / degree(i + 1);
            if !(s <= log_r[i + 1]) {
                return Err(Error::InvalidParameter(format!("S_{} exceeds R_{}", i + 1, i + 2)));
            }
        }
        Ok(LayeredMap { log_r, log_interp_c, log_power_c })
    }

    /// Number of interpolation rings with a complete power ring above them.
    pub fn levels(&self) -> usize {
        self.log_r.len() - 1
    }

    pub fn log_r(&self, n: usize) -> f64 {
        self.log_r[n - 1]
    }

    pub fn log_s(&self, n: usize) -> f64 {
        self.log_r[n - 1] + 1.0 / degree(n)
    }

    pub fn log_interp_c(&self, n: usize) -> f64 {
        self.log_interp_c[n - 1]
    }

    pub fn log_power_c(&self, n: usize) -> f64 {
        self.log_power_c[n - 1]
    }

    /// Outer edge of the constructed range.
    pub fn t_max(&self) -> f64 {
        *self.log_r.last().expect("non-empty")
    }

    pub fn regime(&self, t: f64) -> Result<Regime> {
        if t <= self.log_r[0] {
            return Ok(Regime::Inner);
        }
        if !(t <= self.t_max()) {
            return Err(Error::RangeExhausted { n_max: self.log_r.len() });
        }
        // last n with R_n <= t
        let n = self.log_r.partition_point(|&r| r <= t);
        if t <= self.log_s(n) {
            Ok(Regime::Interp(n))
        } else {
            Ok(Regime::Power(n + 1))
        }
    }

    /// Evaluates a named branch, without checking that `p` lies in it.
    pub fn eval_branch(&self, regime: Regime, p: BeamPoint) -> Result<BeamPoint> {
        match regime {
            Regime::Inner => Ok(scaled_power_log(&ScaledPower::new(3, 0.0)?, p)),
            Regime::Interp(n) => {
                let spec = InterpSpec::new(degree_u64(n), self.log_r(n), self.log_interp_c(n))?;
                scaled_interp(&spec, p)
            }
            Regime::Power(m) => Ok(scaled_power_log(&ScaledPower::new(degree_u64(m), self.log_power_c(m - 1))?, p)),
        }
    }

    pub fn eval(&self, p: BeamPoint) -> Result<(BeamPoint, Regime)> {
        let r = self.regime(p.t)?;
        Ok((self.eval_branch(r, p)?, r))
    }
}
