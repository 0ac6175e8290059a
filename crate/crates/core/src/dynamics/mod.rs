//! The global map `f` with round spherical Julia components.
//!
//! With `d_n = 3^n`, `c_1 = 1`, `c_{n+1} = c_n R_n^{-2 d_n}` and
//! `R_{n+1} = c_{n+1} (2 R_n)^{d_{n+1}}`, the map is `p_3` on `|x| <= R_1`,
//! `F_{R_n, d_n, c_n}` on `[R_n, S_n]` and `c_{n+1} p_{d_{n+1}}` on
//! `[S_n, R_{n+1}]`.
//!
//! `log R_n` itself grows faster than any exponential, so radii are stored
//! relative to the nearest `R_k` ([`LevelLog`]). In those coordinates every
//! branch of `f` is affine in the log-radius, and all the covering
//! identities become small closed-form numbers.

mod rings;
mod orbit;

pub use orbit::{escape_time, orbit, EscapeOutcome, OrbitRecord};
pub use rings::{
    blowup_check, check_coverings, gamma_ring, gamma_sphere, rings, t_series, t_series_tail, AnchoredRing, BlowupResult, RingTriple,
};

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::interp_unit_log;
use crate::layered::{degree, degree_u64, LayeredMap};
pub use crate::layered::Regime;
use crate::zorich::{reduce_horizontal, BeamPoint};

/// Largest supported level; `3^n` stays an exact integer well past this.
pub const MAX_LEVELS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    log_r1: f64,
    n_max: usize,
    /// Index `n - 1`.
    log_r: Vec<f64>,
    log_c: Vec<f64>,
    /// `gap[0] = log R_1`, `gap[k] = log R_{k+1} - log R_k`.
    gap: Vec<f64>,
}

impl MapParams {
    pub fn build(r1: f64, n_max: usize) -> Result<Self> {
        if !(r1 > 2.0) || !r1.is_finite() {
            return Err(Error::InvalidParameter(format!("R1 must exceed 2, got {r1}")));
        }
        MapParams::build_log(r1.ln(), n_max)
    }

    pub fn build_log(log_r1: f64, n_max: usize) -> Result<Self> {
        if !(log_r1 > LN_2) || !log_r1.is_finite() {
            return Err(Error::InvalidParameter(format!("log R1 must exceed log 2, got {log_r1}")));
        }
        if !(2..=MAX_LEVELS).contains(&n_max) {
            return Err(Error::InvalidParameter(format!("n_max must be in 2..={MAX_LEVELS}, got {n_max}")));
        }
        let mut log_r = vec![log_r1];
        let mut log_c = vec![0.0];
        for n in 1..n_max {
            let c = log_c[n - 1] - 2.0 * degree(n) * log_r[n - 1];
            let r = c + degree(n + 1) * (LN_2 + log_r[n - 1]);
            log_c.push(c);
            log_r.push(r);
        }
        // one more coefficient so the last power ring is defined
        log_c.push(log_c[n_max - 1] - 2.0 * degree(n_max) * log_r[n_max - 1]);

        let mut gap = vec![log_r1, 9.0 * LN_2 + 2.0 * log_r1];
        for k in 1..n_max - 1 {
            let g = degree(k + 1) * (gap[k] + 2.0 * LN_2);
            gap.push(g);
        }
        gap.truncate(n_max);
        if log_r.iter().chain(&log_c).chain(&gap).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("log-radii overflow for n_max = {n_max}")));
        }
        Ok(MapParams { log_r1, n_max, log_r, log_c, gap })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn log_r1(&self) -> f64 {
        self.log_r1
    }

    pub fn d(&self, n: usize) -> f64 {
        degree(n)
    }

    pub fn log_r(&self, n: usize) -> f64 {
        self.log_r[n - 1]
    }

    pub fn log_s(&self, n: usize) -> f64 {
        self.log_r[n - 1] + 1.0 / degree(n)
    }

    /// Defined for `1 <= n <= n_max + 1`.
    pub fn log_c(&self, n: usize) -> f64 {
        self.log_c[n - 1]
    }

    /// `log R_{k+1} - log R_k`, with `gap(0) = log R_1`; `k < n_max`.
    pub fn gap(&self, k: usize) -> f64 {
        self.gap[k]
    }

    /// Absolute log-radius of anchor `k` (`0` for `k = 0`).
    pub fn anchor(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.log_r[k - 1]
        }
    }

    /// `log R_{n+1}` from the closed product formula, `1 <= n < n_max`.
    pub fn closed_form_log_r(&self, n: usize) -> f64 {
        let tail: f64 = (1..n).map(|j| 2.0 * degree(j) * self.log_r(j)).sum();
        degree(n + 1) * LN_2 + degree(n) * self.log_r(n) - tail
    }

    /// Right-hand side of `R_{n+1} >= 2^{d_{n+1}} R_n^{d_{n-1}}`, `n >= 2`.
    pub fn growth_lower_bound(&self, n: usize) -> f64 {
        degree(n + 1) * LN_2 + degree(n - 1) * self.log_r(n)
    }

    /// The first `levels` rings as an absolute-coordinate map.
    pub fn layered(&self, levels: usize) -> Result<LayeredMap> {
        if levels + 1 > self.n_max {
            return Err(Error::RangeExhausted { n_max: self.n_max });
        }
        let r = self.log_r[..=levels].to_vec();
        let a = self.log_c[..=levels].to_vec();
        let b = self.log_c[1..=levels].to_vec();
        LayeredMap::new(r, a, b)
    }
}

/// Log-radius `anchor(level) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelLog {
    pub level: usize,
    pub offset: f64,
}

impl LevelLog {
    pub const fn new(level: usize, offset: f64) -> Self {
        LevelLog { level, offset }
    }

    pub fn absolute(&self, params: &MapParams) -> f64 {
        params.anchor(self.level) + self.offset
    }

    pub fn from_absolute(params: &MapParams, t: f64) -> Self {
        LevelLog::new(0, t).canonical(params)
    }

    /// The same radius measured from anchor `k`.
    pub fn rebase(&self, params: &MapParams, k: usize) -> Self {
        let mut s = self.offset;
        let mut l = self.level;
        while l < k {
            s -= params.gap(l);
            l += 1;
        }
        while l > k {
            l -= 1;
            s += params.gap(l);
        }
        LevelLog::new(k, s)
    }

    /// Rebased to the nearest anchor.
    pub fn canonical(&self, params: &MapParams) -> Self {
        let (mut l, mut s) = (self.level.min(params.n_max), self.offset);
        if l != self.level {
            return self.rebase(params, l);
        }
        while l < params.n_max && s > 0.5 * params.gap(l) {
            s -= params.gap(l);
            l += 1;
        }
        while l > 0 && s < -0.5 * params.gap(l - 1) {
            l -= 1;
            s += params.gap(l);
        }
        LevelLog::new(l, s)
    }

    pub fn cmp(&self, params: &MapParams, other: &LevelLog) -> Ordering {
        let k = self.level.max(other.level);
        let (a, b) = (self.rebase(params, k), other.rebase(params, k));
        a.offset.total_cmp(&b.offset)
    }
}

/// A point in beam coordinates with a level-relative log-radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPoint {
    pub y1: f64,
    pub y2: f64,
    pub t: LevelLog,
}

impl LevelPoint {
    pub const fn new(y1: f64, y2: f64, t: LevelLog) -> Self {
        LevelPoint { y1, y2, t }
    }

    pub fn from_beam(params: &MapParams, p: BeamPoint) -> Self {
        LevelPoint::new(p.y1, p.y2, LevelLog::from_absolute(params, p.t))
    }

    pub fn to_beam(&self, params: &MapParams) -> BeamPoint {
        BeamPoint::new(self.y1, self.y2, self.t.absolute(params))
    }
}

fn scaled_horizontal(d: f64, p: &LevelPoint) -> (f64, f64) {
    reduce_horizontal(d * p.y1, d * p.y2)
}

/// The regime containing a canonical point.
pub fn regime_of(params: &MapParams, t: LevelLog) -> Result<Regime> {
    let t = t.canonical(params);
    let (k, s) = (t.level, t.offset);
    if k == 0 {
        return Ok(Regime::Inner);
    }
    if k >= params.n_max && s > 0.0 {
        return Err(Error::RangeExhausted { n_max: params.n_max });
    }
    Ok(if s < 0.0 {
        if k == 1 {
            Regime::Inner
        } else {
            Regime::Power(k)
        }
    } else if s <= 1.0 / degree(k) {
        Regime::Interp(k)
    } else {
        Regime::Power(k + 1)
    })
}

/// Evaluates one branch of `f`, measuring the input from the branch's own
/// anchor. The input is not checked against the branch's ring.
pub fn eval_branch(params: &MapParams, regime: Regime, p: LevelPoint) -> Result<LevelPoint> {
    let out = match regime {
        Regime::Inner => {
            if p.t.level == 0 {
                let (y1, y2) = scaled_horizontal(3.0, &p);
                LevelPoint::new(y1, y2, LevelLog::new(0, 3.0 * p.t.offset))
            } else {
                power_step(params, 1, p)?
            }
        }
        Regime::Interp(k) => {
            check_level(params, k + 1)?;
            let s = p.t.rebase(params, k).offset;
            let q = interp_unit_log(degree_u64(k), BeamPoint::new(p.y1, p.y2, s))?;
            LevelPoint::new(q.y1, q.y2, LevelLog::new(k + 1, q.t - degree(k + 1) * LN_2))
        }
        Regime::Power(m) => power_step(params, m, p)?,
    };
    Ok(LevelPoint::new(out.y1, out.y2, out.t.canonical(params)))
}

/// `c_m p_{d_m}` from whichever of the anchors `m - 1`, `m` is closer.
fn power_step(params: &MapParams, m: usize, p: LevelPoint) -> Result<LevelPoint> {
    check_level(params, m + 1)?;
    let dm = degree(m);
    let (y1, y2) = scaled_horizontal(dm, &p);
    let from_below = m >= 2 && p.t.level < m;
    let t = if from_below {
        let s = p.t.rebase(params, m - 1).offset;
        LevelLog::new(m, dm * (s - LN_2))
    } else {
        let s = p.t.rebase(params, m).offset;
        LevelLog::new(m + 1, dm * s - degree(m + 1) * LN_2)
    };
    Ok(LevelPoint::new(y1, y2, t))
}

fn check_level(params: &MapParams, k: usize) -> Result<()> {
    if k > params.n_max {
        return Err(Error::RangeExhausted { n_max: params.n_max });
    }
    Ok(())
}

/// One step of `f` in level-relative coordinates.
pub fn eval_anchored(params: &MapParams, p: LevelPoint) -> Result<(LevelPoint, Regime)> {
    let t = p.t.canonical(params);
    let p = LevelPoint::new(p.y1, p.y2, t);
    let r = regime_of(params, t)?;
    Ok((eval_branch(params, r, p)?, r))
}

/// One step of `f` on an absolute beam point.
pub fn eval_f(params: &MapParams, p: BeamPoint) -> Result<BeamPoint> {
    let (q, _) = eval_anchored(params, LevelPoint::from_beam(params, p))?;
    Ok(q.to_beam(params))
}
