//! Orbits and escape times of the global map.

use serde::{Deserialize, Serialize};

use super::{eval_anchored, LevelLog, LevelPoint, MapParams, Regime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EscapeOutcome {
    /// Crossed the threshold after this many steps.
    Escaped(usize),
    /// Still below the threshold after `max_iter` steps.
    NonEscaped(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub step: usize,
    pub point: LevelPoint,
    /// Branch that produced this point; `None` for the starting point.
    pub regime: Option<Regime>,
}

/// Number of steps until `|f^n(x)|` exceeds `threshold`.
///
/// Running past the constructed levels is reported as
/// [`Error::RangeExhausted`], never as escape.
pub fn escape_time(params: &MapParams, p: LevelPoint, threshold: LevelLog, max_iter: usize) -> Result<EscapeOutcome> {
    if threshold.level > params.n_max() {
        return Err(Error::InvalidParameter(format!(
            "threshold level {} exceeds n_max = {}",
            threshold.level,
            params.n_max()
        )));
    }
    let mut x = p;
    for n in 0..=max_iter {
        if x.t.cmp(params, &threshold).is_gt() {
            return Ok(EscapeOutcome::Escaped(n));
        }
        if n == max_iter {
            break;
        }
        x = eval_anchored(params, x)?.0;
    }
    Ok(EscapeOutcome::NonEscaped(max_iter))
}

/// The first `n + 1` points of the orbit of `p`.
pub fn orbit(params: &MapParams, p: LevelPoint, n: usize) -> Result<Vec<OrbitRecord>> {
    if !(p.y1.is_finite() && p.y2.is_finite() && p.t.offset.is_finite()) {
        return Err(Error::Domain("orbit start is not finite".into()));
    }
    let mut out = Vec::with_capacity(n + 1);
    let start = LevelPoint::new(p.y1, p.y2, p.t.canonical(params));
    out.push(OrbitRecord { step: 0, point: start, regime: None });
    let mut x = start;
    for step in 1..=n {
        let (y, r) = eval_anchored(params, x)?;
        out.push(OrbitRecord { step, point: y, regime: Some(r) });
        x = y;
    }
    Ok(out)
}
