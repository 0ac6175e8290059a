//! Power-type maps `p_d = Z(d Z^{-1})` and their scaled versions `c p_d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::zorich::{zorich, zorich_inv, BeamPoint};

/// Rejects even or zero degrees.
pub fn check_odd(d: u64) -> Result<()> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::EvenDegree(d));
    }
    Ok(())
}

/// `c p_d` with `c = e^{log_c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPower {
    d: u64,
    log_c: f64,
}

impl ScaledPower {
    pub fn new(d: u64, log_c: f64) -> Result<Self> {
        check_odd(d)?;
        if !log_c.is_finite() {
            return Err(Error::InvalidParameter(format!("log_c = {log_c}")));
        }
        Ok(ScaledPower { d, log_c })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn log_c(&self) -> f64 {
        self.log_c
    }
}

/// `p_d(x)`. Well defined because `d` times an odd wall is an odd wall.
pub fn power_map(d: u64, x: Vec3) -> Result<Vec3> {
    check_odd(d)?;
    let y = zorich_inv(x)?;
    let df = d as f64;
    Ok(zorich(BeamPoint::new(df * y.y1, df * y.y2, df * y.t)))
}

/// `p_d` evaluated through an arbitrary preimage `y` of `x`, for branch checks.
pub fn power_map_via(d: u64, y: BeamPoint) -> Result<Vec3> {
    check_odd(d)?;
    let df = d as f64;
    Ok(zorich(BeamPoint::new(df * y.y1, df * y.y2, df * y.t)))
}

/// `c p_d` in beam coordinates: `(d y1, d y2, d t + log c)`, horizontally reduced.
pub fn scaled_power_log(sp: &ScaledPower, p: BeamPoint) -> BeamPoint {
    let df = sp.d as f64;
    BeamPoint::new(df * p.y1, df * p.y2, df * p.t + sp.log_c).reduced()
}

/// `c p_d(x)` in spatial coordinates.
pub fn scaled_power(sp: &ScaledPower, x: Vec3) -> Result<Vec3> {
    Ok(power_map(sp.d, x)? * sp.log_c.exp())
}
