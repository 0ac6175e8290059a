//! `qr3 orbit`: an orbit of the global map in level coordinates.

use serde::Serialize;

use qr3_core::dynamics::{orbit, LevelLog, LevelPoint, MapParams, OrbitRecord};
use qr3_core::Result;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct OrbitOutput {
    pub records: Vec<OrbitRecord>,
    /// `log |f^n(x)|` for each record.
    pub log_radius: Vec<f64>,
}

pub fn run(cfg: &RunConfig) -> Result<OrbitOutput> {
    let o = &cfg.orbit;
    let p = MapParams::build(cfg.r1, cfg.n_max)?;
    let start = LevelPoint::new(o.y1, o.y2, LevelLog::new(o.level, o.offset));
    let records = orbit(&p, start, o.steps)?;
    let log_radius = records.iter().map(|r| r.point.t.absolute(&p)).collect();
    Ok(OrbitOutput { records, log_radius })
}
