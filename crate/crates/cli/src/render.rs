//! `qr3 render-slice`: escape times on a plane through the origin as a P6 image.
//!
//! Pixels are laid out in log-radius (left to right) and angle from the
//! positive `x3` axis (top to bottom, decreasing), so every sphere about the
//! origin is a vertical line.

use rayon::prelude::*;

use qr3_core::dynamics::{escape_time, gamma_sphere, rings, EscapeOutcome, LevelLog, LevelPoint, MapParams};
use qr3_core::{zorich_inv, BeamPoint, Result, Vec3};

use crate::config::{Plane, RunConfig};

pub type Rgb = [u8; 3];

pub const NON_ESCAPED: Rgb = [0, 0, 0];
/// The orbit left the constructed levels before deciding.
pub const UNDECIDED: Rgb = [255, 0, 255];
pub const GAMMA: Rgb = [255, 255, 255];
pub const RING_A: Rgb = [230, 60, 60];
pub const RING_B: Rgb = [60, 200, 60];
pub const RING_V: Rgb = [80, 120, 255];

fn escape_color(n: usize, max_iter: usize) -> Rgb {
    let c = n as f64 / max_iter.max(1) as f64;
    [(40.0 + 200.0 * c) as u8, (200.0 - 120.0 * c) as u8, (120.0 + 60.0 * (1.0 - c)) as u8]
}

fn pixel(p: &MapParams, cfg: &RunConfig, t: f64, theta: f64) -> Result<Rgb> {
    let r = &cfg.render;
    let (s, c) = theta.sin_cos();
    let u = match r.plane {
        Plane::X1 => Vec3::new(0.0, s, c),
        Plane::X2 => Vec3::new(s, 0.0, c),
    };
    let b = zorich_inv(u)?;
    let x = LevelPoint::from_beam(p, BeamPoint::new(b.y1, b.y2, t));
    let threshold = LevelLog::new(r.threshold_level, 0.0);
    match escape_time(p, x, threshold, r.max_iter) {
        Ok(EscapeOutcome::Escaped(n)) => Ok(escape_color(n, r.max_iter)),
        Ok(EscapeOutcome::NonEscaped(_)) => Ok(NON_ESCAPED),
        Err(qr3_core::Error::RangeExhausted { .. }) => Ok(UNDECIDED),
        Err(e) => Err(e),
    }
}

/// Overlay colour for each pixel column, if a ring boundary or a Julia sphere falls in it.
fn overlay_columns(p: &MapParams, cfg: &RunConfig) -> Result<Vec<Option<Rgb>>> {
    let r = &cfg.render;
    let dt = (r.t_max - r.t_min) / r.width as f64;
    let mut marks: Vec<(f64, Rgb)> = Vec::new();
    for k in 1..p.n_max() {
        let tri = rings(p, k)?;
        let base = p.anchor(k);
        for (ring, colour) in [(tri.a.ring, RING_A), (tri.b.ring, RING_B), (tri.v.ring, RING_V)] {
            marks.push((base + ring.t_in(), colour));
            marks.push((base + ring.t_out(), colour));
        }
        marks.push((gamma_sphere(p, k)?.absolute(p), GAMMA));
    }
    let mut cols = vec![None; r.width];
    // spheres drawn last win
    for (t, colour) in marks {
        let i = ((t - r.t_min) / dt).floor();
        if i >= 0.0 && (i as usize) < r.width {
            let i = i as usize;
            if cols[i] != Some(GAMMA) {
                cols[i] = Some(colour);
            }
        }
    }
    Ok(cols)
}

pub fn render(cfg: &RunConfig) -> Result<Vec<Rgb>> {
    let r = &cfg.render;
    let p = MapParams::build(cfg.r1, cfg.n_max)?;
    let overlays = if r.overlays { overlay_columns(&p, cfg)? } else { vec![None; r.width] };
    let dt = (r.t_max - r.t_min) / r.width as f64;
    let dtheta = (r.theta_max - r.theta_min) / r.height as f64;
    let rows: Vec<Vec<Rgb>> = (0..r.height)
        .into_par_iter()
        .map(|j| {
            let theta = r.theta_max - (j as f64 + 0.5) * dtheta;
            (0..r.width)
                .map(|i| match overlays[i] {
                    Some(c) => Ok(c),
                    None => pixel(&p, cfg, r.t_min + (i as f64 + 0.5) * dt, theta),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Binary P6 with the resolved config in a header comment.
pub fn to_ppm(cfg_json: &str, cfg: &RunConfig, pixels: &[Rgb]) -> Vec<u8> {
    let mut out = format!("P6\n# qr3 render-slice {cfg_json}\n{} {}\n255\n", cfg.render.width, cfg.render.height).into_bytes();
    out.reserve(pixels.len() * 3);
    for px in pixels {
        out.extend_from_slice(px);
    }
    out
}
