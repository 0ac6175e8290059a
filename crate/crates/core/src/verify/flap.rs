//! Two-sided continuity of `P` across the flap images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_to_odd, Vec3};
use crate::interp::{alpha_one_sided, g_map, interpolate_p, FLAP_HEIGHT};
use crate::power::check_odd;
use crate::zorich::zorich_vec;

/// A flap point in lifted coordinates: `w[axis] = wall` (odd), the other
/// horizontal coordinate `along`, height `h` in `(0, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlapSite {
    pub axis: usize,
    pub wall: f64,
    pub along: f64,
    pub h: f64,
}

impl FlapSite {
    pub fn lifted(&self) -> Vec3 {
        let mut w = Vec3::new(0.0, 0.0, self.h);
        w = w.with(self.axis, self.wall);
        w.with(1 - self.axis, self.along)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlapProbe {
    pub site: FlapSite,
    /// The flap point in the ring `A(1, e^{1/d})`.
    pub x: Vec3,
    /// `(delta, |P(x+) - P(x-)|, |g(x+) - g(x-)|)` with `x+-` at distance `delta` on either side.
    pub gaps: Vec<(f64, f64, f64)>,
    /// Least-squares slope of `log gap_P` against `log delta`.
    pub slope: f64,
}

/// Distance from the flap image to the nearest image wall; the raw jump of
/// `g` vanishes where the flap image crosses one.
fn image_wall_distance(w: Vec3, axis: usize) -> f64 {
    let a = alpha_one_sided(w.with(axis, w.get(axis) - 1e-9));
    dist_to_odd(a.x1).min(dist_to_odd(a.x2))
}

/// `n` random flap sites inside the principal domain for degree `d`,
/// at least `wall_margin` from the image walls and `0.05` from the flap edges.
pub fn flap_probe_sites(d: u64, n: usize, wall_margin: f64, seed: u64) -> Result<Vec<FlapSite>> {
    check_odd(d)?;
    let di = d as i64;
    // interior walls: w1 in (-d, 3d), w2 in (-d, d), both odd
    let walls0: Vec<i64> = (-di + 2..=3 * di - 2).step_by(2).collect();
    let walls1: Vec<i64> = (-di + 2..=di - 2).step_by(2).collect();
    let centres0: Vec<i64> = (-di + 1..=di - 1).step_by(2).collect();
    let centres1: Vec<i64> = (-di + 1..=3 * di - 1).step_by(2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n {
        tries += 1;
        if tries > 1000 * n.max(1) {
            return Err(Error::Domain("could not place flap probe sites".into()));
        }
        let axis = if walls1.is_empty() { 0 } else { rng.random_range(0..2usize) };
        let (walls, centres) = if axis == 0 { (&walls0, &centres0) } else { (&walls1, &centres1) };
        let wall = walls[rng.random_range(0..walls.len())] as f64;
        let along = centres[rng.random_range(0..centres.len())] as f64 + rng.random_range(-0.9..0.9);
        let h = rng.random_range(0.05..FLAP_HEIGHT - 0.05);
        let site = FlapSite { axis, wall, along, h };
        if image_wall_distance(site.lifted(), axis) < wall_margin {
            continue;
        }
        out.push(site);
    }
    Ok(out)
}

/// Gap table of `P` and of the uncorrected `g` across each flap image.
///
/// The probe points sit at distance `delta` on either side of the flap
/// image along the image of the wall normal.
pub fn flap_continuity_probe(d: u64, sites: &[FlapSite], deltas: &[f64]) -> Result<Vec<FlapProbe>> {
    check_odd(d)?;
    if deltas.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("deltas must be positive".into()));
    }
    let df = d as f64;
    sites
        .par_iter()
        .map(|site| {
            let w = site.lifted();
            let x = zorich_vec(w / df);
            // image of the wall normal under y -> Z(y / d)
            let e = 1e-7;
            let n = zorich_vec(w.with(site.axis, w.get(site.axis) + e) / df)
                - zorich_vec(w.with(site.axis, w.get(site.axis) - e) / df);
            let n = n / n.norm();
            let mut gaps = Vec::with_capacity(deltas.len());
            for &delta in deltas {
                let (xp, xm) = (x + delta * n, x - delta * n);
                let gp = interpolate_p(d, xp)?.dist(interpolate_p(d, xm)?);
                let gg = g_map(d, xp)?.dist(g_map(d, xm)?);
                gaps.push((delta, gp, gg));
            }
            let slope = log_slope(&gaps);
            Ok(FlapProbe { site: *site, x, gaps, slope })
        })
        .collect()
}

fn log_slope(gaps: &[(f64, f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = gaps.iter().filter(|g| g.1 > 0.0).map(|g| (g.0.ln(), g.1.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
