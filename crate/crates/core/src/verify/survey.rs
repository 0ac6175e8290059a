//! Randomised dilatation surveys with seam exclusion.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dilatation_at, DilatationSample};
use crate::error::{Error, Result};
use crate::geometry::{dist_to_odd, fold_coordinate, Vec3};
use crate::interp::{alpha_one_sided, classify_beam, face_margin, in_x, lift, mobius_mu, ComponentKind};
use crate::zorich::zorich;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Box { lo: Vec3, hi: Vec3 },
    /// `t_in <= log |x| <= t_out`, uniform in direction and in log-radius.
    Shell { t_in: f64, t_out: f64 },
}

impl Region {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec3 {
        match *self {
            Region::Box { lo, hi } => Vec3::new(
                rng.random_range(lo.x1..=hi.x1),
                rng.random_range(lo.x2..=hi.x2),
                rng.random_range(lo.x3..=hi.x3),
            ),
            Region::Shell { t_in, t_out } => {
                let z: f64 = rng.random_range(-1.0..=1.0);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let s = (1.0 - z * z).sqrt();
                let t = rng.random_range(t_in..=t_out);
                t.exp() * Vec3::new(s * phi.cos(), s * phi.sin(), z)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub region: Region,
    pub h: f64,
    pub seed: u64,
    pub samples: usize,
    pub excluded: usize,
    pub degenerate: usize,
    /// Accepted samples with a non-positive Jacobian determinant.
    pub orientation_reversing: usize,
    pub k_outer_sup: f64,
    pub k_inner_sup: f64,
    /// Supremum of `max(K_O, K_I)`.
    pub k_sup: f64,
    pub k_q50: f64,
    pub k_q90: f64,
    pub k_q99: f64,
    pub argmax: Option<Vec3>,
}

impl SurveyReport {
    pub fn accepted(&self) -> usize {
        self.samples - self.excluded - self.degenerate
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

/// Samples `n` points of `region` with a seeded generator, drops those the
/// seam predicate flags, and reduces the dilatation of the rest.
///
/// More than half the samples excluded aborts with
/// [`Error::TooManyExclusions`].
pub fn dilatation_survey<F, S>(map: &F, region: Region, n: usize, seam: &S, h: f64, seed: u64) -> Result<SurveyReport>
where
    F: Fn(Vec3) -> Result<Vec3> + Sync,
    S: Fn(Vec3) -> bool + Sync,
{
    if n == 0 {
        return Err(Error::InvalidParameter("survey needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec3> = (0..n).map(|_| region.sample(&mut rng)).collect();
    let results: Vec<Option<DilatationSample>> = points
        .par_iter()
        .map(|&x| if seam(x) { Ok(None) } else { dilatation_at(map, x, h).map(Some) })
        .collect::<Result<_>>()?;

    let excluded = results.iter().filter(|r| r.is_none()).count();
    if 2 * excluded > n {
        return Err(Error::TooManyExclusions { excluded, total: n });
    }
    let mut degenerate = 0;
    let mut reversing = 0;
    let (mut ko, mut ki, mut ks) = (1.0f64, 1.0f64, f64::NEG_INFINITY);
    let mut argmax = None;
    let mut ks_all = Vec::new();
    for s in results.iter().flatten() {
        if s.degenerate {
            degenerate += 1;
            continue;
        }
        if !(s.det > 0.0) {
            reversing += 1;
        }
        ko = ko.max(s.k_outer);
        ki = ki.max(s.k_inner);
        if s.k() > ks {
            ks = s.k();
            argmax = Some(s.location);
        }
        ks_all.push(s.k());
    }
    ks_all.sort_by(f64::total_cmp);
    Ok(SurveyReport {
        region,
        h,
        seed,
        samples: n,
        excluded,
        degenerate,
        orientation_reversing: reversing,
        k_outer_sup: ko,
        k_inner_sup: ki,
        k_sup: ks,
        k_q50: quantile(&ks_all, 0.5),
        k_q90: quantile(&ks_all, 0.9),
        k_q99: quantile(&ks_all, 0.99),
        argmax,
    })
}

/// Distance-like measure from `x` to the boundary of `X`.
fn x_boundary_gap(x: Vec3) -> f64 {
    let r = (x.norm() - 1.0).abs();
    let a = ((x - Vec3::E3).norm() - SQRT_2).abs();
    let b = ((x + Vec3::E3).norm() - SQRT_2).abs();
    r.min(a).min(b)
}

/// Angular distance of `mu(x)` from the wedge boundary `|phi| = pi/4`.
fn wedge_gap(x: Vec3) -> f64 {
    match mobius_mu(x) {
        Ok(m) => (m.x3.atan2(m.x1).abs() - FRAC_PI_4).abs(),
        Err(_) => 0.0,
    }
}

/// Seams of `P` on `A(1, e^{1/d})`: the ring boundary, every face of the
/// simplicial decomposition (walls, flaps and fold planes included), the
/// fold and diagonal lines of `Z` in the image of `alpha`, and the
/// boundaries of `X` and of the tripling wedges on flap components.
///
/// `margin` is measured in lifted coordinates.
pub fn interp_seam(d: u64, margin: f64) -> impl Fn(Vec3) -> bool + Sync {
    move |x: Vec3| {
        let df = d as f64;
        let t = x.norm().ln() * df;
        if t < margin || t > 1.0 - margin {
            return true;
        }
        let w = match lift(d, x) {
            Ok(w) => w,
            Err(_) => return true,
        };
        let f1 = fold_coordinate(w.x1).folded;
        let f2 = fold_coordinate(w.x2).folded;
        if face_margin(Vec3::new(f1, f2, w.x3)) < margin {
            return true;
        }
        let a = alpha_one_sided(w);
        let (a1, a2) = (fold_coordinate(a.x1).folded, fold_coordinate(a.x2).folded);
        if dist_to_odd(a.x1).min(dist_to_odd(a.x2)) < margin || (a1.abs() - a2.abs()).abs() < margin {
            return true;
        }
        if classify_beam(w) == ComponentKind::Flap {
            let g = zorich(crate::zorich::BeamPoint::new(a.x1, a.x2, a.x3));
            if x_boundary_gap(g) < margin || (in_x(g) && wedge_gap(g) < margin) {
                return true;
            }
        }
        false
    }
}

/// Seams of `beta` on `{|x| >= 1}`: the unit sphere, the boundary of `X`,
/// the wedge boundaries and the pole of `mu`.
pub fn beta_seam(margin: f64) -> impl Fn(Vec3) -> bool + Sync {
    move |x: Vec3| {
        x.norm() < 1.0 + margin
            || x_boundary_gap(x) < margin
            || x.dist(Vec3::E1) < margin
            || (in_x(x) && wedge_gap(x) < margin)
    }
}
