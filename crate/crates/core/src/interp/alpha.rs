//! Extension of `alpha'` to `R^2 x [0,1]` by reflections.
//!
//! Reflecting the domain in `{y_i = n}` (`n` odd) corresponds to reflecting
//! the image in `{y_i = 3n}`. Across the lower half of every wall the two
//! one-sided values differ by such a reflection, which makes the extension
//! discontinuous on the flap grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fold_coordinate, near_odd_integer, Vec3};
use crate::interp::simplex::alpha_prime;

/// Height of the flaps above the base plane.
pub const FLAP_HEIGHT: f64 = 0.5;

/// The flap grid `{y1 or y2 odd} x [0, 1/2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlapGrid;

impl FlapGrid {
    pub fn contains(&self, y: Vec3) -> bool {
        on_flap(y)
    }
}

pub fn on_flap(y: Vec3) -> bool {
    (near_odd_integer(y.x1) || near_odd_integer(y.x2)) && (0.0..FLAP_HEIGHT).contains(&y.x3)
}

/// `alpha(y)` for `y3` in `[0, 1]` off the flap grid.
pub fn alpha(y: Vec3) -> Result<Vec3> {
    if !(0.0..=1.0).contains(&y.x3) {
        return Err(Error::Domain(format!("alpha needs 0 <= y3 <= 1, got {}", y.x3)));
    }
    if on_flap(y) {
        return Err(Error::OnFlap);
    }
    Ok(alpha_one_sided(y))
}

/// `alpha` with the fold's default side chosen on walls. Off the flap grid
/// this is `alpha`; on a flap it is one of the two one-sided limits.
pub fn alpha_one_sided(y: Vec3) -> Vec3 {
    let f1 = fold_coordinate(y.x1);
    let f2 = fold_coordinate(y.x2);
    let z = alpha_prime(Vec3::new(f1.folded, f2.folded, y.x3.clamp(0.0, 1.0)));
    Vec3::new(f1.unfold_scaled(z.x1, 3.0), f2.unfold_scaled(z.x2, 3.0), z.x3)
}

/// The two one-sided limits of `alpha` at a flap point, approached by moving
/// perpendicular to the wall `axis` (0 for `y1`, 1 for `y2`).
pub fn alpha_flap_limits(y: Vec3, axis: usize, delta: f64) -> (Vec3, Vec3) {
    let lo = y.with(axis, y.get(axis) - delta);
    let hi = y.with(axis, y.get(axis) + delta);
    (alpha_one_sided(lo), alpha_one_sided(hi))
}
