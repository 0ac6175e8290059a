//! The Zorich map `Z(y1, y2, t) = e^t h(y1, y2)`.
//!
//! `h` sends the square `[-1,1]^2` bi-Lipschitz onto the closed upper unit
//! hemisphere; reflecting in the beam walls `{y_i = odd}` in the domain and
//! in `{x3 = 0}` in the range extends `Z` to all of `R^3`. The automorphism
//! group `G` is generated by even words in the wall reflections.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fold_coordinate, Vec3};

/// Zorich-domain coordinates: beam square position and log of image radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BeamPoint {
    pub y1: f64,
    pub y2: f64,
    pub t: f64,
}

impl BeamPoint {
    pub const fn new(y1: f64, y2: f64, t: f64) -> Self {
        BeamPoint { y1, y2, t }
    }

    pub fn from_vec(v: Vec3) -> Self {
        BeamPoint::new(v.x1, v.x2, v.x3)
    }

    pub fn to_vec(self) -> Vec3 {
        Vec3::new(self.y1, self.y2, self.t)
    }

    /// Index `(i, j)` of the beam `[-1,1]^2 + (2i, 2j)` containing the point.
    /// Points on a wall report the cell with the smaller index.
    pub fn cell(&self) -> (i64, i64) {
        fn idx(y: f64) -> i64 {
            let i = (y / 2.0).round();
            // walls at odd integers: round() sends 1 to cell 1, prefer cell 0
            if (y - 2.0 * i).abs() == 1.0 && y - 2.0 * i < 0.0 {
                i as i64 - 1
            } else {
                i as i64
            }
        }
        (idx(self.y1), idx(self.y2))
    }

    /// A `G`-equivalent point with horizontal part in the principal
    /// domain `[-1,3] x [-1,1]` (cells `(0,0)` and `(1,0)`).
    pub fn reduced(&self) -> BeamPoint {
        let (y1, y2) = reduce_horizontal(self.y1, self.y2);
        BeamPoint::new(y1, y2, self.t)
    }
}

/// See [`BeamPoint::reduced`].
pub fn reduce_horizontal(y1: f64, y2: f64) -> (f64, f64) {
    let f1 = fold_coordinate(y1);
    let f2 = fold_coordinate(y2);
    if f1.odd() ^ f2.odd() {
        (2.0 - f1.folded, f2.folded)
    } else {
        (f1.folded, f2.folded)
    }
}

/// `h(y1, y2)` on the closed square.
pub fn square_to_hemisphere(y1: f64, y2: f64) -> Result<Vec3> {
    let m = y1.abs().max(y2.abs());
    if !(m <= 1.0 + 1e-12) {
        return Err(Error::OutsideSquare(y1, y2));
    }
    Ok(h_unchecked(y1, y2))
}

#[inline]
fn h_unchecked(y1: f64, y2: f64) -> Vec3 {
    let m = y1.abs().max(y2.abs()).min(1.0);
    let r = y1.hypot(y2);
    if r == 0.0 {
        return Vec3::E3;
    }
    let (s, c) = (FRAC_PI_2 * m).sin_cos();
    Vec3::new(y1 * s / r, y2 * s / r, c)
}

/// Inverse of `h` on the closed upper hemisphere.
///
/// `M = (2/pi) * arccos(u3)` is evaluated as `atan2(|u_h|, u3)`, which keeps
/// full relative accuracy near the pole.
pub fn hemisphere_to_square(u: Vec3) -> Result<(f64, f64)> {
    let n = u.norm();
    if (n - 1.0).abs() > 1e-9 || u.x3 < -1e-12 {
        return Err(Error::NotOnHemisphere { norm: n, x3: u.x3 });
    }
    Ok(h_inv_unchecked(u))
}

#[inline]
fn h_inv_unchecked(u: Vec3) -> (f64, f64) {
    let rho = u.x1.hypot(u.x2);
    if rho == 0.0 {
        return (0.0, 0.0);
    }
    let m = (2.0 / PI) * rho.atan2(u.x3.max(0.0));
    let (d1, d2) = (u.x1 / rho, u.x2 / rho);
    let scale = m / d1.abs().max(d2.abs());
    (d1 * scale, d2 * scale)
}

/// The Zorich map on all of `R^3`.
pub fn zorich(p: BeamPoint) -> Vec3 {
    let f1 = fold_coordinate(p.y1);
    let f2 = fold_coordinate(p.y2);
    let v = h_unchecked(f1.folded, f2.folded) * p.t.exp();
    if f1.odd() ^ f2.odd() {
        v.flip3()
    } else {
        v
    }
}

/// Convenience form taking the domain point as a vector `(y1, y2, t)`.
pub fn zorich_vec(y: Vec3) -> Vec3 {
    zorich(BeamPoint::from_vec(y))
}

/// Principal inverse branch: the closed upper half-space goes to cell
/// `(0,0)`, the open lower half-space to cell `(1,0)`; `t = log|x|`.
pub fn zorich_inv(x: Vec3) -> Result<BeamPoint> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite point {x:?}")));
    }
    let t = r.ln();
    let u = x / r;
    if u.x3 >= 0.0 {
        let (a, b) = h_inv_unchecked(u);
        Ok(BeamPoint::new(a, b, t))
    } else {
        let (a, b) = h_inv_unchecked(u.flip3());
        Ok(BeamPoint::new(2.0 - a, b, t))
    }
}

/// Unit direction `h(y1, y2)` extended by reflections, without the radial factor.
pub fn zorich_direction(y1: f64, y2: f64) -> Vec3 {
    zorich(BeamPoint::new(y1, y2, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        a.dist(b) <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn hemisphere_examples() {
        assert_eq!(square_to_hemisphere(0.0, 0.0).unwrap(), Vec3::E3);
        assert!(close(square_to_hemisphere(1.0, 0.0).unwrap(), Vec3::E1, 1e-15));
        let s = 0.5f64.sqrt();
        assert!(close(square_to_hemisphere(1.0, 1.0).unwrap(), Vec3::new(s, s, 0.0), 1e-15));
        assert!(square_to_hemisphere(1.2, 0.0).is_err());
    }

    #[test]
    fn inverse_hemisphere_examples() {
        assert_eq!(hemisphere_to_square(Vec3::E3).unwrap(), (0.0, 0.0));
        let (a, b) = hemisphere_to_square(Vec3::E1).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
        let s = 0.5f64.sqrt();
        let (a, b) = hemisphere_to_square(Vec3::new(s, s, 0.0)).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        assert!(hemisphere_to_square(Vec3::new(2.0, 0.0, 0.0)).is_err());
        assert!(hemisphere_to_square(Vec3::new(0.0, 0.0, -1.0)).is_err());
    }

    #[test]
    fn spine_maps_to_axis() {
        for t in [-3.0, 0.0, 0.7, 5.0] {
            let v = zorich(BeamPoint::new(0.0, 0.0, t));
            assert_eq!(v, Vec3::new(0.0, 0.0, t.exp()));
        }
    }

    #[test]
    fn inverse_examples() {
        let p = zorich_inv(Vec3::new(0.0, 0.0, std::f64::consts::E)).unwrap();
        assert_eq!((p.y1, p.y2), (0.0, 0.0));
        assert!((p.t - 1.0).abs() < 1e-15);

        let p = zorich_inv(Vec3::E1).unwrap();
        assert!((p.y1 - 1.0).abs() < 1e-15 && p.y2 == 0.0 && p.t == 0.0);
        assert_eq!(p.cell(), (0, 0));

        let p = zorich_inv(Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!((p.y1, p.y2, p.t), (2.0, 0.0, 0.0));
        assert_eq!(p.cell(), (1, 0));

        assert_eq!(zorich_inv(Vec3::ZERO), Err(Error::ZeroVector));
    }

    #[test]
    fn wall_reflection_flips_hemisphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (y1, y2, t) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-2.0..2.0));
            let a = zorich(BeamPoint::new(y1, y2, t));
            let b = zorich(BeamPoint::new(2.0 - y1, y2, t));
            assert!(close(b, a.flip3(), 1e-14));
        }
    }

    #[test]
    fn cell_parity_selects_half_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let i = rng.random_range(-5i64..5);
            let j = rng.random_range(-5i64..5);
            let p = BeamPoint::new(
                2.0 * i as f64 + rng.random_range(-0.99..0.99),
                2.0 * j as f64 + rng.random_range(-0.99..0.99),
                rng.random_range(-1.0..1.0),
            );
            assert_eq!(p.cell(), (i, j));
            let v = zorich(p);
            if (i + j).rem_euclid(2) == 0 {
                assert!(v.x3 >= 0.0);
            } else {
                assert!(v.x3 <= 0.0);
            }
            assert!((v.norm() - p.t.exp()).abs() <= 1e-12 * p.t.exp());
        }
    }

    #[test]
    fn roundtrip_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = 0.0f64;
        for _ in 0..100_000 {
            let dir = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if dir.norm() < 1e-3 {
                continue;
            }
            let r = 10f64.powf(rng.random_range(-3.0..3.0));
            let x = dir / dir.norm() * r;
            let back = zorich(zorich_inv(x).unwrap());
            worst = worst.max(back.dist(x) / r);
        }
        assert!(worst < 1e-10, "worst relative round-trip error {worst}");
    }

    #[test]
    fn strong_automorphy_two_reflections() {
        // R_{x_i = n} composed with R_{x_j = m}, n and m odd
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let p = BeamPoint::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0), rng.random_range(-2.0..2.0));
            let n = 2 * rng.random_range(-4i64..4) + 1;
            let m = 2 * rng.random_range(-4i64..4) + 1;
            let (i, j) = (rng.random_range(0..2), rng.random_range(0..2));
            let mut y = [p.y1, p.y2];
            y[i] = 2.0 * n as f64 - y[i];
            y[j] = 2.0 * m as f64 - y[j];
            let q = BeamPoint::new(y[0], y[1], p.t);
            let (a, b) = (zorich(p), zorich(q));
            assert!(close(b, a, 1e-12), "{p:?} vs {q:?}");
        }
    }

    #[test]
    fn reduction_preserves_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let p = BeamPoint::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0), rng.random_range(-1.0..1.0));
            let q = p.reduced();
            assert!((-1.0..=3.0).contains(&q.y1) && (-1.0..=1.0).contains(&q.y2));
            assert!(close(zorich(q), zorich(p), 1e-12));
        }
    }

    proptest! {
        #[test]
        fn modulus_is_exp_t(y1 in -20.0f64..20.0, y2 in -20.0f64..20.0, t in -30.0f64..30.0) {
            let v = zorich(BeamPoint::new(y1, y2, t));
            prop_assert!((v.norm() / t.exp() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn period_four(y1 in -10.0f64..10.0, y2 in -10.0f64..10.0, t in -3.0f64..3.0) {
            let a = zorich(BeamPoint::new(y1, y2, t));
            let b = zorich(BeamPoint::new(y1 + 4.0, y2, t));
            let c = zorich(BeamPoint::new(y1, y2 + 4.0, t));
            prop_assert!(close(a, b, 1e-12) && close(a, c, 1e-12));
        }
    }
}
