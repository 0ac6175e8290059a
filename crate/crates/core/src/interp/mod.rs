//! The ring interpolation `P` between `p_d` and `p_{3d}` on `A(1, e^{1/d})`.
//!
//! `g = Z . alpha . (d Z^{-1})` already agrees with `p_d` and `p_{3d}` on the
//! boundary spheres but jumps across the flap images. Composing with the
//! burger map on the components of `g^{-1}(X)` next to the flaps sews the
//! jumps shut. [`scaled_interp`] conjugates `P` by dilations to get a map
//! `F` on `A(R, R e^{1/d})` that equals `c p_d` inside and `c R^{-2d} p_{3d}` outside.

pub mod alpha;
pub mod burger;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fold_coordinate, Vec3};
use crate::power::check_odd;
use crate::zorich::{zorich, zorich_inv, BeamPoint};

pub use alpha::{alpha, alpha_one_sided, on_flap, FlapGrid, FLAP_HEIGHT};
pub use burger::{burger_beta, in_x, mobius_mu, wedge_nu, SPHERE_TOL};
pub use simplex::{alpha_prime, face_margin, simplex_of, Dihedral, SimplexId};

/// Slack on the ring bounds, in units of the normalised height `d t`.
const RING_TOL: f64 = 1e-10;

/// Component type of a point of `g^{-1}(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    /// Adjacent to the inner sphere; `P = g` there.
    Base,
    /// Adjacent to a flap; `P = beta . g` there.
    Flap,
}

/// Parameters of `F_{R,d,c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpSpec {
    pub d: u64,
    pub log_r: f64,
    pub log_c: f64,
}

impl InterpSpec {
    pub fn new(d: u64, log_r: f64, log_c: f64) -> Result<Self> {
        check_odd(d)?;
        if !log_r.is_finite() || !log_c.is_finite() {
            return Err(Error::InvalidParameter(format!("log_r = {log_r}, log_c = {log_c}")));
        }
        Ok(InterpSpec { d, log_r, log_c })
    }

    /// The unit interpolation `P` itself.
    pub fn unit(d: u64) -> Result<Self> {
        InterpSpec::new(d, 0.0, 0.0)
    }

    /// `log c' = log c - 2 d log R`, the coefficient of `p_{3d}` outside.
    pub fn log_c_outer(&self) -> f64 {
        self.log_c - 2.0 * self.d as f64 * self.log_r
    }
}

/// Clamps the normalised height `w3 = d t` into `[0, 1]`.
fn normalised_height(w3: f64) -> Result<f64> {
    if !(-RING_TOL..=1.0 + RING_TOL).contains(&w3) {
        return Err(Error::OutsideRing { t: w3, lo: 0.0, hi: 1.0 });
    }
    Ok(w3.clamp(0.0, 1.0))
}

/// `w = d Z^{-1}(x)` with the principal branch.
pub fn lift(d: u64, x: Vec3) -> Result<Vec3> {
    check_odd(d)?;
    let y = zorich_inv(x)?;
    let df = d as f64;
    let w3 = normalised_height(df * y.t)?;
    Ok(Vec3::new(df * y.y1, df * y.y2, w3))
}

/// `Z(alpha(w))`, one-sided on flaps.
pub fn g_beam(w: Vec3) -> Vec3 {
    let a = alpha_one_sided(w);
    zorich(BeamPoint::new(a.x1, a.x2, a.x3))
}

/// `g(x) = Z(alpha(d Z^{-1}(x)))` on `A(1, e^{1/d})` off the flap images.
pub fn g_map(d: u64, x: Vec3) -> Result<Vec3> {
    let w = lift(d, x)?;
    if on_flap(w) {
        return Err(Error::OnFlap);
    }
    Ok(g_beam(w))
}

/// Component rule in lifted coordinates: the first simplex of the folded
/// prism point is the base component, everything else touches a flap.
pub fn classify_beam(w: Vec3) -> ComponentKind {
    let f1 = fold_coordinate(w.x1).folded;
    let f2 = fold_coordinate(w.x2).folded;
    if simplex_of(Vec3::new(f1, f2, w.x3.clamp(0.0, 1.0))).id == 1 {
        ComponentKind::Base
    } else {
        ComponentKind::Flap
    }
}

/// Component type of `x` within `g^{-1}(X)`. Meaningful when `g(x)` lies in `X`.
pub fn classify_component(d: u64, x: Vec3) -> Result<ComponentKind> {
    Ok(classify_beam(lift(d, x)?))
}

/// `P` in lifted coordinates.
pub fn interpolate_beam(w: Vec3) -> Result<Vec3> {
    let g = g_beam(w);
    if classify_beam(w) == ComponentKind::Flap && (in_x(g) || (g.norm() - 1.0).abs() < SPHERE_TOL) {
        burger_beta(g)
    } else {
        Ok(g)
    }
}

/// `P(x)` on the closed ring `A(1, e^{1/d})`, flap images included.
pub fn interpolate_p(d: u64, x: Vec3) -> Result<Vec3> {
    interpolate_beam(lift(d, x)?)
}

/// `P` in beam coordinates: input `(y1, y2, s)` with `s` in `[0, 1/d]`,
/// output the principal preimage of `P(Z(y1, y2, s))`.
pub fn interp_unit_log(d: u64, p: BeamPoint) -> Result<BeamPoint> {
    check_odd(d)?;
    let df = d as f64;
    let w = Vec3::new(df * p.y1, df * p.y2, normalised_height(df * p.t)?);
    zorich_inv(interpolate_beam(w)?)
}

/// `F_{R,d,c}` in beam coordinates on `log R <= t <= log R + 1/d`.
pub fn scaled_interp(spec: &InterpSpec, p: BeamPoint) -> Result<BeamPoint> {
    let s = p.t - spec.log_r;
    let df = spec.d as f64;
    if !(-RING_TOL / df..=(1.0 + RING_TOL) / df).contains(&s) {
        return Err(Error::OutsideRing { t: p.t, lo: spec.log_r, hi: spec.log_r + 1.0 / df });
    }
    let q = interp_unit_log(spec.d, BeamPoint::new(p.y1, p.y2, s))?;
    Ok(BeamPoint::new(q.y1, q.y2, q.t + spec.log_c + df * spec.log_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::{power_map, scaled_power_log, ScaledPower};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(rng: &mut ChaCha8Rng) -> Vec3 {
        loop {
            let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v / n;
            }
        }
    }

    fn rel(a: Vec3, b: Vec3) -> f64 {
        a.dist(b) / b.norm()
    }

    #[test]
    fn inner_sphere_is_p_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for d in [1u64, 3, 9] {
            for _ in 0..2000 {
                let x = unit(&mut rng);
                let p = interpolate_p(d, x).unwrap();
                assert!(rel(p, power_map(d, x).unwrap()) < 1e-8, "d={d} x={x:?}");
            }
        }
    }

    #[test]
    fn outer_sphere_is_p_3d() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for d in [1u64, 3, 9] {
            let r = (1.0 / d as f64).exp();
            for _ in 0..2000 {
                let x = unit(&mut rng) * r;
                let p = interpolate_p(d, x).unwrap();
                assert!(rel(p, power_map(3 * d, x).unwrap()) < 1e-8, "d={d} x={x:?}");
            }
        }
    }

    #[test]
    fn g_examples() {
        let x = Vec3::new(0.0, 0.0, (0.5f64 / 3.0).exp());
        let g = g_map(3, x).unwrap();
        assert!(g.x1 == 0.0 && g.x2 == 0.0 && g.x3 > 1.0);
        // a flap image: w = (1, 0.3, 0.2) at d = 1
        let x = zorich(BeamPoint::new(1.0, 0.3, 0.2));
        assert_eq!(g_map(1, x), Err(Error::OnFlap));
        assert!(interpolate_p(1, x).is_ok());
        assert!(matches!(g_map(1, Vec3::new(0.0, 0.0, 3.0)), Err(Error::OutsideRing { .. })));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_beam(Vec3::new(0.1, 0.2, 0.05)), ComponentKind::Base);
        assert_eq!(classify_beam(Vec3::new(0.1, 0.95, 0.1)), ComponentKind::Flap);
        assert!(in_x(g_beam(Vec3::new(0.1, 0.2, 0.05))));
        assert!(in_x(g_beam(Vec3::new(0.1, 0.95, 0.1))));
        // the same rule read through a spatial point
        let x = zorich(BeamPoint::new(0.1 / 3.0, 0.95 / 3.0, 0.1 / 3.0));
        assert_eq!(classify_component(3, x).unwrap(), ComponentKind::Flap);
    }

    #[test]
    fn axis_is_preserved_and_monotone() {
        for d in [1u64, 3, 9] {
            let mut last = 0.0;
            for i in 0..=1000 {
                let t = i as f64 / 1000.0 / d as f64;
                let p = interpolate_p(d, Vec3::new(0.0, 0.0, t.exp())).unwrap();
                assert!(p.x1 == 0.0 && p.x2 == 0.0 && p.x3 > last);
                last = p.x3;
            }
        }
    }

    #[test]
    fn flap_sides_are_sewn() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let v = rng.random_range(-0.9..0.9);
            let h = rng.random_range(0.05..0.45);
            let (a, b) = (Vec3::new(1.0 - 1e-9, v, h), Vec3::new(1.0 + 1e-9, v, h));
            // where the flap image crosses an image wall, g is continuous anyway
            let img = alpha_one_sided(a);
            if crate::geometry::dist_to_odd(img.x1).min(crate::geometry::dist_to_odd(img.x2)) < 0.05 {
                continue;
            }
            let (ga, gb) = (g_beam(a), g_beam(b));
            assert!(ga.dist(gb) > 1e-2);
            assert!(ga.dist(gb.flip3()) < 1e-7);
            let (pa, pb) = (interpolate_beam(a).unwrap(), interpolate_beam(b).unwrap());
            assert!(pa.dist(pb) < 1e-6, "{v} {h}: {pa:?} {pb:?}");
        }
    }

    #[test]
    fn scaled_interp_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let spec = InterpSpec::new(3, 2.0, -5.0).unwrap();
        let inner = ScaledPower::new(3, spec.log_c).unwrap();
        let outer = ScaledPower::new(9, spec.log_c_outer()).unwrap();
        for _ in 0..1000 {
            let (y1, y2) = (rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0));
            let p = BeamPoint::new(y1, y2, spec.log_r);
            let a = scaled_interp(&spec, p).unwrap();
            let b = scaled_power_log(&inner, p);
            assert!((a.t - b.t).abs() < 1e-10);
            assert!(rel(zorich(BeamPoint::new(a.y1, a.y2, 0.0)), zorich(BeamPoint::new(b.y1, b.y2, 0.0))) < 1e-8);

            let p = BeamPoint::new(y1, y2, spec.log_r + 1.0 / 3.0);
            let a = scaled_interp(&spec, p).unwrap();
            let b = scaled_power_log(&outer, p);
            assert!((a.t - b.t).abs() < 1e-10, "{} {}", a.t, b.t);
            assert!(rel(zorich(BeamPoint::new(a.y1, a.y2, 0.0)), zorich(BeamPoint::new(b.y1, b.y2, 0.0))) < 1e-8);
        }
        assert!(scaled_interp(&spec, BeamPoint::new(0.0, 0.0, 1.9)).is_err());
    }

    #[test]
    fn unit_spec_reduces_to_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let spec = InterpSpec::unit(3).unwrap();
        for _ in 0..1000 {
            let p = BeamPoint::new(rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0), rng.random_range(0.0..1.0 / 3.0));
            let a = zorich(scaled_interp(&spec, p).unwrap());
            let b = interpolate_p(3, zorich(p)).unwrap();
            assert!(rel(a, b) < 1e-10);
        }
    }
}
