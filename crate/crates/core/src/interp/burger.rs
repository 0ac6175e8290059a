//! The burger map `beta = mu . nu . mu`.
//!
//! `mu` is the inversion in the sphere of radius `sqrt 2` about `e1`. It
//! sends the exterior of the unit ball to `{x1 > 0}`, the unit sphere to
//! `{x1 = 0}`, and `X` to the two wedges `{|phi| > pi/4}` about the
//! `x2`-axis. `nu` triples angles in those wedges, folding `{x1 = 0}` onto
//! the slit half-plane, so `beta` glues `x` to its mirror image in
//! `{x3 = 0}` on the unit sphere.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Inputs this close to the unit sphere use the on-sphere formula.
pub const SPHERE_TOL: f64 = 1e-12;

pub fn mobius_mu(x: Vec3) -> Result<Vec3> {
    let q = x - Vec3::E1;
    let n2 = q.norm_sq();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::MobiusPole(format!("{x:?}")));
    }
    let r = 1.0 / n2;
    Ok(Vec3::new(1.0 + 2.0 * r * q.x1, 2.0 * r * x.x2, 2.0 * r * x.x3))
}

/// Angle tripling in the wedges `{|phi| > pi/4}` about the `x2`-axis.
pub fn wedge_nu(x: Vec3) -> Result<Vec3> {
    if !(x.x1 > 0.0) {
        return Err(Error::WedgeDomain(x.x1));
    }
    let rho = x.x1.hypot(x.x3);
    let phi = x.x3.atan2(x.x1);
    if phi.abs() <= FRAC_PI_4 {
        return Ok(x);
    }
    let psi = 3.0 * phi - phi.signum() * FRAC_PI_2;
    let (s, c) = psi.sin_cos();
    Ok(Vec3::new(rho * c, x.x2, rho * s))
}

/// `X = (B(e3, sqrt 2) u B(-e3, sqrt 2)) minus the open unit ball`.
pub fn in_x(x: Vec3) -> bool {
    x.norm_sq() >= 1.0 && ((x - Vec3::E3).norm_sq() < 2.0 || (x + Vec3::E3).norm_sq() < 2.0)
}

/// `beta` on `{|x| >= 1}`; the identity off `X`.
pub fn burger_beta(x: Vec3) -> Result<Vec3> {
    let n = x.norm();
    if n < 1.0 - SPHERE_TOL {
        return Err(Error::InsideUnitBall(n));
    }
    if (n - 1.0).abs() < SPHERE_TOL {
        return Ok(beta_on_sphere(x));
    }
    if !in_x(x) {
        return Ok(x);
    }
    let m = mobius_mu(x)?;
    // mu(X) lies in {x1 > 0}; rounding can only touch the boundary plane
    let m = if m.x1 > 0.0 { m } else { Vec3::new(f64::MIN_POSITIVE, m.x2, m.x3) };
    mobius_mu(wedge_nu(m)?)
}

/// `beta` on the unit sphere, where `mu` has the closed form
/// `(0, x2/(1-x1), x3/(1-x1))` and `nu` sends `(0, s, z)` to `(-|z|, s, 0)`.
fn beta_on_sphere(x: Vec3) -> Vec3 {
    let den = 1.0 - x.x1;
    if den <= 0.0 {
        return x;
    }
    let folded = Vec3::new(-x.x3.abs() / den, x.x2 / den, 0.0);
    mobius_mu(folded).unwrap_or(x)
}
