//! Points, round rings and the tent fold used by the reflection group.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for deciding that a coordinate sits on an odd-integer wall.
pub const WALL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const E1: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const E2: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const E3: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3 { x1, x2, x3 }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge vectors finite
        let m = self.x1.abs().max(self.x2.abs()).max(self.x3.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = self / m;
        m * s.norm_sq().sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    /// Component `i` (0-based).
    pub fn get(self, i: usize) -> f64 {
        match i {
            0 => self.x1,
            1 => self.x2,
            2 => self.x3,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }

    pub fn with(self, i: usize, v: f64) -> Self {
        let mut a = self.to_array();
        a[i] = v;
        Vec3::from_array(a)
    }

    /// Reflection in the plane `{x3 = 0}`.
    pub fn flip3(self) -> Self {
        Vec3::new(self.x1, self.x2, -self.x3)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl std::ops::Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

/// A radius stored by its logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogRadius(pub f64);

impl LogRadius {
    pub fn of_radius(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("radius {r} must be positive and finite")));
        }
        Ok(LogRadius(r.ln()))
    }

    pub fn t(self) -> f64 {
        self.0
    }

    /// `e^t`; overflows to infinity for towers, which is why callers keep `t`.
    pub fn radius(self) -> f64 {
        self.0.exp()
    }
}

/// Closed round ring `{ e^t_in <= |x| <= e^t_out }`.
///
/// The log-radii may be measured from any common anchor; the modulus only
/// depends on their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    t_in: f64,
    t_out: f64,
}

impl Ring {
    pub fn new(t_in: f64, t_out: f64) -> Result<Self> {
        if !(t_in < t_out) || !t_in.is_finite() || !t_out.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ring needs finite t_in < t_out, got [{t_in}, {t_out}]"
            )));
        }
        Ok(Ring { t_in, t_out })
    }

    /// Like [`Ring::new`] but allows `t_in == t_out`, for rings thinner than
    /// the rounding of their anchor offset.
    pub fn closed(t_in: f64, t_out: f64) -> Result<Self> {
        if !(t_in <= t_out) || !t_in.is_finite() || !t_out.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ring needs finite t_in <= t_out, got [{t_in}, {t_out}]"
            )));
        }
        Ok(Ring { t_in, t_out })
    }

    /// The ring `A(r, s)` from actual radii.
    pub fn from_radii(r: f64, s: f64) -> Result<Self> {
        Ring::new(LogRadius::of_radius(r)?.t(), LogRadius::of_radius(s)?.t())
    }

    pub fn t_in(&self) -> f64 {
        self.t_in
    }

    pub fn t_out(&self) -> f64 {
        self.t_out
    }

    pub fn contains(&self, t: f64) -> bool {
        self.t_in <= t && t <= self.t_out
    }

    /// Whether `other` lies inside this ring.
    pub fn contains_ring(&self, other: &Ring) -> bool {
        self.t_in <= other.t_in && other.t_out <= self.t_out
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.t_in + self.t_out)
    }

    /// Join two rings that share a boundary sphere.
    pub fn concat(&self, outer: &Ring) -> Result<Ring> {
        if self.t_out != outer.t_in {
            return Err(Error::InvalidParameter("rings do not share a boundary sphere".into()));
        }
        Ring::new(self.t_in, outer.t_out)
    }

    pub fn shifted(&self, dt: f64) -> Ring {
        Ring { t_in: self.t_in + dt, t_out: self.t_out + dt }
    }
}

/// Conformal modulus of a round ring, `log(s/r)`.
pub fn ring_modulus(r: &Ring) -> f64 {
    r.t_out - r.t_in
}

/// Reduction of one beam coordinate to `[-1, 1]`.
///
/// The input equals `4 * translation + (2 - folded)` when `reflected`,
/// otherwise `4 * translation + folded`. A translation by 4 is the product
/// of the reflections in the planes 1 and 3, so the parity of the whole
/// reflection word is the parity of `reflected`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldResult {
    pub folded: f64,
    pub translation: i64,
    pub reflected: bool,
    /// Input was within [`WALL_TOL`] of an odd integer.
    pub on_wall: bool,
}

impl FoldResult {
    /// Reflection planes applied after the translation, in order.
    pub fn reflection_planes(&self) -> Vec<i64> {
        if self.reflected {
            vec![1]
        } else {
            Vec::new()
        }
    }

    /// Whether the full word, translations included, has odd length.
    pub fn odd(&self) -> bool {
        self.reflected
    }

    /// Re-applies the recorded word to `v`.
    pub fn unfold(&self, v: f64) -> f64 {
        self.unfold_scaled(v, 1.0)
    }

    /// Applies the recorded word with every plane position multiplied by
    /// `scale`: reflections at `scale` and translations by `4 * scale`.
    pub fn unfold_scaled(&self, v: f64, scale: f64) -> f64 {
        let r = if self.reflected { 2.0 * scale - v } else { v };
        r + 4.0 * scale * self.translation as f64
    }
}

/// Folds `y` into `[-1, 1]` by the period-4 tent map with walls at odd integers.
pub fn fold_coordinate(y: f64) -> FoldResult {
    let k = ((y + 1.0) / 4.0).floor();
    let mut r = y - 4.0 * k;
    let mut translation = k as i64;
    // guard against rounding pushing r to exactly 3
    if r >= 3.0 {
        r -= 4.0;
        translation += 1;
    }
    let nearest_odd = 2.0 * ((y - 1.0) / 2.0).round() + 1.0;
    let on_wall = (y - nearest_odd).abs() < WALL_TOL;
    if r > 1.0 {
        FoldResult { folded: 2.0 - r, translation, reflected: true, on_wall }
    } else {
        FoldResult { folded: r, translation, reflected: false, on_wall }
    }
}

/// True when `y` lies within [`WALL_TOL`] of an odd integer.
pub fn near_odd_integer(y: f64) -> bool {
    let nearest_odd = 2.0 * ((y - 1.0) / 2.0).round() + 1.0;
    (y - nearest_odd).abs() < WALL_TOL
}

/// Distance from `y` to the nearest odd integer.
pub fn dist_to_odd(y: f64) -> f64 {
    let nearest_odd = 2.0 * ((y - 1.0) / 2.0).round() + 1.0;
    (y - nearest_odd).abs()
}
