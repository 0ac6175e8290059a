//! The piecewise-linear map `alpha'` on the prism `[-1,1]^2 x [0,1]`.
//!
//! The prism is cut by the dihedral symmetries of the square into eight
//! copies of the fundamental prism over `T = {0 <= x1 <= x2 <= 1}`. The
//! fundamental prism is the union of the cones from the apex `(0,0,1)` over
//! the base triangle and over four triangles tiling the wall `{x2 = 1}`.
//! Each cone is mapped affinely onto the cone from `(0,0,3)` over the
//! corresponding image triangle.

use std::sync::LazyLock;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;

/// Barycentric tolerance for closed-simplex membership.
const BARY_TOL: f64 = 1e-12;

const APEX: [f64; 3] = [0.0, 0.0, 1.0];
const APEX_IMAGE: [f64; 3] = [0.0, 0.0, 3.0];

const SOURCE_FACES: [[[f64; 3]; 3]; 5] = [
    [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
    [[0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.5]],
    [[1.0, 1.0, 0.0], [0.0, 1.0, 0.5], [1.0, 1.0, 0.5]],
    [[0.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.0, 1.0, 1.0]],
    [[0.0, 1.0, 1.0], [1.0, 1.0, 0.5], [1.0, 1.0, 1.0]],
];

const IMAGE_FACES: [[[f64; 3]; 3]; 5] = [
    [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
    [[0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 3.0, 0.0]],
    [[1.0, 1.0, 0.0], [0.0, 3.0, 0.0], [3.0, 3.0, 0.0]],
    [[0.0, 3.0, 0.0], [3.0, 3.0, 0.0], [0.0, 3.0, 3.0]],
    [[0.0, 3.0, 3.0], [3.0, 3.0, 0.0], [3.0, 3.0, 3.0]],
];

/// One of the eight symmetries of the square, acting on `(x1, x2)`.
///
/// The fold of `(x1, x2)` into `T` negates the flagged coordinates and then
/// swaps them if `swap` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Dihedral {
    pub neg1: bool,
    pub neg2: bool,
    pub swap: bool,
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral { neg1: false, neg2: false, swap: false };

    /// The element carrying `(x1, x2)` into `T`, and the folded point.
    pub fn folding(x1: f64, x2: f64) -> (Dihedral, f64, f64) {
        let (a, b) = (x1.abs(), x2.abs());
        let g = Dihedral { neg1: x1 < 0.0, neg2: x2 < 0.0, swap: a > b };
        if g.swap {
            (g, b, a)
        } else {
            (g, a, b)
        }
    }

    pub fn apply(&self, x1: f64, x2: f64) -> (f64, f64) {
        let a = if self.neg1 { -x1 } else { x1 };
        let b = if self.neg2 { -x2 } else { x2 };
        if self.swap {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn invert(&self, u1: f64, u2: f64) -> (f64, f64) {
        let (a, b) = if self.swap { (u2, u1) } else { (u1, u2) };
        (if self.neg1 { -a } else { a }, if self.neg2 { -b } else { b })
    }
}

/// Which simplex of the fundamental prism, and which copy of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexId {
    /// 1 through 5.
    pub id: u8,
    pub dihedral: Dihedral,
}

struct AffinePiece {
    /// Maps `p - v0` to barycentric coordinates `(l1, l2, l3)`.
    to_bary: Matrix3<f64>,
    v0: Vector3<f64>,
    lin: Matrix3<f64>,
    offset: Vector3<f64>,
}

impl AffinePiece {
    fn build(face: &[[f64; 3]; 3], image: &[[f64; 3]; 3]) -> Self {
        let v = |a: [f64; 3]| Vector3::new(a[0], a[1], a[2]);
        let src = [v(face[0]), v(face[1]), v(face[2]), v(APEX)];
        let dst = [v(image[0]), v(image[1]), v(image[2]), v(APEX_IMAGE)];
        let m = Matrix3::from_columns(&[src[1] - src[0], src[2] - src[0], src[3] - src[0]]);
        let w = Matrix3::from_columns(&[dst[1] - dst[0], dst[2] - dst[0], dst[3] - dst[0]]);
        let to_bary = m.try_inverse().expect("simplex is non-degenerate");
        let lin = w * to_bary;
        let offset = dst[0] - lin * src[0];
        AffinePiece { to_bary, v0: src[0], lin, offset }
    }

    /// Smallest barycentric coordinate of `p`.
    fn min_bary(&self, p: &Vector3<f64>) -> f64 {
        let l = self.to_bary * (p - self.v0);
        let l0 = 1.0 - l.sum();
        l0.min(l.min())
    }

    fn eval(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.lin * p + self.offset
    }
}

static PIECES: LazyLock<[AffinePiece; 5]> =
    LazyLock::new(|| std::array::from_fn(|j| AffinePiece::build(&SOURCE_FACES[j], &IMAGE_FACES[j])));

/// Simplex (1..=5) of a point in the fundamental prism. Ties go to the
/// lowest index; points pushed slightly outside by rounding go to the
/// simplex they are least outside of.
pub fn fundamental_simplex(p: Vec3) -> u8 {
    let v = Vector3::new(p.x1, p.x2, p.x3);
    let mut best = (f64::NEG_INFINITY, 0u8);
    for (j, piece) in PIECES.iter().enumerate() {
        let m = piece.min_bary(&v);
        if m >= -BARY_TOL {
            return j as u8 + 1;
        }
        if m > best.0 {
            best = (m, j as u8 + 1);
        }
    }
    best.1
}

/// Barycentric depth of a prism point inside its simplex: zero on any face,
/// including the prism walls. Used to keep samples off the fold and face seams.
pub fn face_margin(y: Vec3) -> f64 {
    let (_, a, b) = Dihedral::folding(y.x1, y.x2);
    let v = Vector3::new(a, b, y.x3);
    PIECES.iter().map(|p| p.min_bary(&v)).fold(f64::NEG_INFINITY, f64::max)
}

/// `alpha'` on the fundamental prism.
pub fn alpha_fundamental(p: Vec3) -> Vec3 {
    let j = fundamental_simplex(p);
    let out = PIECES[j as usize - 1].eval(&Vector3::new(p.x1, p.x2, p.x3));
    Vec3::new(out[0], out[1], out[2])
}

/// Locates a prism point: dihedral copy and simplex.
pub fn simplex_of(y: Vec3) -> SimplexId {
    let (dihedral, a, b) = Dihedral::folding(y.x1, y.x2);
    SimplexId { id: fundamental_simplex(Vec3::new(a, b, y.x3)), dihedral }
}

/// `alpha'` on `[-1,1]^2 x [0,1]`, conjugated through the dihedral fold.
pub fn alpha_prime(y: Vec3) -> Vec3 {
    let (g, a, b) = Dihedral::folding(y.x1, y.x2);
    let u = alpha_fundamental(Vec3::new(a, b, y.x3));
    let (u1, u2) = g.invert(u.x1, u.x2);
    Vec3::new(u1, u2, u.x3)
}
