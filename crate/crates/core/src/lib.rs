//! Quasiregular constructions in three dimensions.
//!
//! The crate evaluates a concrete Zorich map, the power-type maps `p_d`
//! that solve the Schröder equation `p_d ∘ Z = Z ∘ (d·)`, a quasiregular
//! interpolation between `p_d` and `p_{3d}` on a round ring, and a global
//! map built from these pieces whose Julia set contains round spheres.
//!
//! Radii in the global map grow like towers, so everything dynamical is
//! carried in log-radius form; see [`dynamics::LevelLog`].
//!
//! Modules:
//!
//! - [`geometry`]: vectors, round rings and coordinate folding.
//! - [`zorich`]: the Zorich map and its principal inverse branch.
//! - [`power`]: power-type maps and their log-space affine form.
//! - [`interp`]: the piecewise-linear map, the burger map and the ring interpolation.
//! - [`dynamics`]: the global map, ring combinatorics and the Julia spheres.
//! - [`growth`]: the free-parameter construction and the growth designers.
//! - [`verify`]: finite-difference dilatation, continuity probes and the component oracle.

// `!(a > b)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod growth;
pub mod interp;
pub mod layered;
pub mod power;
pub mod report;
pub mod verify;
pub mod zorich;

pub use error::{Error, Result};
pub use geometry::{fold_coordinate, ring_modulus, FoldResult, LogRadius, Ring, Vec3};
pub use zorich::{zorich, zorich_inv, BeamPoint};
