use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({0}, {1}) lies outside the square [-1,1]^2")]
    OutsideSquare(f64, f64),

    #[error("vector is not a unit vector in the closed upper hemisphere (norm {norm}, x3 {x3})")]
    NotOnHemisphere { norm: f64, x3: f64 },

    #[error("the zero vector has no Zorich preimage")]
    ZeroVector,

    #[error("degree {0} must be an odd positive integer")]
    EvenDegree(u64),

    #[error("point lies on the flap grid; use the one-sided limits from either side")]
    OnFlap,

    #[error("input {0} is outside the pole-free domain of the Mobius involution")]
    MobiusPole(String),

    #[error("wedge map requires x1 > 0, got x1 = {0}")]
    WedgeDomain(f64),

    #[error("burger map requires |x| >= 1, got |x| = {0}")]
    InsideUnitBall(f64),

    #[error("log-radius {t} is outside the ring [{lo}, {hi}]")]
    OutsideRing { t: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("orbit left the constructed range of {n_max} levels; rebuild with a larger n_max")]
    RangeExhausted { n_max: usize },

    #[error("map evaluation failed at offset point: {0}")]
    Domain(String),

    #[error("{excluded} of {total} samples were excluded as seam points")]
    TooManyExclusions { excluded: usize, total: usize },
}
