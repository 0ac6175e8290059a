//! Finite-difference Jacobians, dilatation estimates and the numerical
//! oracles for continuity and component structure.

mod components;
mod flap;
mod survey;

pub use components::{component_oracle, ComponentCensus, ComponentLabel};
pub use flap::{flap_continuity_probe, flap_probe_sites, FlapProbe, FlapSite};
pub use survey::{beta_seam, dilatation_survey, interp_seam, Region, SurveyReport};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Central-difference Jacobian; column `j` is the derivative along `e_j`.
pub fn jacobian_fd<F>(map: &F, x: Vec3, h: f64) -> Result<Matrix3<f64>>
where
    F: Fn(Vec3) -> Result<Vec3> + ?Sized,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let mut m = Matrix3::zeros();
    for j in 0..3 {
        let plus = map(x.with(j, x.get(j) + h))?;
        let minus = map(x.with(j, x.get(j) - h))?;
        let col = (plus - minus) / (2.0 * h);
        for i in 0..3 {
            m[(i, j)] = col.get(i);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilatationSample {
    pub location: Vec3,
    pub h: f64,
    /// Singular values, decreasing.
    pub sigma: [f64; 3],
    pub det: f64,
    /// `sigma1^3 / (sigma1 sigma2 sigma3)`
    pub k_outer: f64,
    /// `sigma1 sigma2 sigma3 / sigma3^3`
    pub k_inner: f64,
    /// `sigma3 <= 1e-12 sigma1`; the `K` values are then meaningless.
    pub degenerate: bool,
}

impl DilatationSample {
    pub fn from_jacobian(location: Vec3, h: f64, j: &Matrix3<f64>) -> Self {
        let mut s: Vec<f64> = j.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        let sigma = [s[0], s[1], s[2]];
        let degenerate = !(sigma[2] > 1e-12 * sigma[0]);
        DilatationSample {
            location,
            h,
            sigma,
            det: j.determinant(),
            k_outer: sigma[0] * sigma[0] / (sigma[1] * sigma[2]),
            k_inner: sigma[0] * sigma[1] / (sigma[2] * sigma[2]),
            degenerate,
        }
    }

    /// `max(K_O, K_I)`.
    pub fn k(&self) -> f64 {
        self.k_outer.max(self.k_inner)
    }
}

pub fn dilatation_at<F>(map: &F, x: Vec3, h: f64) -> Result<DilatationSample>
where
    F: Fn(Vec3) -> Result<Vec3> + ?Sized,
{
    Ok(DilatationSample::from_jacobian(x, h, &jacobian_fd(map, x, h)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{mobius_mu, wedge_nu};
    use crate::power::power_map;
    use crate::zorich::zorich_vec;

    #[test]
    fn trivial_jacobians() {
        let id = |x: Vec3| Ok(x);
        let j = jacobian_fd(&id, Vec3::new(0.3, -1.0, 2.0), 1e-4).unwrap();
        assert!((j - Matrix3::identity()).norm() < 1e-10);
        let triple = |x: Vec3| Ok(3.0 * x);
        let j = jacobian_fd(&triple, Vec3::new(0.3, -1.0, 2.0), 1e-4).unwrap();
        assert!((j - Matrix3::<f64>::identity() * 3.0).norm() < 1e-9);
        assert!(jacobian_fd(&id, Vec3::ZERO, 0.0).is_err());
    }

    #[test]
    fn radial_derivative_of_p3() {
        let p3 = |x: Vec3| power_map(3, x);
        let r = 1.7;
        let j = jacobian_fd(&p3, Vec3::new(1e-3, 2e-3, r), 1e-5).unwrap();
        // on the positive axis p3 fixes the axis direction
        assert!((j[(2, 2)] - 3.0 * r * r).abs() < 1e-4 * r * r, "{}", j[(2, 2)]);
    }

    #[test]
    fn mobius_is_conformal() {
        for x in [Vec3::new(2.0, 0.5, 0.3), Vec3::new(-1.0, 2.0, 1.0), Vec3::new(0.3, -0.2, 1.4)] {
            let s = dilatation_at(&mobius_mu, x, 1e-5).unwrap();
            assert!((s.k_outer - 1.0).abs() < 1e-3 && (s.k_inner - 1.0).abs() < 1e-3);
            // an inversion reverses orientation
            assert!(s.det < 0.0);
        }
    }

    #[test]
    fn wedge_dilatation() {
        let s = dilatation_at(&wedge_nu, Vec3::new(0.4, 0.7, 1.3), 1e-5).unwrap();
        assert!((s.k_outer - 9.0).abs() < 0.45, "{}", s.k_outer);
        assert!((s.k_inner - 3.0).abs() < 0.15, "{}", s.k_inner);
        let flat = dilatation_at(&wedge_nu, Vec3::new(1.0, 0.7, 0.2), 1e-5).unwrap();
        assert!((flat.k() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zorich_is_h_stable() {
        let z = |x: Vec3| Ok(zorich_vec(x));
        let x = Vec3::new(0.3, 0.1, 0.4);
        let a = dilatation_at(&z, x, 1e-4).unwrap();
        let b = dilatation_at(&z, x, 1e-5).unwrap();
        assert!(a.k().is_finite() && (a.k() - b.k()).abs() < 1e-4 * a.k());
        assert!(a.det > 0.0);
    }

    #[test]
    fn richardson_order_two() {
        let f = |x: Vec3| Ok(Vec3::new(x.x1.sin() * x.x2, x.x3.exp(), x.x1 * x.x2 * x.x3));
        let x = Vec3::new(0.4, 0.9, -0.3);
        let exact = Matrix3::new(
            x.x1.cos() * x.x2, x.x1.sin(), 0.0,
            0.0, 0.0, x.x3.exp(),
            x.x2 * x.x3, x.x1 * x.x3, x.x1 * x.x2,
        );
        let e1 = (jacobian_fd(&f, x, 1e-2).unwrap() - exact).norm();
        let e2 = (jacobian_fd(&f, x, 5e-3).unwrap() - exact).norm();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }
}
