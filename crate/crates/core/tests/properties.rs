use proptest::prelude::*;

use qr3_core::dynamics::{eval_anchored, gamma_sphere, regime_of, LevelLog, LevelPoint, MapParams};
use qr3_core::growth::{build_growth, closed_form_log_r, max_modulus_closed_form, max_modulus_direct};
use qr3_core::interp::{classify_component, interpolate_p, ComponentKind};
use qr3_core::layered::Regime;
use qr3_core::power::power_map;
use qr3_core::{zorich, zorich_inv, Vec3};

fn direction() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let s = (1.0 - z * z).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), z)
    })
}

proptest! {
    #[test]
    fn zorich_right_inverse(u in direction(), t in -3.0f64..3.0) {
        let x = t.exp() * u;
        let back = zorich(zorich_inv(x).unwrap());
        prop_assert!(back.dist(x) <= 1e-12 * x.norm());
    }

    #[test]
    fn interpolation_preserves_radii_on_the_boundary(d in prop::sample::select(vec![1u64, 3, 5]), u in direction()) {
        // |P(x)| = |x|^d on the inner sphere and |x|^{3d} on the outer one
        let a = interpolate_p(d, u).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
        let x = (1.0 / d as f64).exp() * u;
        let b = interpolate_p(d, x).unwrap();
        prop_assert!((b.norm().ln() - 3.0).abs() < 1e-12);
        prop_assert!(b.dist(power_map(3 * d, x).unwrap()) <= 1e-10 * b.norm());
    }

    #[test]
    fn base_images_lie_in_the_target_ring(d in prop::sample::select(vec![1u64, 3]), u in direction(), s in 0.0f64..1.0) {
        let x = (s / d as f64).exp() * u;
        let p = interpolate_p(d, x).unwrap();
        prop_assert!(p.is_finite());
        // flap components are folded by the burger map and may enter the unit ball
        if classify_component(d, x).unwrap() == ComponentKind::Base {
            prop_assert!(p.norm() >= 1.0 - 1e-12 && p.norm() <= 3f64.exp() * (1.0 + 1e-12), "{:?}", p);
        }
    }

    #[test]
    fn rebase_round_trip(level in 0usize..6, offset in -5.0f64..5.0, k in 0usize..8) {
        let p = MapParams::build(3.0, 10).unwrap();
        let t = LevelLog::new(level, offset);
        let back = t.rebase(&p, k).rebase(&p, level);
        prop_assert!((back.offset - offset).abs() <= 1e-9 * (1.0 + p.anchor(k.max(level)).abs()));
        let c = t.canonical(&p);
        prop_assert!(c.offset.abs() <= 0.5 * p.gap(c.level.min(9)) + 1e-9 || c.level == 0);
    }

    #[test]
    fn julia_spheres_map_to_julia_spheres(k in 1usize..8, y1 in -1.0f64..3.0, y2 in -1.0f64..1.0) {
        let p = MapParams::build(3.0, 10).unwrap();
        let g = gamma_sphere(&p, k).unwrap();
        let (q, r) = eval_anchored(&p, LevelPoint::new(y1, y2, g)).unwrap();
        prop_assert_eq!(r, Regime::Power(k + 1));
        prop_assert_eq!(regime_of(&p, g).unwrap(), Regime::Power(k + 1));
        let next = gamma_sphere(&p, k + 1).unwrap();
        prop_assert!((q.t.rebase(&p, k + 1).offset - next.offset).abs() < 1e-10);
    }

    #[test]
    fn growth_closed_forms(r in 1.05f64..20.0, lam in prop::collection::vec(0.0f64..4.0, 0..10)) {
        let gp = build_growth(r, &lam).unwrap();
        for n in 0..=lam.len() {
            let direct = gp.log_r(n + 1);
            prop_assert!((direct - closed_form_log_r(&gp, n)).abs() <= 1e-12 * direct.abs());
            let (cr, cs) = max_modulus_closed_form(&gp, n).unwrap();
            let (dr, ds) = max_modulus_direct(&gp, n).unwrap();
            prop_assert!((cr - dr).abs() <= 1e-9 * cr.abs() && (cs - ds).abs() <= 1e-9 * cs.abs());
        }
    }
}
