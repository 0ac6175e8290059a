//! `qr3 verify`: the module invariants as named checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qr3_core::dynamics::{blowup_check, check_coverings, eval_anchored, gamma_sphere, LevelPoint, MapParams};
use qr3_core::growth::{build_growth, closed_form_log_r, max_modulus_closed_form, max_modulus_direct};
use qr3_core::interp::interpolate_p;
use qr3_core::power::power_map;
use qr3_core::report::{Check, VerificationReport};
use qr3_core::verify::{
    component_oracle, dilatation_at, dilatation_survey, flap_continuity_probe, flap_probe_sites, interp_seam, Region,
};
use qr3_core::{zorich, zorich_inv, BeamPoint, Result, Vec3};

use crate::config::{LambdaSpec, RunConfig, Suite};

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

fn prefixed(rep: VerificationReport, prefix: &str) -> impl Iterator<Item = Check> + '_ {
    rep.checks.into_iter().map(move |mut c| {
        c.name = format!("{prefix}{}", c.name);
        c
    })
}

pub fn run(cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    let mut suites = cfg.verify.suites.clone();
    suites.sort();
    suites.dedup();
    suites
        .into_iter()
        .map(|s| match s {
            Suite::Zorich => zorich_suite(cfg),
            Suite::Interp => interp_suite(cfg),
            Suite::Dynamics => dynamics_suite(cfg),
            Suite::Growth => growth_suite(cfg),
        })
        .collect()
}

fn zorich_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let v = &cfg.verify;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut inv, mut period, mut radius) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..v.samples {
        let p = BeamPoint::new(rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0), rng.random_range(-2.0..2.0));
        let x = zorich(p);
        let q = zorich_inv(x)?;
        inv = inv.max((q.y1 - p.y1).abs().max((q.y2 - p.y2).abs()).max((q.t - p.t).abs()));
        for shifted in [BeamPoint::new(p.y1 + 4.0, p.y2, p.t), BeamPoint::new(p.y1, p.y2 - 4.0, p.t)] {
            period = period.max(zorich(shifted).dist(x) / x.norm());
        }
        radius = radius.max((x.norm().ln() - p.t).abs());
    }
    let mut rep = VerificationReport::new("zorich");
    rep.push(Check::at_most("inverse on the principal domain", inv, v.tolerance));
    rep.push(Check::at_most("period 4 in both beam directions", period, v.tolerance));
    rep.push(Check::at_most("log |Z(y)| = y3", radius, v.tolerance));
    Ok(rep)
}

fn interp_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let v = &cfg.verify;
    let d = v.d;
    let mut rep = VerificationReport::new("interp");

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let outer = (1.0 / d as f64).exp();
    let (mut inner_err, mut outer_err) = (0.0f64, 0.0f64);
    for _ in 0..v.samples {
        let u = unit_vector(&mut rng);
        let b = power_map(d, u)?;
        inner_err = inner_err.max(interpolate_p(d, u)?.dist(b) / b.norm());
        let x = outer * u;
        let b = power_map(3 * d, x)?;
        outer_err = outer_err.max(interpolate_p(d, x)?.dist(b) / b.norm());
    }
    rep.push(Check::at_most("P = p_d on |x| = 1 (relative)", inner_err, v.boundary_tolerance));
    rep.push(Check::at_most("P = p_3d on |x| = e^(1/d) (relative)", outer_err, v.boundary_tolerance));

    let sites = flap_probe_sites(d, v.flap_sites, 0.05, cfg.seed)?;
    let probes = flap_continuity_probe(d, &sites, &[4e-5, 2e-5, 1e-5])?;
    let slope = probes.iter().map(|p| p.slope).fold(f64::INFINITY, f64::min);
    let p_gap = probes.iter().map(|p| p.gaps[2].1).fold(0.0, f64::max);
    let g_gap = probes.iter().map(|p| p.gaps[2].2).fold(f64::INFINITY, f64::min);
    rep.push(
        Check::above("flap gap of P vanishes linearly (min log-log slope)", slope, 0.9)
            .with_detail(format!("max gap {p_gap:.3e} at delta = 1e-5 over {} sites", probes.len())),
    );
    rep.push(Check::above("flap gap of uncorrected g (min at delta = 1e-5)", g_gap, 1e-2));

    let map = move |x: Vec3| interpolate_p(d, x);
    let region = Region::Shell { t_in: 0.0, t_out: 1.0 / d as f64 };
    let s = dilatation_survey(&map, region, v.samples, &interp_seam(d, v.margin), v.h, cfg.seed)?;
    rep.push(Check::at_most("orientation-reversing samples", s.orientation_reversing as f64, 0.0));
    rep.push(Check::at_most("degenerate samples", s.degenerate as f64, 0.0));
    rep.push(Check::at_most("K sup", s.k_sup, v.k_bound).with_detail(format!(
        "q50 {:.4}, q99 {:.4}, {} accepted, {} excluded",
        s.k_q50,
        s.k_q99,
        s.accepted(),
        s.excluded
    )));
    if let Some(x) = s.argmax {
        let coarse = dilatation_at(&map, x, 10.0 * v.h)?.k();
        rep.push(Check::at_most("K at the argmax is stable under h -> 10h (relative)", (coarse - s.k_sup).abs() / s.k_sup, 1e-3));
    }

    let c = component_oracle(d, v.grid_n)?;
    let dd = (d * d) as usize;
    rep.push(Check::flag("component count 2(3d)^2", c.total == 18 * dd).with_detail(format!(
        "{} = {} base + {} flap + {} ambiguous",
        c.total, c.base, c.flap, c.ambiguous
    )));
    rep.push(Check::flag("base/flap split 2d^2 / 16d^2", c.base == 2 * dd && c.flap == 16 * dd));
    rep.push(Check::at_most("classifier disagreements", c.classifier_mismatches as f64, 0.0));
    Ok(rep)
}

fn dynamics_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let v = &cfg.verify;
    let p = MapParams::build(cfg.r1, cfg.n_max)?;
    let mut rep = VerificationReport::new("dynamics");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in v.k_min..=v.k_max {
        let prefix = format!("k={k}: ");
        rep.checks.extend(prefixed(check_coverings(&p, k)?, &prefix));
        let g = gamma_sphere(&p, k)?;
        let next = gamma_sphere(&p, k + 1)?;
        let mut err = 0.0f64;
        for _ in 0..32 {
            let x = LevelPoint::new(rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0), g);
            let (q, _) = eval_anchored(&p, x)?;
            err = err.max((q.t.rebase(&p, k + 1).offset - next.offset).abs());
        }
        rep.push(Check::at_most(format!("{prefix}f maps Gamma_k onto Gamma_(k+1)"), err, v.tolerance));
    }
    let g = gamma_sphere(&p, v.k_min)?;
    let (b, res) = blowup_check(&p, v.k_min, LevelPoint::new(0.2, -0.1, g), v.blowup_eps)?;
    rep.checks.extend(prefixed(b, "blow-up: "));
    rep.push(Check::flag("blow-up: minimal n is the predicted one", res.n == res.predicted_n).with_detail(format!(
        "n = {}, expansion {}, horizontal side {:.4}",
        res.n, res.expansion, res.horizontal_side
    )));
    Ok(rep)
}

fn growth_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let v = &cfg.verify;
    let lambda = match &v.lambda {
        LambdaSpec::Values(l) => l.clone(),
        LambdaSpec::Keyword(_) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..v.lambda_n).map(|_| rng.random_range(0.0..3.0)).collect()
        }
    };
    let gp = build_growth(cfg.r1, &lambda)?;
    let mut rep = VerificationReport::new("growth");
    let (mut radii, mut modulus) = (0.0f64, 0.0f64);
    for n in 0..=gp.len() {
        let r = gp.log_r(n + 1);
        radii = radii.max((r - closed_form_log_r(&gp, n)).abs() / r.abs());
        let (cr, cs) = max_modulus_closed_form(&gp, n)?;
        let (dr, ds) = max_modulus_direct(&gp, n)?;
        modulus = modulus.max((cr - dr).abs() / cr.abs()).max((cs - ds).abs() / cs.abs());
    }
    rep.push(
        Check::at_most("log R_(n+1) against the product formula (relative)", radii, v.tolerance)
            .with_detail(format!("lambda_log = {lambda:?}")),
    );
    rep.push(Check::at_most("log M(R_(n+1)) and log M(S_(n+1)) against the closed form (relative)", modulus, v.tolerance));
    Ok(rep)
}
