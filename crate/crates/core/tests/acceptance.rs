//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! `ACCEPTANCE_ONLY=2,5` restricts the run to the listed criteria.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qr3_core::dynamics::{
    blowup_check, check_coverings, eval_anchored, gamma_ring, gamma_sphere, t_series, t_series_tail, LevelLog,
    LevelPoint, MapParams,
};
use qr3_core::growth::{
    build_growth, design_fast_growth, design_slow_growth, growth_point, max_modulus_closed_form, GrowthParams,
};
use qr3_core::interp::{burger_beta, interpolate_p};
use qr3_core::layered::{degree, Regime};
use qr3_core::power::power_map;
use qr3_core::verify::{
    beta_seam, component_oracle, dilatation_survey, flap_continuity_probe, flap_probe_sites, interp_seam, Region,
};
use qr3_core::zorich::zorich;
use qr3_core::{BeamPoint, Result, Vec3};

type Outcome = Result<(bool, String)>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

/// Boundary spheres of the ring interpolation.
fn c01() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for d in [1u64, 3, 9] {
        let outer = (1.0 / d as f64).exp();
        for _ in 0..10_000 {
            let u = unit_vector(&mut rng);
            let a = interpolate_p(d, u)?;
            let b = power_map(d, u)?;
            worst = worst.max(a.dist(b) / b.norm());
            let x = outer * u;
            let a = interpolate_p(d, x)?;
            let b = power_map(3 * d, x)?;
            worst = worst.max(a.dist(b) / b.norm());
        }
    }
    Ok((worst < TOL, format!("sup relative error {worst:.2e} (tol {TOL:e})")))
}

/// Two-sided continuity across the flap images.
fn c02() -> Outcome {
    const DELTA: f64 = 1e-5;
    const P_TOL: f64 = 1e-6;
    const G_MIN: f64 = 1e-2;
    let mut p_worst = 0.0f64;
    let mut g_least = f64::INFINITY;
    let mut slope_range = (f64::INFINITY, f64::NEG_INFINITY);
    for d in [1u64, 3] {
        let sites = flap_probe_sites(d, 1000, 0.05, 200 + d)?;
        let probes = flap_continuity_probe(d, &sites, &[4.0 * DELTA, 2.0 * DELTA, DELTA])?;
        for p in &probes {
            let (_, gp, gg) = p.gaps[2];
            p_worst = p_worst.max(gp);
            g_least = g_least.min(gg);
            slope_range = (slope_range.0.min(p.slope), slope_range.1.max(p.slope));
        }
    }
    let ok = p_worst < P_TOL && g_least > G_MIN;
    Ok((
        ok,
        format!(
            "max P gap {p_worst:.2e} (tol {P_TOL:e}), min raw g gap {g_least:.2e} (min {G_MIN:e}), \
             log-log slope of P gap in [{:.3}, {:.3}]",
            slope_range.0, slope_range.1
        ),
    ))
}

/// Dilatation of the burger map.
fn c03() -> Outcome {
    const K_MAX: f64 = 9.45;
    const ID_TOL: f64 = 1e-3;
    const GLUE_TOL: f64 = 1e-10;
    let region = Region::Box { lo: Vec3::new(-2.5, -2.5, -2.5), hi: Vec3::new(2.5, 2.5, 2.5) };
    let inside = dilatation_survey(&burger_beta, region, 40_000, &beta_seam(1e-3), 1e-6, 301)?;
    let outside = Region::Shell { t_in: 2.5f64.ln(), t_out: 4f64.ln() };
    let off = dilatation_survey(&burger_beta, outside, 5_000, &|_| false, 1e-6, 302)?;
    let id_err = (off.k_sup - 1.0).abs().max((off.k_q50 - 1.0).abs());

    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut glue = 0.0f64;
    for _ in 0..10_000 {
        let u = unit_vector(&mut rng);
        let a = burger_beta(u)?;
        let b = burger_beta(u.flip3())?;
        glue = glue.max(a.dist(b)).max(a.x3.abs());
    }
    let ok = inside.k_sup <= K_MAX && inside.orientation_reversing == 0 && id_err <= ID_TOL && glue <= GLUE_TOL;
    Ok((
        ok,
        format!(
            "K sup {:.4} over {} samples ({} excluded), |K-1| off X {id_err:.1e}, sphere gluing {glue:.1e}",
            inside.k_sup,
            inside.accepted(),
            inside.excluded
        ),
    ))
}

/// Dilatation of the interpolation does not depend on the degree.
fn c04() -> Outcome {
    const FACTOR: f64 = 1.2;
    let mut sups = Vec::new();
    let mut notes = Vec::new();
    for d in [1u64, 3, 9] {
        let map = move |x: Vec3| interpolate_p(d, x);
        let region = Region::Shell { t_in: 0.0, t_out: 1.0 / d as f64 };
        let r = dilatation_survey(&map, region, 60_000, &interp_seam(d, 2e-3), 1e-7, 400 + d)?;
        sups.push(r.k_sup);
        notes.push(format!("d={d}: sup {:.3} q99 {:.3} ({} kept)", r.k_sup, r.k_q99, r.accepted()));
        if r.orientation_reversing > 0 {
            return Ok((false, format!("orientation reversed at {} samples for d={d}", r.orientation_reversing)));
        }
    }
    let hi = sups.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = sups.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = hi / lo;
    Ok((ratio <= FACTOR, format!("ratio {ratio:.4} (max {FACTOR}); {}", notes.join(", "))))
}

/// Component census at 128^3 voxels per cell.
fn c05() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (d, total, base, flap) in [(1u64, 18, 2, 16), (3, 162, 18, 144)] {
        let c = component_oracle(d, 128)?;
        let good = c.total == total
            && c.base == base
            && c.flap == flap
            && c.ambiguous == 0
            && c.classifier_mismatches == 0;
        ok &= good;
        notes.push(format!(
            "d={d}: {} = {} base + {} flap, {} ambiguous, agreement {:.6} over {} voxels",
            c.total,
            c.base,
            c.flap,
            c.ambiguous,
            c.classifier_agreement(),
            c.voxels_in_components
        ));
    }
    Ok((ok, notes.join("; ")))
}

/// Radius recursion against the product formula.
fn c06() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut worst = 0.0f64;
    let mut bound_ok = true;
    for r1 in [2.5, 3.0, 10.0] {
        let p = MapParams::build(r1, 13)?;
        let r2 = 9.0 * LN_2 + 3.0 * r1.ln();
        worst = worst.max((p.log_r(2) - r2).abs() / r2);
        for n in 1..=12 {
            let direct = p.log_r(n + 1);
            // independent evaluation of 2^{d_{n+1}} R_n^{d_n} prod_{j<n} R_j^{-2 d_j}
            let mut closed = degree(n + 1) * LN_2 + degree(n) * p.log_r(n);
            for j in 1..n {
                closed -= 2.0 * degree(j) * p.log_r(j);
            }
            worst = worst.max((direct - closed).abs() / direct);
            worst = worst.max((direct - p.closed_form_log_r(n)).abs() / direct);
            if n >= 2 {
                bound_ok &= direct >= degree(n + 1) * LN_2 + degree(n - 1) * p.log_r(n);
            }
        }
    }
    Ok((
        worst <= TOL && bound_ok,
        format!("max relative deviation {worst:.2e} (tol {TOL:e}), lower bound holds: {bound_ok}"),
    ))
}

/// Covering identities and ring inclusions.
fn c07() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for r1 in [3.0, 10.0] {
        let p = MapParams::build(r1, 12)?;
        for k in 1..=10 {
            let rep = check_coverings(&p, k)?;
            for c in &rep.checks {
                if c.name.starts_with("|f|") && !c.name.ends_with("sphere") {
                    worst = worst.max(c.measured);
                }
            }
            failures.extend(rep.failures().map(|c| format!("R1={r1} k={k}: {}", c.name)));
        }
    }
    Ok((failures.is_empty(), format!("max identity error {worst:.2e} (tol 1e-10); failures: {failures:?}")))
}

/// Nested rings and the Julia spheres.
fn c08() -> Outcome {
    let p = MapParams::build(3.0, 12)?;
    let (g8, _) = gamma_ring(&p, 1, 8)?;
    let mid_err = (g8.ring.midpoint() - t_series(1) * LN_2).abs();
    let mut exact = true;
    for k in 1..=3 {
        for n in 0..=7 {
            let (_, m) = gamma_ring(&p, k, n)?;
            let prod: f64 = (1..=n).map(|j| degree(k + j)).product();
            exact &= m == (5.0f64 / 3.0).ln() / prod;
        }
    }
    let mut rec = 0.0f64;
    for k in 1..=10 {
        rec = rec.max((t_series(k + 1) - degree(k + 1) * t_series_tail(k)).abs());
    }
    let ok = mid_err < 1e-9 && exact && rec < 1e-12;
    Ok((ok, format!("midpoint error {mid_err:.1e}, modulus exact: {exact}, recursion error {rec:.1e}")))
}

/// Each Julia sphere maps onto the next.
fn c09() -> Outcome {
    const TOL: f64 = 1e-10;
    let p = MapParams::build(3.0, 12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    let mut worst = 0.0f64;
    for k in 1..=8 {
        let g = gamma_sphere(&p, k)?;
        let next = gamma_sphere(&p, k + 1)?;
        for _ in 0..64 {
            let x = LevelPoint::new(rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0), g);
            let (q, _) = eval_anchored(&p, x)?;
            worst = worst.max((q.t.rebase(&p, k + 1).offset - next.offset).abs());
        }
    }
    Ok((worst < TOL, format!("max log-radius error {worst:.2e} (tol {TOL:e})")))
}

/// The positive axis is mapped monotonically onto itself.
fn c10() -> Outcome {
    let p = MapParams::build(3.0, 12)?;
    let mut ts = Vec::new();
    // level 0 covers |x| <= R_1 / e^{gap/2}; then each level's half-gaps on either side
    let per = 10_000 / 7;
    for i in 0..per {
        ts.push(LevelLog::new(0, -3.0 + (i as f64 + 0.5) * (3.0 + 0.5 * p.gap(0)) / per as f64));
    }
    for k in 1..=6 {
        // below R_k, the interpolation ring [R_k, S_k], then up to the midpoint of the next gap
        let s = 1.0 / degree(k);
        let pieces = [(-0.5 * p.gap(k - 1), 0.0, per / 3), (0.0, s, per / 3), (s, 0.5 * p.gap(k), per - 2 * (per / 3))];
        for (lo, hi, m) in pieces {
            for i in 0..m {
                ts.push(LevelLog::new(k, lo + (i as f64 + 0.5) * (hi - lo) / m as f64));
            }
        }
    }
    let mut prev: Option<LevelLog> = None;
    let mut regimes = std::collections::BTreeSet::new();
    let mut ok = true;
    let mut off_axis = 0.0f64;
    for t in &ts {
        let (q, r) = eval_anchored(&p, LevelPoint::new(0.0, 0.0, *t))?;
        regimes.insert(format!("{r:?}"));
        off_axis = off_axis.max(zorich(BeamPoint::new(q.y1, q.y2, 0.0)).dist(Vec3::E3));
        if let Some(pr) = prev {
            ok &= pr.cmp(&p, &q.t).is_lt();
        }
        prev = Some(q.t);
    }
    let covered = (1..=6).all(|k| regimes.contains(&format!("{:?}", Regime::Interp(k))))
        && (2..=7).all(|m| regimes.contains(&format!("{:?}", Regime::Power(m))))
        && regimes.contains("Inner");
    Ok((
        ok && covered && off_axis < 1e-12,
        format!("{} samples, strictly increasing: {ok}, regimes {regimes:?}, off-axis {off_axis:.1e}", ts.len()),
    ))
}

/// Maximum modulus at the grid radii.
fn c11() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(1101);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let lam: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..3.0)).collect();
        let gp: GrowthParams = build_growth(rng.random_range(1.05..6.0), &lam)?;
        let lay = gp.layered(10)?;
        for n in 0..=10 {
            let (m_r, m_s) = max_modulus_closed_form(&gp, n)?;
            let (y1, y2) = (rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0));
            let at_r = BeamPoint::new(y1, y2, gp.log_r(n + 1));
            let branch = if n == 0 { Regime::Inner } else { Regime::Power(n + 1) };
            let q = lay.eval_branch(branch, at_r)?;
            worst = worst.max((q.t - m_r).abs() / m_r.abs());
            if n < 10 {
                let at_s = BeamPoint::new(y1, y2, gp.log_s(n + 1));
                let q = lay.eval_branch(Regime::Interp(n + 1), at_s)?;
                worst = worst.max((q.t - m_s).abs() / m_s.abs());
            }
        }
    }
    Ok((worst <= TOL, format!("max relative deviation {worst:.2e} (tol {TOL:e})")))
}

/// Prescribed fast and slow growth.
fn c12() -> Outcome {
    let log_r = 2f64.ln();
    let log_t = [2.0 + log_r, 5.0 + log_r, 9.0 + log_r];
    let eta = [2.0, 4.0, 8.0];
    let fast = design_fast_growth(log_r, &log_t, &eta)?;
    let gp = fast.params()?;
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 0..3 {
        let w = growth_point(&gp, fast.witness_index[k])?;
        ok &= w.order >= eta[k] && w.log_r < log_t[k];
        notes.push(format!("fast k={}: order {:.3} at log r {:.3}", k + 1, w.order, w.log_r));
    }
    let eps = [0.5, 0.1, 0.02];
    let slow = design_slow_growth(log_r, &eps)?;
    let gp = slow.params()?;
    let mut last = f64::NEG_INFINITY;
    for (k, &e) in eps.iter().enumerate() {
        let w = growth_point(&gp, slow.witness_index[k])?;
        ok &= w.order <= e && w.log_r > last;
        last = w.log_r;
        notes.push(format!("slow k={}: order {:.4}", k + 1, w.order));
    }
    Ok((ok, notes.join(", ")))
}

/// Small boxes near a Julia sphere blow up over a period and a full ring.
fn c13() -> Outcome {
    let p = MapParams::build(3.0, 12)?;
    let g = gamma_sphere(&p, 1)?;
    let (rep, res) = blowup_check(&p, 1, LevelPoint::new(0.2, -0.1, g), 0.01)?;
    let failed: Vec<_> = rep.failures().map(|c| c.name.clone()).collect();
    Ok((
        rep.passed(),
        format!(
            "n = {} (expansion count {}), horizontal side {:.2}, image [{:.3}, {:.3}]; failures {failed:?}",
            res.n, res.predicted_n, res.horizontal_side, res.image_lo, res.image_hi
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "interpolation boundary agreement", c01),
        (2, "flap sewing", c02),
        (3, "burger map dilatation", c03),
        (4, "degree-independent dilatation", c04),
        (5, "component counts", c05),
        (6, "sequence identities", c06),
        (7, "covering identities", c07),
        (8, "Julia spheres", c08),
        (9, "Julia sphere dynamics", c09),
        (10, "axis monotonicity", c10),
        (11, "growth closed forms", c11),
        (12, "growth designers", c12),
        (13, "blow-up property", c13),
    ];
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {id:>2} {:<4} {name}: {detail} [{secs:.1}s]", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
