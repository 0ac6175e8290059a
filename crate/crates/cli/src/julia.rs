//! `qr3 julia-spheres`: the spheres `Gamma_k` as a CSV table.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qr3_core::dynamics::{eval_anchored, gamma_ring, gamma_sphere, t_series, LevelPoint, MapParams};
use qr3_core::Result;

use crate::config::RunConfig;

pub struct JuliaRow {
    pub k: usize,
    /// `log |x| - log R_k` on `Gamma_k`.
    pub offset: f64,
    pub log_radius: f64,
    pub t_k: f64,
    /// Midpoint of `Gamma_{k,n}` relative to `log R_k`.
    pub pullback_offset: f64,
    pub discrepancy: f64,
    /// Deviation of `f(Gamma_k)` from `Gamma_{k+1}` in log-radius.
    pub maps_onto_error: f64,
    /// `mod Gamma_{k,n}` for `n = 0..=n_pullback`.
    pub moduli: Vec<f64>,
}

pub fn rows(cfg: &RunConfig) -> Result<Vec<JuliaRow>> {
    let j = &cfg.julia;
    let p = MapParams::build(cfg.r1, cfg.n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for k in j.k_min..=j.k_max {
        let g = gamma_sphere(&p, k)?;
        let next = gamma_sphere(&p, k + 1)?;
        let (ring, _) = gamma_ring(&p, k, j.n_pullback)?;
        let moduli = (0..=j.n_pullback).map(|n| gamma_ring(&p, k, n).map(|r| r.1)).collect::<Result<Vec<_>>>()?;
        let mut err = 0.0f64;
        for _ in 0..32 {
            let x = LevelPoint::new(rng.random_range(-1.0..3.0), rng.random_range(-1.0..1.0), g);
            let (q, _) = eval_anchored(&p, x)?;
            err = err.max((q.t.rebase(&p, k + 1).offset - next.offset).abs());
        }
        let mid = ring.ring.midpoint();
        out.push(JuliaRow {
            k,
            offset: g.offset,
            log_radius: g.absolute(&p),
            t_k: t_series(k),
            pullback_offset: mid,
            discrepancy: (mid - g.offset).abs(),
            maps_onto_error: err,
            moduli,
        });
    }
    Ok(out)
}

pub fn passed(cfg: &RunConfig, rows: &[JuliaRow]) -> bool {
    rows.iter().all(|r| r.discrepancy < cfg.julia.tolerance && r.maps_onto_error < cfg.julia.tolerance)
}

/// CSV with the resolved config as a leading `#` comment line.
pub fn to_csv(cfg_json: &str, cfg: &RunConfig, rows: &[JuliaRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# qr3 julia-spheres {cfg_json}");
    s.push_str("k,offset,log_radius,t_k,pullback_offset,discrepancy,maps_onto_error");
    for n in 0..=cfg.julia.n_pullback {
        let _ = write!(s, ",mod_n{n}");
    }
    s.push('\n');
    for r in rows {
        let _ = write!(
            s,
            "{},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.k, r.offset, r.log_radius, r.t_k, r.pullback_offset, r.discrepancy, r.maps_onto_error
        );
        for m in &r.moduli {
            let _ = write!(s, ",{m:e}");
        }
        s.push('\n');
    }
    s
}
