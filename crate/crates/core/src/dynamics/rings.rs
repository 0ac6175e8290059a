//! Rings `A_k`, `B_k`, `V_k`, their covering identities, the nested rings
//! `Gamma_{k,n}` and the Julia spheres `Gamma_k`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::{eval_anchored, regime_of, LevelLog, LevelPoint, MapParams, Regime};
use crate::error::{Error, Result};
use crate::geometry::{ring_modulus, Ring};
use crate::layered::degree;
use crate::report::{Check, VerificationReport};

const LN_4: f64 = 2.0 * LN_2;

/// A round ring whose log-radii are offsets from anchor `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchoredRing {
    pub level: usize,
    pub ring: Ring,
}

impl AnchoredRing {
    pub fn new(level: usize, t_in: f64, t_out: f64) -> Result<Self> {
        Ok(AnchoredRing { level, ring: Ring::new(t_in, t_out)? })
    }

    pub fn modulus(&self) -> f64 {
        ring_modulus(&self.ring)
    }

    pub fn contains(&self, params: &MapParams, t: LevelLog) -> bool {
        self.ring.contains(t.rebase(params, self.level).offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingTriple {
    /// `A(R_k / 4, 4 R_k)`
    pub a: AnchoredRing,
    /// `A(4 R_k, R_{k+1} / 4)`
    pub b: AnchoredRing,
    /// `A(3 R_k / 2, 5 R_k / 2)`
    pub v: AnchoredRing,
}

fn check_k(params: &MapParams, k: usize, need: usize) -> Result<()> {
    if k == 0 || k + need > params.n_max() {
        return Err(Error::InvalidParameter(format!(
            "level {k} needs 1 <= k and k + {need} <= n_max = {}",
            params.n_max()
        )));
    }
    Ok(())
}

pub fn rings(params: &MapParams, k: usize) -> Result<RingTriple> {
    check_k(params, k, 1)?;
    Ok(RingTriple {
        a: AnchoredRing::new(k, -LN_4, LN_4)?,
        b: AnchoredRing::new(k, LN_4, params.gap(k) - LN_4)?,
        v: AnchoredRing::new(k, 1.5f64.ln(), 2.5f64.ln())?,
    })
}

/// Axis and off-axis directions used to sample spheres.
const SAMPLE_DIRECTIONS: [(f64, f64); 5] = [(0.0, 0.0), (0.3, -0.6), (0.97, 0.2), (1.7, 0.4), (2.5, -0.9)];

/// `log |f|` on the sphere `anchor + s`, checked to be constant over several
/// directions; returns the offset measured from `level_out`.
fn image_offset(params: &MapParams, t: LevelLog, level_out: usize) -> Result<(f64, f64)> {
    let mut vals = Vec::new();
    for (y1, y2) in SAMPLE_DIRECTIONS {
        let (q, _) = eval_anchored(params, LevelPoint::new(y1, y2, t))?;
        vals.push(q.t.rebase(params, level_out).offset);
    }
    let spread = vals.iter().fold(0.0f64, |m, v| m.max((v - vals[0]).abs()));
    Ok((vals[0], spread))
}

/// The covering identities for level `k`, all in log form relative to the
/// nearest anchor; tolerance `1e-10`.
pub fn check_coverings(params: &MapParams, k: usize) -> Result<VerificationReport> {
    check_k(params, k, 2)?;
    const TOL: f64 = 1e-10;
    let dk1 = degree(k + 1);
    let mut rep = VerificationReport::new(format!("coverings k={k}"));

    let cases = [
        ("|f| at 4 R_k", LevelLog::new(k, LN_4), k + 1, dk1 * LN_2),
        ("|f| at R_{k+1}/4", LevelLog::new(k + 1, -LN_4), k + 2, -5.0 * dk1 * LN_2),
        ("|f| at 3 R_k / 2", LevelLog::new(k, 1.5f64.ln()), k + 1, dk1 * 0.75f64.ln()),
        ("|f| at 5 R_k / 2", LevelLog::new(k, 2.5f64.ln()), k + 1, dk1 * 1.25f64.ln()),
    ];
    let mut images = Vec::new();
    for (name, t, lvl, expect) in cases {
        let (got, spread) = image_offset(params, t, lvl)?;
        images.push(got);
        rep.push(Check::at_most(name, (got - expect).abs(), TOL).with_detail(format!("offset from R_{lvl}: {got:.6}")));
        rep.push(Check::at_most(format!("{name} constant on sphere"), spread, TOL));
    }

    // B(0, 4 R_k) inside f(A_k): c_k R_k^{d_k} e^3 = R_{k+1} 2^{-d_{k+1}} e^3 > 4 R_k
    let margin = params.gap(k) - dk1 * LN_2 + 3.0 - LN_4;
    rep.push(Check::above("ball of radius 4R_k covered by f(A_k)", margin, 0.0));
    // f(B_k) inside B_{k+1}
    rep.push(Check::above("f(4R_k) beyond 4R_{k+1}", images[0] - LN_4, 0.0));
    rep.push(Check::above("f(R_{k+1}/4) inside R_{k+2}/4", -LN_4 - images[1], 0.0));
    // inner sphere of V_k lands in B_k, outer in B_{k+1}
    rep.push(Check::above("f(3R_k/2) inside R_{k+1}/4", -LN_4 - images[2], 0.0));
    rep.push(Check::above("f(3R_k/2) beyond 4R_k", images[2] + params.gap(k) - LN_4, 0.0));
    rep.push(Check::above("f(5R_k/2) beyond 4R_{k+1}", images[3] - LN_4, 0.0));
    rep.push(Check::above("S_k below 3R_k/2", 1.5f64.ln() - 1.0 / degree(k), 0.0));
    rep.push(Check::above("B_k non-empty", params.gap(k) - 2.0 * LN_4, 0.0));
    // the branch used on B_k and V_k is the power map
    for t in [LevelLog::new(k, LN_4), LevelLog::new(k, 1.5f64.ln()), LevelLog::new(k + 1, -LN_4)] {
        let r = regime_of(params, t)?;
        let lvl = t.level;
        let expected = if t.offset < 0.0 { Regime::Power(lvl) } else { Regime::Power(lvl + 1) };
        rep.push(Check::flag(format!("power branch at level {lvl} offset {:.3}", t.offset), r == expected));
    }
    Ok(rep)
}

/// `t_k = 1 + sum_{m > k} prod_{j=k+1}^{m} 1/d_j`, summed until terms drop below `1e-16`.
pub fn t_series(k: usize) -> f64 {
    1.0 + t_series_tail(k)
}

/// `t_k - 1`, summed directly so that it keeps full relative precision.
pub fn t_series_tail(k: usize) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut j = k + 1;
    loop {
        term /= degree(j);
        if term < 1e-16 * sum {
            break;
        }
        sum += term;
        j += 1;
    }
    sum
}

/// The sphere `|x| = 2^{t_k} R_k`.
pub fn gamma_sphere(params: &MapParams, k: usize) -> Result<LevelLog> {
    check_k(params, k, 1)?;
    Ok(LevelLog::new(k, t_series(k) * LN_2))
}

/// `Gamma_{k,n}`, the points whose first `n` images stay in the rings `V`.
///
/// Returns the ring at level `k` and its modulus `log(5/3) / prod d_{k+j}`,
/// the product being exact in floating point.
pub fn gamma_ring(params: &MapParams, k: usize, n: usize) -> Result<(AnchoredRing, f64)> {
    check_k(params, k, n + 1)?;
    let (mut lo, mut hi) = (1.5f64.ln(), 2.5f64.ln());
    let mut prod = 1.0f64;
    for m in (k + 1..=k + n).rev() {
        let d = degree(m);
        lo = LN_2 + lo / d;
        hi = LN_2 + hi / d;
        prod *= d;
        if !(lo >= 1.0 / degree(m - 1) && hi <= params.gap(m - 1)) {
            return Err(Error::Domain(format!("pullback left the power ring at level {}", m - 1)));
        }
    }
    let ring = AnchoredRing { level: k, ring: Ring::closed(lo, hi)? };
    Ok((ring, (5.0f64 / 3.0).ln() / prod))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupResult {
    /// Smallest number of steps after which the box covers `V_{k+n}`.
    pub n: usize,
    /// Smallest `n` with `2 eps prod d >= 4`.
    pub predicted_n: usize,
    /// `prod_{j=1}^{n} d_{k+j}`.
    pub expansion: f64,
    pub horizontal_side: f64,
    /// Image of the vertical box interval, offsets from `R_{k+n}`.
    pub image_lo: f64,
    pub image_hi: f64,
    /// Image of `Gamma_{k,n}`, offsets from `R_{k+n}`.
    pub gamma_image_lo: f64,
    pub gamma_image_hi: f64,
}

/// Checks that the `eps`-box about `x0` (in beam coordinates at level `k`)
/// is eventually blown up over a full horizontal period and all of `V_{k+n}`.
pub fn blowup_check(params: &MapParams, k: usize, x0: LevelPoint, eps: f64) -> Result<(VerificationReport, BlowupResult)> {
    check_k(params, k, 2)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let x0 = LevelPoint::new(x0.y1, x0.y2, x0.t.rebase(params, k));
    let (v_lo, v_hi) = (1.5f64.ln(), 2.5f64.ln());

    let mut predicted = None;
    let mut prod = 1.0;
    for n in 1..=params.n_max() - k - 1 {
        prod *= degree(k + n);
        if 2.0 * eps * prod >= 4.0 {
            predicted = Some(n);
            break;
        }
    }
    let predicted = predicted.ok_or(Error::RangeExhausted { n_max: params.n_max() })?;

    let mut rep = VerificationReport::new(format!("blow-up k={k} eps={eps}"));
    let (mut lo, mut hi) = (x0.t.offset - eps, x0.t.offset + eps);
    let mut expansion = 1.0;
    let mut affine_ok = true;
    for n in 1..=params.n_max() - k - 1 {
        let lvl = k + n - 1;
        // the whole box must sit in the power ring of its level for the step to be affine
        affine_ok &= lo >= 1.0 / degree(lvl) && hi <= params.gap(lvl);
        let d = degree(lvl + 1);
        lo = d * (lo - LN_2);
        hi = d * (hi - LN_2);
        expansion *= d;
        let side = 2.0 * eps * expansion;
        let (gamma, _) = gamma_ring(params, k, n)?;
        let (g_lo, g_hi) = image_interval(params, k, n, gamma.ring.t_in(), gamma.ring.t_out());
        if side >= 4.0 && lo <= v_lo && hi >= v_hi {
            rep.push(Check::flag("box stays in power rings before the last step", affine_ok));
            rep.push(Check::above("horizontal side covers a period", side, 4.0 - 1e-12));
            rep.push(Check::flag("vertical image covers V_{k+n}", lo <= v_lo && hi >= v_hi));
            rep.push(Check::at_most("Gamma_{k,n} maps onto V_{k+n}", (g_lo - v_lo).abs().max((g_hi - v_hi).abs()), 1e-10));
            rep.push(
                Check::flag("minimal n matches expansion count", n == predicted)
                    .with_detail(format!("found {n}, expansion alone needs {predicted}")),
            );
            // affine form agrees with stepping f itself at the box centre
            let mut p = x0;
            for _ in 0..n {
                p = eval_anchored(params, p)?.0;
            }
            let centre = d_affine(x0.t.offset, params, k, n);
            rep.push(Check::at_most(
                "affine form matches orbit of the centre",
                (p.t.rebase(params, k + n).offset - centre).abs(),
                1e-8 * centre.abs().max(1.0),
            ));
            let res = BlowupResult {
                n,
                predicted_n: predicted,
                expansion,
                horizontal_side: side,
                image_lo: lo,
                image_hi: hi,
                gamma_image_lo: g_lo,
                gamma_image_hi: g_hi,
            };
            return Ok((rep, res));
        }
    }
    Err(Error::RangeExhausted { n_max: params.n_max() })
}

fn d_affine(s: f64, params: &MapParams, k: usize, n: usize) -> f64 {
    let _ = params;
    (k + 1..=k + n).fold(s, |s, m| degree(m) * (s - LN_2))
}

fn image_interval(params: &MapParams, k: usize, n: usize, lo: f64, hi: f64) -> (f64, f64) {
    (d_affine(lo, params, k, n), d_affine(hi, params, k, n))
}
