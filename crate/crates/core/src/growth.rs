//! Maps with free stretching factors `lambda_n >= 1` between the rings, their
//! maximum modulus at grid radii, and designers that prescribe fast or slow
//! growth along a sequence of radii.
//!
//! With `R_1 = R`, `S_n = e^{1/d_n} R_n`, `R_{n+1} = lambda_n S_n`,
//! `C_1 = R^{-6}` and `C_{n+1} = C_n R_{n+1}^{-2 d_{n+1}}`, the map is `p_3`
//! inside `R_1`, `F_{R_n, d_n, C_{n-1}}` on `[R_n, S_n]` (with `C_0 = 1`) and
//! `C_n p_{d_{n+1}}` on `[S_n, R_{n+1}]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layered::{degree, LayeredMap, Regime};
use crate::zorich::BeamPoint;

/// Longest λ-sequence accepted; `3^n` and `log C_n` stay finite below this.
pub const MAX_GROWTH_LEVELS: usize = 600;

/// Interpolation rings above this level are not evaluated (`3^n` must fit `u64`).
pub const MAX_EVAL_LEVEL: usize = 39;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    log_r1: f64,
    /// `log lambda_n`, index `n - 1`.
    lambda_log: Vec<f64>,
    /// `log R_n` for `n = 1..=N + 1`, index `n - 1`.
    log_r: Vec<f64>,
    /// `log C_n` for `n = 0..=N + 1`, index `n`.
    log_c: Vec<f64>,
}

pub fn build_growth(r: f64, lambda_log: &[f64]) -> Result<GrowthParams> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("R must exceed 1, got {r}")));
    }
    build_growth_log(r.ln(), lambda_log)
}

pub fn build_growth_log(log_r1: f64, lambda_log: &[f64]) -> Result<GrowthParams> {
    if !(log_r1 > 0.0) || !log_r1.is_finite() {
        return Err(Error::InvalidParameter(format!("log R must be positive, got {log_r1}")));
    }
    if lambda_log.len() > MAX_GROWTH_LEVELS {
        return Err(Error::RangeExhausted { n_max: MAX_GROWTH_LEVELS });
    }
    if let Some((i, l)) = lambda_log.iter().enumerate().find(|(_, l)| !(**l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda_{} must be at least 1, got log {l}", i + 1)));
    }
    let mut gp = GrowthParams { log_r1, lambda_log: Vec::new(), log_r: vec![log_r1], log_c: vec![0.0, -6.0 * log_r1] };
    for &l in lambda_log {
        gp.push(l);
    }
    Ok(gp)
}

impl GrowthParams {
    /// Appends `lambda_{N+1}`; the caller has validated it.
    fn push(&mut self, lambda_log: f64) {
        let n = self.lambda_log.len() + 1;
        self.lambda_log.push(lambda_log);
        let r = lambda_log + self.log_s(n);
        self.log_r.push(r);
        let c = self.log_c[n] - 2.0 * degree(n + 1) * r;
        self.log_c.push(c);
    }

    fn pop(&mut self) {
        self.lambda_log.pop();
        self.log_r.pop();
        self.log_c.pop();
    }

    /// Number of λ's, so `R_1, ..., R_{N+1}` are defined.
    pub fn len(&self) -> usize {
        self.lambda_log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_log.is_empty()
    }

    pub fn lambda_log(&self) -> &[f64] {
        &self.lambda_log
    }

    pub fn log_r1(&self) -> f64 {
        self.log_r1
    }

    /// `1 <= n <= N + 1`.
    pub fn log_r(&self, n: usize) -> f64 {
        self.log_r[n - 1]
    }

    pub fn log_s(&self, n: usize) -> f64 {
        self.log_r[n - 1] + 1.0 / degree(n)
    }

    /// `0 <= n <= N + 1`, with `C_0 = 1`.
    pub fn log_c(&self, n: usize) -> f64 {
        self.log_c[n]
    }

    /// `sum_{j <= N} log lambda_j`; the map is entire only if this grows without bound.
    pub fn lambda_sum(&self) -> f64 {
        self.lambda_log.iter().sum()
    }

    /// The map restricted to `|x| <= R_{levels + 1}`, in absolute log-radius.
    pub fn layered(&self, levels: usize) -> Result<LayeredMap> {
        if levels == 0 || levels > self.len() || levels > MAX_EVAL_LEVEL {
            return Err(Error::RangeExhausted { n_max: self.len().min(MAX_EVAL_LEVEL) });
        }
        LayeredMap::new(
            self.log_r[..=levels].to_vec(),
            self.log_c[..=levels].to_vec(),
            self.log_c[1..=levels].to_vec(),
        )
    }
}

/// `log R_{n+1}` from the product formula.
pub fn closed_form_log_r(gp: &GrowthParams, n: usize) -> f64 {
    let lam: f64 = gp.lambda_log[..n].iter().sum();
    let tail: f64 = (1..=n).map(|j| 1.0 / degree(j)).sum();
    lam + tail + gp.log_r1
}

/// `log S_{n+1}` from the product formula.
pub fn closed_form_log_s(gp: &GrowthParams, n: usize) -> f64 {
    closed_form_log_r(gp, n) + 1.0 / degree(n + 1)
}

/// `(log M(R_{n+1}, f), log M(S_{n+1}, f))` from the closed form; `n <= N`.
pub fn max_modulus_closed_form(gp: &GrowthParams, n: usize) -> Result<(f64, f64)> {
    if n > gp.len() {
        return Err(Error::RangeExhausted { n_max: gp.len() });
    }
    // 0 * 3^j is skipped so that long stalls never form inf * 0
    let lam: f64 = gp.lambda_log[..n]
        .iter()
        .enumerate()
        .filter(|(_, l)| **l > 0.0)
        .map(|(j, l)| degree(j + 2) * l)
        .sum();
    let base = lam + 3.0 * gp.log_r1;
    Ok((base + 3.0 * n as f64, base + 3.0 * (n + 1) as f64))
}

/// `(log M(R_{n+1}, f), log M(S_{n+1}, f))` from the branch coefficients,
/// `log C_n + d_{n+1} log R_{n+1}` and the outer edge of the interpolation.
/// Loses absolute precision once `d_{n+1} log R_{n+1}` is large.
pub fn max_modulus_direct(gp: &GrowthParams, n: usize) -> Result<(f64, f64)> {
    if n > gp.len() {
        return Err(Error::RangeExhausted { n_max: gp.len() });
    }
    let m = n + 1;
    let at_r = gp.log_c(n) + degree(m) * gp.log_r(m);
    let at_s = gp.log_c(n) - 2.0 * degree(m) * gp.log_r(m) + 3.0 * degree(m) * gp.log_s(m);
    Ok((at_r, at_s))
}

/// One step of the map on an absolute beam point.
pub fn eval_growth_map(gp: &GrowthParams, p: BeamPoint) -> Result<(BeamPoint, Regime)> {
    let levels = gp.len().min(MAX_EVAL_LEVEL);
    gp.layered(levels)?.eval(p)
}

/// `log log M(r) / log r` at a grid radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub log_r: f64,
    pub log_log_m: f64,
    pub order: f64,
}

impl GrowthPoint {
    pub fn new(log_r: f64, log_m: f64) -> Self {
        let log_log_m = if log_m > 0.0 { log_m.ln() } else { f64::NEG_INFINITY };
        GrowthPoint { log_r, log_log_m, order: log_log_m / log_r }
    }
}

/// `GrowthPoint` at `R_{n+1}` from the closed form.
pub fn growth_point(gp: &GrowthParams, n: usize) -> Result<GrowthPoint> {
    let (m, _) = max_modulus_closed_form(gp, n)?;
    Ok(GrowthPoint::new(closed_form_log_r(gp, n), m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDesign {
    pub log_r1: f64,
    pub lambda_log: Vec<f64>,
    /// Index `n` with witness radius `R_{n+1}`.
    pub witness_index: Vec<usize>,
    pub witnesses: Vec<GrowthPoint>,
}

impl GrowthDesign {
    pub fn params(&self) -> Result<GrowthParams> {
        build_growth_log(self.log_r1, &self.lambda_log)
    }
}

fn check_increasing(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(format!("{name} must be finite and strictly increasing")));
    }
    Ok(())
}

/// Radii `r_k < T_k` with `order(r_k) >= eta_k`.
///
/// For each target the sequence stalls (`lambda = 1`) until the degree is
/// high enough that a single stretch up to `T_k / e` reaches the order; the
/// stretch is then taken and `R_{n+1} = T_k / e` is the witness.
pub fn design_fast_growth(log_r1: f64, log_t: &[f64], eta: &[f64]) -> Result<GrowthDesign> {
    if log_t.len() != eta.len() {
        return Err(Error::InvalidParameter("T and eta must have equal length".into()));
    }
    check_increasing("log T", log_t)?;
    if log_t.windows(2).any(|w| !(w[1] - w[0] > 1.0)) {
        return Err(Error::InvalidParameter("consecutive T must grow by more than e".into()));
    }
    if eta.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidParameter("eta must be finite".into()));
    }
    let mut gp = build_growth_log(log_r1, &[])?;
    let mut design = GrowthDesign { log_r1, lambda_log: Vec::new(), witness_index: Vec::new(), witnesses: Vec::new() };
    for (&lt, &target) in log_t.iter().zip(eta) {
        let anchor = lt - 1.0;
        loop {
            let n = gp.len();
            // the current outer radius may already do
            if n > 0 && !design.witness_index.contains(&n) {
                let w = growth_point(&gp, n)?;
                if gp.log_r(n + 1) < lt && w.order >= target {
                    design.witness_index.push(n);
                    design.witnesses.push(w);
                    break;
                }
            }
            if n >= MAX_GROWTH_LEVELS {
                return Err(Error::RangeExhausted { n_max: MAX_GROWTH_LEVELS });
            }
            let stretch = anchor - gp.log_s(n + 1);
            if stretch >= 0.0 {
                gp.push(stretch);
                let w = growth_point(&gp, n + 1)?;
                if w.order >= target {
                    design.witness_index.push(n + 1);
                    design.witnesses.push(w);
                    break;
                }
                gp.pop();
            }
            gp.push(0.0);
        }
    }
    design.lambda_log = gp.lambda_log.clone();
    Ok(design)
}

/// Radii `r_k` with `order(r_k) <= eps_k`, one new stretch per target.
///
/// `lambda_{n+1} = e^y` with `y` found by doubling and then bisection to
/// `1e-9`, viewing the order at `R_{n+2}` as a function of `y`.
pub fn design_slow_growth(log_r1: f64, eps: &[f64]) -> Result<GrowthDesign> {
    if eps.iter().any(|e| !(*e > 0.0) || !e.is_finite()) || eps.windows(2).any(|w| !(w[1] <= w[0])) {
        return Err(Error::InvalidParameter("eps must be positive and non-increasing".into()));
    }
    let mut gp = build_growth_log(log_r1, &[])?;
    let mut design = GrowthDesign { log_r1, lambda_log: Vec::new(), witness_index: Vec::new(), witnesses: Vec::new() };
    for &e in eps {
        let n = gp.len();
        if n + 1 > MAX_GROWTH_LEVELS {
            return Err(Error::RangeExhausted { n_max: MAX_GROWTH_LEVELS });
        }
        let mut h = |y: f64| -> Result<f64> {
            gp.push(y);
            let o = growth_point(&gp, n + 1)?.order;
            gp.pop();
            Ok(o)
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        if h(lo)? > e {
            while h(hi)? > e {
                lo = hi;
                hi *= 2.0;
                if !hi.is_finite() || hi > 1e300 {
                    return Err(Error::Domain("slow growth stretch did not converge".into()));
                }
            }
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if h(mid)? > e {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        } else {
            hi = lo;
        }
        gp.push(hi);
        design.witness_index.push(n + 1);
        design.witnesses.push(growth_point(&gp, n + 1)?);
    }
    design.lambda_log = gp.lambda_log.clone();
    Ok(design)
}
