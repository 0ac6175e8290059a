//! `qr3 growth-design`: lambda sequences with prescribed orders of growth.

use serde::Serialize;

use qr3_core::growth::{design_fast_growth, design_slow_growth, growth_point, GrowthDesign};
use qr3_core::report::{Check, VerificationReport};
use qr3_core::Result;

use crate::config::{GrowthMode, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub k: usize,
    pub witness_index: usize,
    pub log_r: f64,
    pub order: f64,
    /// `eta_k` in fast mode, `eps_k` in slow mode.
    pub target: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthOutput {
    pub design: GrowthDesign,
    /// `sum_{j <= n} log lambda_j` at each witness index.
    pub lambda_sums: Vec<f64>,
    pub certificates: Vec<Certificate>,
    pub report: VerificationReport,
}

pub fn run(cfg: &RunConfig) -> Result<GrowthOutput> {
    let g = &cfg.growth;
    let design = match g.mode {
        GrowthMode::Fast => design_fast_growth(g.log_r, &g.log_t, &g.eta)?,
        GrowthMode::Slow => design_slow_growth(g.log_r, &g.eps)?,
    };
    // certify again from scratch rather than trusting the designer
    let gp = design.params()?;
    let targets = match g.mode {
        GrowthMode::Fast => &g.eta,
        GrowthMode::Slow => &g.eps,
    };
    let mut report = VerificationReport::new("growth-design");
    let mut certificates = Vec::new();
    let mut lambda_sums = Vec::new();
    for (k, (&n, &target)) in design.witness_index.iter().zip(targets).enumerate() {
        let w = growth_point(&gp, n)?;
        let passed = match g.mode {
            GrowthMode::Fast => w.order >= target && w.log_r < g.log_t[k],
            GrowthMode::Slow => w.order <= target,
        };
        let name = match g.mode {
            GrowthMode::Fast => format!("k={}: order >= eta and r < T", k + 1),
            GrowthMode::Slow => format!("k={}: order <= eps", k + 1),
        };
        report.push(Check { name, measured: w.order, tolerance: target, passed, detail: format!("log r = {}", w.log_r) });
        certificates.push(Certificate { k: k + 1, witness_index: n, log_r: w.log_r, order: w.order, target, passed });
        lambda_sums.push(design.lambda_log[..n].iter().sum());
    }
    report.push(Check::flag("one witness per target", design.witness_index.len() == targets.len()));
    report.push(Check::flag(
        "sum of log lambda strictly increasing over the witnesses",
        lambda_sums.windows(2).all(|w: &[f64]| w[0] < w[1]),
    ));
    Ok(GrowthOutput { design, lambda_sums, certificates, report })
}
