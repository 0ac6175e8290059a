//! Flood-fill census of the components of `g^{-1}(X)`.
//!
//! Works in lifted coordinates `w = d Z^{-1}(x)`, where the ring
//! `A(1, e^{1/d})` becomes `[-d, 3d] x [-d, d] x [0, 1]`: `2 d^2` cells of
//! side 2 bounded by the walls. Components cannot pass through a flap, and
//! above the flaps `g` sends the walls to the boundary lines of the Zorich
//! squares where `X` is empty, so each cell is filled on its own. Wall
//! voxels whose foot on the wall lies in `X` are counted to confirm this.
//!
//! Neighbouring voxels are joined only when the midpoint between them is in
//! `X` as well. Near the flap images the gaps between components are
//! thinner than a voxel, and plain 6-connectivity would bridge them.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::interp::{classify_beam, g_beam, in_x, ComponentKind, FLAP_HEIGHT};
use crate::power::check_odd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentLabel {
    /// Meets the base plane away from the walls.
    Base,
    /// Meets a flap and not the base plane.
    Flap,
    /// Meets neither; the grid is too coarse to resolve it.
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellCensus {
    /// Centre of the cell in lifted coordinates.
    pub centre: (i64, i64),
    pub base: usize,
    pub flap: usize,
    pub ambiguous: usize,
    /// Wall voxels above the flap height whose foot on the wall is in `X`.
    pub wall_contacts_above_flap: usize,
    pub voxels_in_components: u64,
    /// Voxels whose simplex classification disagrees with their component label.
    pub classifier_mismatches: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub d: u64,
    pub grid_n: usize,
    pub cells: Vec<CellCensus>,
    pub total: usize,
    pub base: usize,
    pub flap: usize,
    pub ambiguous: usize,
    pub wall_contacts_above_flap: usize,
    pub voxels_in_components: u64,
    pub classifier_mismatches: u64,
}

impl ComponentCensus {
    /// Fraction of component voxels whose classification matches.
    pub fn classifier_agreement(&self) -> f64 {
        if self.voxels_in_components == 0 {
            return f64::NAN;
        }
        1.0 - self.classifier_mismatches as f64 / self.voxels_in_components as f64
    }
}

fn census_cell(cx: i64, cy: i64, n: usize) -> CellCensus {
    let idx = |a: usize, b: usize, c: usize| (c * n + b) * n + a;
    let point = |a: usize, b: usize, c: usize| {
        let s = 2.0 / n as f64;
        Vec3::new(
            cx as f64 - 1.0 + (a as f64 + 0.5) * s,
            cy as f64 - 1.0 + (b as f64 + 0.5) * s,
            (c as f64 + 0.5) / n as f64,
        )
    };
    let mut inside = vec![false; n * n * n];
    for c in 0..n {
        for b in 0..n {
            for a in 0..n {
                inside[idx(a, b, c)] = in_x(g_beam(point(a, b, c)));
            }
        }
    }
    let on_wall = |a: usize, b: usize| a == 0 || b == 0 || a == n - 1 || b == n - 1;
    let foot_in_x = |a: usize, b: usize, c: usize| {
        let p = point(a, b, c);
        let mut feet = Vec::new();
        if a == 0 || a == n - 1 {
            feet.push(p.with(0, cx as f64 + if a == 0 { -1.0 } else { 1.0 }));
        }
        if b == 0 || b == n - 1 {
            feet.push(p.with(1, cy as f64 + if b == 0 { -1.0 } else { 1.0 }));
        }
        feet.into_iter().any(|f| in_x(g_beam(f)))
    };
    let joined = |i: usize, j: usize| {
        let (pi, pj) = (point(i % n, (i / n) % n, i / (n * n)), point(j % n, (j / n) % n, j / (n * n)));
        in_x(g_beam(0.5 * (pi + pj)))
    };

    let mut labels = vec![u32::MAX; n * n * n];
    let mut cell = CellCensus {
        centre: (cx, cy),
        base: 0,
        flap: 0,
        ambiguous: 0,
        wall_contacts_above_flap: 0,
        voxels_in_components: 0,
        classifier_mismatches: 0,
    };
    let mut queue = VecDeque::new();
    let mut members = Vec::new();
    let mut next = 0u32;
    for start in 0..inside.len() {
        if !inside[start] || labels[start] != u32::MAX {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        members.clear();
        let (mut base, mut flap) = (false, false);
        while let Some(i) = queue.pop_front() {
            members.push(i);
            let (a, b, c) = (i % n, (i / n) % n, i / (n * n));
            let w3 = (c as f64 + 0.5) / n as f64;
            if on_wall(a, b) {
                if w3 < FLAP_HEIGHT {
                    flap = true;
                } else if foot_in_x(a, b, c) {
                    cell.wall_contacts_above_flap += 1;
                }
            } else if c == 0 {
                base = true;
            }
            let mut visit = |j: usize| {
                if inside[j] && labels[j] == u32::MAX && joined(i, j) {
                    labels[j] = next;
                    queue.push_back(j);
                }
            };
            if a > 0 {
                visit(i - 1);
            }
            if a + 1 < n {
                visit(i + 1);
            }
            if b > 0 {
                visit(i - n);
            }
            if b + 1 < n {
                visit(i + n);
            }
            if c > 0 {
                visit(i - n * n);
            }
            if c + 1 < n {
                visit(i + n * n);
            }
        }
        let label = if base {
            ComponentLabel::Base
        } else if flap {
            ComponentLabel::Flap
        } else {
            ComponentLabel::Ambiguous
        };
        match label {
            ComponentLabel::Base => cell.base += 1,
            ComponentLabel::Flap => cell.flap += 1,
            ComponentLabel::Ambiguous => cell.ambiguous += 1,
        }
        if label != ComponentLabel::Ambiguous {
            let want = if label == ComponentLabel::Base { ComponentKind::Base } else { ComponentKind::Flap };
            for &i in &members {
                let (a, b, c) = (i % n, (i / n) % n, i / (n * n));
                cell.voxels_in_components += 1;
                if classify_beam(point(a, b, c)) != want {
                    cell.classifier_mismatches += 1;
                }
            }
        }
        next += 1;
    }
    cell
}

/// Counts and labels the components of `g^{-1}(X)` for degree `d` on a
/// grid of `grid_n^3` voxels per cell.
pub fn component_oracle(d: u64, grid_n: usize) -> Result<ComponentCensus> {
    check_odd(d)?;
    if grid_n < 64 {
        return Err(Error::InvalidParameter(format!("grid_n must be at least 64, got {grid_n}")));
    }
    let di = d as i64;
    let centres: Vec<(i64, i64)> = (-di + 1..=3 * di - 1)
        .step_by(2)
        .flat_map(|cx| (-di + 1..=di - 1).step_by(2).map(move |cy| (cx, cy)))
        .collect();
    let cells: Vec<CellCensus> = centres.par_iter().map(|&(cx, cy)| census_cell(cx, cy, grid_n)).collect();
    let sum = |f: fn(&CellCensus) -> usize| cells.iter().map(f).sum::<usize>();
    let (base, flap, ambiguous) = (sum(|c| c.base), sum(|c| c.flap), sum(|c| c.ambiguous));
    Ok(ComponentCensus {
        d,
        grid_n,
        total: base + flap + ambiguous,
        base,
        flap,
        ambiguous,
        wall_contacts_above_flap: sum(|c| c.wall_contacts_above_flap),
        voxels_in_components: cells.iter().map(|c| c.voxels_in_components).sum(),
        classifier_mismatches: cells.iter().map(|c| c.classifier_mismatches).sum(),
        cells,
    })
}
