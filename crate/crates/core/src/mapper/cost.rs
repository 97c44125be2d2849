// SPDX-License-Identifier: Apache-2.0
//! Per-cut area costs and their mapping-level sums.

use std::f64::consts::LN_10;

use super::{Cut, MapParams, ScoreTable};
use crate::netlist::MappedNetlist;
use crate::SATURATED;

/// `|leaves| / K` times the output weight.
pub fn cut_area_cost(c: &Cut, p: &MapParams) -> f64 {
    lut_cost(c.leaves.len(), p.k()) * c.outputs_weight as f64
}

fn lut_cost(leaves: usize, k: usize) -> f64 {
    leaves as f64 / k as f64
}

/// `log10(s / (1 + s)) + 1` clamped to `[0, 1]`, with 0 at `s = 0` and
/// exactly 1 at the sentinel.
pub fn simopt_scale_factor(score: u64) -> f64 {
    match score {
        0 => 0.0,
        SATURATED => 1.0,
        s => (1.0 - (1.0 / s as f64).ln_1p() / LN_10).clamp(0.0, 1.0),
    }
}

/// The cut's area cost scaled by the activity of its root.
pub fn simopt_area_cost(c: &Cut, p: &MapParams, s: &ScoreTable) -> f64 {
    cut_area_cost(c, p) * simopt_scale_factor(s.score(c.root))
}

/// Sum of `|leaves| / K` over all LUTs.
pub fn mapping_area(m: &MappedNetlist, k: usize) -> f64 {
    m.luts().iter().map(|l| lut_cost(l.leaves.len(), k)).sum()
}

/// Sum of activity-scaled LUT costs; a LUT is scored by the subject net it implements.
pub fn simopt_mapping_area(m: &MappedNetlist, k: usize, s: &ScoreTable) -> f64 {
    m.luts()
        .iter()
        .map(|l| {
            let score = m.provenance(l.root).map_or(SATURATED, |net| s.score(net));
            lut_cost(l.leaves.len(), k) * simopt_scale_factor(score)
        })
        .sum()
}
