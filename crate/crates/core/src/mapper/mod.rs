// SPDX-License-Identifier: Apache-2.0
//! Priority-cut LUT mapping with activity-weighted area costs.

mod cost;
mod cover;
mod cuts;
mod metrics;

use thiserror::Error;

pub use cost::{cut_area_cost, mapping_area, simopt_area_cost, simopt_mapping_area, simopt_scale_factor};
pub use cover::{cone_truth, select_from_cuts, select_mapping};
pub use cuts::{enumerate_cuts, rank_cuts, Cut, CutDb};
pub use metrics::{depth_metrics, hot_threshold, DepthMetrics, HotFlag};

use crate::dump::Binding;
use crate::netlist::NetId;
use crate::SATURATED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostMode {
    Vanilla,
    Simopt,
}

impl CostMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CostMode::Vanilla => "vanilla",
            CostMode::Simopt => "simopt",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("LUT size {0} is outside 2..=8")]
    InvalidK(usize),
    #[error("priority list size must be at least 1")]
    InvalidPriority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapParams {
    k: usize,
    priority: usize,
    pub cost_mode: CostMode,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams { k: 4, priority: 8, cost_mode: CostMode::Vanilla }
    }
}

impl MapParams {
    pub fn new(k: usize, priority: usize, cost_mode: CostMode) -> Result<Self, MapError> {
        if !(2..=8).contains(&k) {
            return Err(MapError::InvalidK(k));
        }
        if priority == 0 {
            return Err(MapError::InvalidPriority);
        }
        Ok(MapParams { k, priority, cost_mode })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn priority(&self) -> usize {
        self.priority
    }

    pub fn with_mode(self, cost_mode: CostMode) -> Self {
        MapParams { cost_mode, ..self }
    }
}

/// Activity score for every net of the subject graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    scores: Vec<u64>,
}

impl ScoreTable {
    pub fn new(scores: Vec<u64>) -> Self {
        ScoreTable { scores }
    }

    /// Every net scored with the sentinel.
    pub fn saturated(net_count: usize) -> Self {
        ScoreTable { scores: vec![SATURATED; net_count] }
    }

    pub fn from_binding(b: &Binding) -> Self {
        ScoreTable { scores: b.scores.clone() }
    }

    /// Nets outside the table count as saturated.
    pub fn score(&self, net: NetId) -> u64 {
        self.scores.get(net.index()).copied().unwrap_or(SATURATED)
    }

    pub fn scores(&self) -> &[u64] {
        &self.scores
    }
}
