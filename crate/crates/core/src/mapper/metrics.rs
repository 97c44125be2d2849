// SPDX-License-Identifier: Apache-2.0
//! Level-based latency proxies for a mapped netlist.

use super::ScoreTable;
use crate::netlist::MappedNetlist;
use crate::SATURATED;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HotFlag {
    /// No net has a score strictly between 0 and the sentinel.
    NoActivity,
    /// A threshold exists but no LUT root reaches it.
    NoHotLuts,
}

impl HotFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            HotFlag::NoActivity => "no-activity",
            HotFlag::NoHotLuts => "no-hot-luts",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthMetrics {
    pub lut_count: usize,
    pub max_level: u32,
    /// Output name and level, in output order.
    pub output_levels: Vec<(String, u32)>,
    pub hot_threshold: Option<u64>,
    pub hot_depth: u32,
    pub flag: Option<HotFlag>,
}

/// Nearest-rank percentile of the scores strictly between 0 and the sentinel.
pub fn hot_threshold(s: &ScoreTable, hot_percentile: f64) -> Option<u64> {
    let mut population: Vec<u64> = s.scores().iter().copied().filter(|&v| v != 0 && v != SATURATED).collect();
    if population.is_empty() {
        return None;
    }
    population.sort_unstable();
    let rank = ((hot_percentile / 100.0) * population.len() as f64).ceil() as usize;
    Some(population[rank.clamp(1, population.len()) - 1])
}

/// A LUT is hot when the subject net it implements scores at least the
/// threshold; sentinel-scored nets carry no activity evidence and never count.
pub fn depth_metrics(m: &MappedNetlist, s: &ScoreTable, hot_percentile: f64) -> DepthMetrics {
    let output_levels = m.outputs().iter().map(|&net| (m.name(net).to_string(), m.level(net))).collect();
    let threshold = hot_threshold(s, hot_percentile);
    let (hot_depth, flag) = match threshold {
        None => (0, Some(HotFlag::NoActivity)),
        Some(t) => {
            let hot = m
                .luts()
                .iter()
                .filter(|l| m.provenance(l.root).map(|net| s.score(net)).is_some_and(|v| v >= t && v != SATURATED))
                .map(|l| m.level(l.root))
                .max();
            match hot {
                Some(depth) => (depth, None),
                None => (0, Some(HotFlag::NoHotLuts)),
            }
        }
    };
    DepthMetrics {
        lut_count: m.luts().len(),
        max_level: m.max_level(),
        output_levels,
        hot_threshold: threshold,
        hot_depth,
        flag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapper::{select_mapping, MapParams};
    use crate::netlist::parse_blif;

    fn design() -> crate::netlist::Netlist {
        parse_blif(b".model t\n.inputs a b c\n.outputs y\n.names a b x\n11 1\n.names x c y\n10 1\n01 1\n.end\n").unwrap()
    }

    #[test]
    fn percentile_is_nearest_rank() {
        let s = ScoreTable::new(vec![0, 5, 1, 4, 2, 3, SATURATED]);
        assert_eq!(hot_threshold(&s, 80.0), Some(4));
        assert_eq!(hot_threshold(&s, 100.0), Some(5));
        assert_eq!(hot_threshold(&s, 0.0), Some(1));
        assert_eq!(hot_threshold(&ScoreTable::new(vec![0, SATURATED]), 80.0), None);
    }

    #[test]
    fn equal_scores_make_everything_hot() {
        let n = design();
        let s = ScoreTable::new(vec![7; n.net_count()]);
        let m = select_mapping(&n, &MapParams::default(), &s);
        let d = depth_metrics(&m, &s, 80.0);
        assert_eq!(d.hot_depth, d.max_level);
        assert_eq!(d.flag, None);
    }

    #[test]
    fn flags() {
        let n = design();
        let quiet = ScoreTable::new(vec![0; n.net_count()]);
        let m = select_mapping(&n, &MapParams::default(), &quiet);
        let d = depth_metrics(&m, &quiet, 80.0);
        assert_eq!((d.hot_depth, d.flag), (0, Some(HotFlag::NoActivity)));

        let mut scores = vec![0; n.net_count()];
        scores[n.net_by_name("a").unwrap().index()] = 10;
        let inputs_only = ScoreTable::new(scores);
        let d = depth_metrics(&m, &inputs_only, 80.0);
        assert_eq!((d.hot_depth, d.flag), (0, Some(HotFlag::NoHotLuts)));
        assert_eq!(d.output_levels, vec![("y".to_string(), 1)]);
    }
}
