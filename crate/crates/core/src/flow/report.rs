// SPDX-License-Identifier: Apache-2.0
//! Comparison reports: aligned text table, canonical data file, timing file.

use std::fmt::Write;
use std::time::Duration;

use crate::equiv::EquivStats;
use crate::mapper::{CostMode, DepthMetrics};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub mode: CostMode,
    pub metrics: DepthMetrics,
    /// Sum of `|leaves| / K` over the selected LUTs.
    pub area: f64,
    /// Same sum with every LUT scaled by its activity factor.
    pub simopt_area: f64,
    pub map_runtime: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitResult {
    pub name: String,
    pub vanilla: ModeRow,
    pub simopt: ModeRow,
    pub sim_runtime: Duration,
    pub untracked_runtime: Duration,
    pub equivalence: EquivStats,
}

impl CircuitResult {
    /// Tracked over untracked simulation time.
    pub fn overhead(&self) -> f64 {
        let base = self.untracked_runtime.as_secs_f64();
        if base > 0.0 {
            self.sim_runtime.as_secs_f64() / base
        } else {
            1.0
        }
    }
}

/// `(vanilla - simopt) / vanilla * 100`, or 0 when vanilla is 0.
pub fn delta_percent(vanilla: f64, simopt: f64) -> f64 {
    if vanilla == 0.0 {
        0.0
    } else {
        (vanilla - simopt) / vanilla * 100.0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonReport {
    /// Sorted by name.
    pub circuits: Vec<CircuitResult>,
    /// Circuit name and error message, sorted by name.
    pub failures: Vec<(String, String)>,
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').trim_matches(|c| c == '0' || c == '.').is_empty() {
        "0.000000".to_string()
    } else {
        s
    }
}

fn flag(m: &DepthMetrics) -> &'static str {
    m.flag.map_or("-", |f| f.as_str())
}

fn row_cells(name: &str, row: &ModeRow) -> Vec<String> {
    let m = &row.metrics;
    vec![
        name.to_string(),
        row.mode.as_str().to_string(),
        m.lut_count.to_string(),
        m.max_level.to_string(),
        m.hot_depth.to_string(),
        flag(m).to_string(),
        fixed(row.area),
        fixed(row.simopt_area),
    ]
}

fn delta_cells(c: &CircuitResult) -> Vec<String> {
    let (v, s) = (&c.vanilla, &c.simopt);
    vec![
        c.name.clone(),
        "delta%".to_string(),
        fixed(delta_percent(v.metrics.lut_count as f64, s.metrics.lut_count as f64)),
        fixed(delta_percent(v.metrics.max_level as f64, s.metrics.max_level as f64)),
        fixed(delta_percent(v.metrics.hot_depth as f64, s.metrics.hot_depth as f64)),
        "-".to_string(),
        fixed(delta_percent(v.area, s.area)),
        fixed(delta_percent(v.simopt_area, s.simopt_area)),
    ]
}

impl ComparisonReport {
    pub fn sort(&mut self) {
        self.circuits.sort_by(|a, b| a.name.cmp(&b.name));
        self.failures.sort();
    }

    pub fn to_text(&self) -> String {
        let header: Vec<String> =
            ["circuit", "mode", "luts", "max_level", "hot_depth", "hot_flag", "area", "area_simopt"].map(String::from).to_vec();
        let mut rows = vec![header];
        for c in &self.circuits {
            rows.push(row_cells(&c.name, &c.vanilla));
            rows.push(row_cells(&c.name, &c.simopt));
            rows.push(delta_cells(c));
        }
        let widths: Vec<usize> = (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        for (name, msg) in &self.failures {
            let _ = writeln!(out, "FAILED {name}: {msg}");
        }
        out
    }

    /// Line-oriented `key=value` records, one per circuit and mode.
    pub fn to_data(&self) -> String {
        let mut out = String::from("simopt-report v1\n");
        for c in &self.circuits {
            for row in [&c.vanilla, &c.simopt] {
                let m = &row.metrics;
                let _ = writeln!(
                    out,
                    "row {} {} area={} area_simopt={} hot_depth={} hot_flag={} hot_threshold={} lut_count={} max_level={}",
                    c.name,
                    row.mode.as_str(),
                    fixed(row.area),
                    fixed(row.simopt_area),
                    m.hot_depth,
                    flag(m),
                    m.hot_threshold.map_or("-".to_string(), |t| t.to_string()),
                    m.lut_count,
                    m.max_level,
                );
            }
            let d = delta_cells(c);
            let _ = writeln!(
                out,
                "delta {} area={} area_simopt={} hot_depth={} lut_count={} max_level={}",
                c.name, d[6], d[7], d[4], d[2], d[3]
            );
            let _ = writeln!(
                out,
                "equivalence {} exhaustive={} vectors={}",
                c.name, c.equivalence.exhaustive as u8, c.equivalence.vectors
            );
        }
        for (name, msg) in &self.failures {
            let _ = writeln!(out, "failure {name} {}", msg.replace('\n', " "));
        }
        out
    }

    /// Wall-clock measurements; these vary between runs.
    pub fn to_timing(&self) -> String {
        let mut out = String::new();
        for c in &self.circuits {
            let _ = writeln!(
                out,
                "{} sim_runtime_s={:.6} untracked_runtime_s={:.6} overhead={:.3} map_runtime_vanilla_s={:.6} map_runtime_simopt_s={:.6}",
                c.name,
                c.sim_runtime.as_secs_f64(),
                c.untracked_runtime.as_secs_f64(),
                c.overhead(),
                c.vanilla.map_runtime.as_secs_f64(),
                c.simopt.map_runtime.as_secs_f64(),
            );
        }
        out
    }
}
