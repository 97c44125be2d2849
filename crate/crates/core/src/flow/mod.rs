// SPDX-License-Identifier: Apache-2.0
//! End-to-end flow: simulate, map in both cost modes, verify, report.

mod commands;
mod report;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_bench, cmd_compare, cmd_map, cmd_simulate, BenchSummary, MapSummary, SimulateSummary};
pub use report::{delta_percent, CircuitResult, ComparisonReport, ModeRow};

use crate::mapper::CostMode;
use crate::netlist::{parse_aiger, parse_blif, Netlist};
use crate::sim::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Aiger,
    Blif,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Aiger => "aiger",
            InputFormat::Blif => "blif",
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "aag" => Some(InputFormat::Aiger),
            "blif" => Some(InputFormat::Blif),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Simulate,
    Map,
    Compare,
    Bench,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Simulate => "simulate",
            Verb::Map => "map",
            Verb::Compare => "compare",
            Verb::Bench => "bench",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub verb: Verb,
    /// Design file and its format; unused by `bench`.
    pub input: Option<(PathBuf, InputFormat)>,
    /// Circuit directory for `bench`.
    pub bench_dir: Option<PathBuf>,
    /// Stimulus file; random vectors when absent.
    pub stimulus: Option<PathBuf>,
    pub cycles: u64,
    pub seed: u64,
    pub track: Vec<String>,
    pub k: usize,
    pub priority: usize,
    pub hot_percentile: f64,
    pub mode: Option<CostMode>,
    pub dump: Option<PathBuf>,
    pub out: PathBuf,
}

impl FlowConfig {
    pub fn new(verb: Verb, out: impl Into<PathBuf>) -> Self {
        FlowConfig {
            verb,
            input: None,
            bench_dir: None,
            stimulus: None,
            cycles: 1000,
            seed: 0,
            track: Vec::new(),
            k: 4,
            priority: 8,
            hot_percentile: 80.0,
            mode: None,
            dump: None,
            out: out.into(),
        }
    }

    pub fn with_input(mut self, path: impl Into<PathBuf>, format: InputFormat) -> Self {
        self.input = Some((path.into(), format));
        self
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<(), FlowError> {
        let mut problems = Vec::new();
        match self.verb {
            Verb::Bench => {
                if self.bench_dir.is_none() {
                    problems.push("bench needs a circuit directory".to_string());
                }
                if self.input.is_some() {
                    problems.push("bench takes a directory, not --aiger/--blif".to_string());
                }
                if self.stimulus.is_some() {
                    problems.push("bench reads <name>.stim next to each circuit; --stimulus is not accepted".to_string());
                }
            }
            _ => match &self.input {
                None => problems.push("exactly one of --aiger or --blif is required".to_string()),
                Some((path, _)) => {
                    if design_name(path).is_none() {
                        problems.push(format!("cannot derive a design name from `{}`", path.display()));
                    }
                }
            },
        }
        if self.cycles == 0 {
            problems.push("--cycles must be at least 1".to_string());
        }
        if self.track.iter().any(|g| g.is_empty()) {
            problems.push("--track patterns must not be empty".to_string());
        }
        if !(2..=8).contains(&self.k) {
            problems.push(format!("--k {} is outside 2..=8", self.k));
        }
        if self.priority == 0 {
            problems.push("--priority must be at least 1".to_string());
        }
        if !(0.0..=100.0).contains(&self.hot_percentile) {
            problems.push(format!("--hot-percentile {} is outside 0..=100", self.hot_percentile));
        }
        if self.verb == Verb::Map {
            match self.mode {
                None => problems.push("map needs --mode".to_string()),
                Some(CostMode::Simopt) if self.dump.is_none() => problems.push("--mode simopt needs --dump".to_string()),
                _ => {}
            }
        }
        if self.verb != Verb::Map && self.mode.is_some() {
            problems.push(format!("--mode is only accepted by map, not {}", self.verb.as_str()));
        }
        if self.verb != Verb::Map && self.dump.is_some() {
            problems.push(format!("--dump is only accepted by map, not {}", self.verb.as_str()));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(FlowError::Config(problems))
        }
    }
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("stimulus error: {0}")]
    Stimulus(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Dump { path: PathBuf, msg: String },
    #[error("{design} ({mode}): mapped netlist is not equivalent to the source: {msg}")]
    Equivalence { design: String, mode: &'static str, msg: String },
}

impl FlowError {
    pub fn exit_code(&self) -> i32 {
        match self {
            FlowError::Config(_) | FlowError::Parse { .. } => 1,
            FlowError::Stimulus(_) => 2,
            FlowError::Io { .. } => 3,
            FlowError::Dump { .. } => 4,
            FlowError::Equivalence { .. } => 5,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        FlowError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn from_sim(e: SimError) -> Self {
        match e {
            SimError::ZeroCycles | SimError::EmptyGlob => FlowError::Config(vec![e.to_string()]),
            SimError::Stimulus { .. } | SimError::StimulusTooShort { .. } => FlowError::Stimulus(e.to_string()),
            SimError::Io { path, source } => FlowError::Io { path, source },
            SimError::Dump(d) => FlowError::Config(vec![d.to_string()]),
        }
    }
}

/// File stem, provided it is usable as a single token.
pub fn design_name(path: &Path) -> Option<String> {
    let stem = path.file_stem()?.to_str()?;
    (!stem.is_empty() && !stem.chars().any(|c| c.is_whitespace() || c.is_control())).then(|| stem.to_string())
}

pub fn load_netlist(path: &Path, format: InputFormat) -> Result<Netlist, FlowError> {
    let bytes = std::fs::read(path).map_err(|e| FlowError::io(path, e))?;
    let parsed = match format {
        InputFormat::Aiger => parse_aiger(&bytes),
        InputFormat::Blif => parse_blif(&bytes),
    };
    parsed.map_err(|e| FlowError::Parse { path: path.to_path_buf(), msg: e.to_string() })
}
