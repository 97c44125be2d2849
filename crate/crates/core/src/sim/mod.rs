// SPDX-License-Identifier: Apache-2.0
//! Cycle-accurate simulation with toggle tracking.
//!
//! Each cycle evaluates the combinational logic from the primary inputs and
//! current latch states, feeds every tracked signal through its tracker, and
//! then commits the latches. The first cycle only initialises tracker state.

mod glob;
mod oracle;
mod stimulus;
mod tracker;

use std::collections::HashSet;
use std::path::PathBuf;

use thiserror::Error;

pub use glob::glob_match;
pub use oracle::oracle_simulate;
pub use stimulus::parse_stimulus;
pub use tracker::{pack_bits, SimoptTracker, TrackTarget};

use crate::dump::{ActivityDump, DumpEntry};
use crate::netlist::{group_buses, Driver, NetId, Netlist};
use stimulus::RandomStimulus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stimulus {
    /// Seeded pseudo-random vectors.
    Random,
    /// Stimulus file on disk.
    File(PathBuf),
    /// Stimulus file contents.
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    /// Design name recorded in the dump.
    pub design: String,
    pub cycles: u64,
    pub seed: u64,
    /// Name globs; empty tracks everything.
    pub track_filter: Vec<String>,
    pub stimulus: Stimulus,
}

impl SimConfig {
    pub fn new(design: &str, cycles: u64, seed: u64) -> Self {
        SimConfig { design: design.to_string(), cycles, seed, track_filter: Vec::new(), stimulus: Stimulus::Random }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.cycles == 0 {
            return Err(SimError::ZeroCycles);
        }
        if self.track_filter.iter().any(|g| g.is_empty()) {
            return Err(SimError::EmptyGlob);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("cycle count must be at least 1")]
    ZeroCycles,
    #[error("track patterns must not be empty")]
    EmptyGlob,
    #[error("stimulus line {line}: {msg}")]
    Stimulus { line: usize, msg: String },
    #[error("stimulus provides {found} cycles but {needed} are required")]
    StimulusTooShort { found: u64, needed: u64 },
    #[error("cannot read stimulus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Dump(#[from] crate::dump::DumpError),
}

/// Net values for the current cycle plus latch contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    values: Vec<bool>,
    latch_state: Vec<bool>,
    latch_next: Vec<bool>,
}

impl SimState {
    /// Latches hold their initial values; all other nets are 0.
    pub fn new(n: &Netlist) -> Self {
        let latch_state: Vec<bool> = n.latches().iter().map(|l| l.init).collect();
        SimState { values: vec![false; n.net_count()], latch_next: latch_state.clone(), latch_state }
    }

    pub fn value(&self, net: NetId) -> bool {
        self.values[net.index()]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Latch contents for the cycle being evaluated.
    pub fn latch_state(&self) -> &[bool] {
        &self.latch_state
    }

    /// Values the latches will take at the next commit.
    pub fn latch_next(&self) -> &[bool] {
        &self.latch_next
    }

    /// Evaluates all nets for this cycle and computes the pending latch values.
    pub fn evaluate(&mut self, n: &Netlist, pi_values: &[bool]) {
        assert_eq!(pi_values.len(), n.inputs().len(), "primary input width mismatch");
        let v = &mut self.values;
        v[0] = false;
        for (&net, &x) in n.inputs().iter().zip(pi_values) {
            v[net.index()] = x;
        }
        for (latch, &x) in n.latches().iter().zip(&self.latch_state) {
            v[latch.state.index()] = x;
        }
        for node in n.nodes() {
            let [a, b] = node.fanin;
            v[node.out.index()] = (v[a.net.index()] ^ a.complement) & (v[b.net.index()] ^ b.complement);
        }
        for (next, latch) in self.latch_next.iter_mut().zip(n.latches()) {
            *next = v[latch.data.net.index()] ^ latch.data.complement;
        }
    }

    pub fn commit(&mut self) {
        self.latch_state.copy_from_slice(&self.latch_next);
    }

    fn gather(&self, target: &TrackTarget, words: &mut Vec<u64>) {
        let bits = target.bits();
        words.clear();
        words.resize(tracker::words_for(bits.len()), 0);
        for (i, net) in bits.iter().enumerate() {
            words[i / 64] |= (self.values[net.index()] as u64) << (i % 64);
        }
    }
}

/// One tracked cycle: evaluate, update every non-clock tracker once with the
/// post-evaluation values, then commit the latches.
pub fn simulate_cycle(n: &Netlist, s: &mut SimState, pi_values: &[bool], trackers: &mut [SimoptTracker]) {
    s.evaluate(n, pi_values);
    let mut words = Vec::new();
    for t in trackers.iter_mut().filter(|t| !t.is_clock()) {
        s.gather(t.target(), &mut words);
        t.mask_and_increment(&words);
    }
    s.commit();
}

/// Which signals get trackers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackPlan {
    /// Targets with their clock flag.
    pub targets: Vec<(TrackTarget, bool)>,
    /// Filter patterns that matched no net or bus.
    pub unmatched_globs: Vec<String>,
}

impl TrackPlan {
    pub fn tracked_bits(&self) -> usize {
        self.targets.iter().map(|(t, _)| t.width()).sum()
    }
}

/// Buses whose base name matches a pattern are tracked packed; remaining
/// nets whose flat name matches are tracked one by one. Nets named by a
/// latch clock get clock trackers and are never packed into a bus.
pub fn plan_tracking(n: &Netlist, filter: &[String]) -> TrackPlan {
    let selected = |name: &str| filter.is_empty() || filter.iter().any(|g| glob_match(g, name));
    let clocks: HashSet<NetId> = n.clock_names().iter().filter_map(|c| n.net_by_name(c)).collect();

    let mut covered = vec![false; n.net_count()];
    let mut targets = Vec::new();
    for bus in group_buses(n) {
        if bus.bits.iter().any(|b| clocks.contains(b)) || !selected(&bus.base_name) {
            continue;
        }
        for b in &bus.bits {
            covered[b.index()] = true;
        }
        targets.push((TrackTarget::Bus(bus), false));
    }
    for net in n.nets() {
        if !covered[net.index()] && selected(&n.flat_name(net)) {
            targets.push((TrackTarget::Net(net), clocks.contains(&net)));
        }
    }

    let buses = group_buses(n);
    let unmatched_globs = filter
        .iter()
        .filter(|g| {
            !buses.iter().any(|b| glob_match(g, &b.base_name)) && !n.nets().any(|net| glob_match(g, &n.flat_name(net)))
        })
        .cloned()
        .collect();
    TrackPlan { targets, unmatched_globs }
}

/// Produces the primary-input vector for each cycle.
pub(crate) enum StimulusSource {
    Random(RandomStimulus),
    Rows(std::vec::IntoIter<Vec<bool>>),
}

impl StimulusSource {
    pub(crate) fn new(n: &Netlist, cfg: &SimConfig) -> Result<Self, SimError> {
        Ok(match &cfg.stimulus {
            Stimulus::Random => StimulusSource::Random(RandomStimulus::new(cfg.seed)),
            Stimulus::Text(text) => StimulusSource::Rows(parse_stimulus(n, text, cfg.cycles)?.into_iter()),
            Stimulus::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| SimError::Io { path: path.clone(), source })?;
                StimulusSource::Rows(parse_stimulus(n, &text, cfg.cycles)?.into_iter())
            }
        })
    }

    pub(crate) fn next_into(&mut self, pis: &mut [bool]) {
        match self {
            StimulusSource::Random(r) => r.fill(pis),
            StimulusSource::Rows(rows) => pis.copy_from_slice(&rows.next().expect("stimulus rows checked up front")),
        }
    }
}

pub(crate) fn trackers_for(plan: &TrackPlan) -> Vec<SimoptTracker> {
    plan.targets
        .iter()
        .map(|(t, clock)| if *clock { SimoptTracker::clock(t.clone()) } else { SimoptTracker::new(t.clone()) })
        .collect()
}

pub(crate) fn dump_from_trackers(n: &Netlist, cfg: &SimConfig, trackers: &[SimoptTracker]) -> Result<ActivityDump, SimError> {
    let entries = trackers
        .iter()
        .flat_map(|t| {
            t.target().bits().iter().zip(t.counters()).map(move |(&net, &counter)| DumpEntry {
                name: n.flat_name(net).into_owned(),
                counter,
                is_clock: t.is_clock(),
            })
        })
        .collect();
    Ok(ActivityDump::new(&cfg.design, cfg.cycles, entries)?)
}

/// Simulates `cfg.cycles` cycles and returns the toggle counters of every
/// tracked bit. Cycle 0 sets tracker state without counting.
pub fn run_simulation(n: &Netlist, cfg: &SimConfig) -> Result<ActivityDump, SimError> {
    cfg.validate()?;
    let plan = plan_tracking(n, &cfg.track_filter);
    for g in &plan.unmatched_globs {
        log::warn!("track pattern `{g}` matches no signal");
    }
    let mut trackers = trackers_for(&plan);
    let mut source = StimulusSource::new(n, cfg)?;
    let mut state = SimState::new(n);
    let mut pis = vec![false; n.inputs().len()];

    source.next_into(&mut pis);
    state.evaluate(n, &pis);
    let mut words = Vec::new();
    for t in trackers.iter_mut().filter(|t| !t.is_clock()) {
        state.gather(t.target(), &mut words);
        t.load_state(&words);
    }
    state.commit();

    for _ in 1..cfg.cycles {
        source.next_into(&mut pis);
        simulate_cycle(n, &mut state, &pis, &mut trackers);
    }
    dump_from_trackers(n, cfg, &trackers)
}

/// Same stimulus and evaluation as [`run_simulation`] with no trackers.
/// Returns the final state; used as the overhead baseline.
pub fn run_untracked(n: &Netlist, cfg: &SimConfig) -> Result<SimState, SimError> {
    cfg.validate()?;
    let mut source = StimulusSource::new(n, cfg)?;
    let mut state = SimState::new(n);
    let mut pis = vec![false; n.inputs().len()];
    for _ in 0..cfg.cycles {
        source.next_into(&mut pis);
        state.evaluate(n, &pis);
        state.commit();
    }
    Ok(state)
}

/// Nets driven by latches, for callers that need to tell state from logic.
pub fn latch_nets(n: &Netlist) -> Vec<NetId> {
    n.nets().filter(|&net| matches!(n.driver(net), Driver::Latch(_))).collect()
}
