// SPDX-License-Identifier: Apache-2.0
//! Slow reference simulator.
//!
//! Evaluates each net recursively from its driver and counts toggles bit by
//! bit. Shares only target selection and stimulus generation with the engine.

use super::{dump_from_trackers, plan_tracking, trackers_for, SimConfig, SimError, StimulusSource};
use crate::dump::ActivityDump;
use crate::netlist::{Driver, Edge, NetId, Netlist};

fn eval(n: &Netlist, net: NetId, pis: &[bool], latches: &[bool], memo: &mut [Option<bool>]) -> bool {
    if let Some(v) = memo[net.index()] {
        return v;
    }
    let v = match n.driver(net) {
        Driver::Const => false,
        Driver::Input(i) => pis[i],
        Driver::Latch(l) => latches[l],
        Driver::And(_) => {
            let [a, b] = n.node(net).expect("and driver has a node").fanin;
            eval_edge(n, a, pis, latches, memo) && eval_edge(n, b, pis, latches, memo)
        }
    };
    memo[net.index()] = Some(v);
    v
}

fn eval_edge(n: &Netlist, e: Edge, pis: &[bool], latches: &[bool], memo: &mut [Option<bool>]) -> bool {
    eval(n, e.net, pis, latches, memo) ^ e.complement
}

/// Reference implementation of [`super::run_simulation`].
pub fn oracle_simulate(n: &Netlist, cfg: &SimConfig) -> Result<ActivityDump, SimError> {
    cfg.validate()?;
    let plan = plan_tracking(n, &cfg.track_filter);
    let watched: Vec<Vec<NetId>> = plan.targets.iter().map(|(t, _)| t.bits().to_vec()).collect();
    let mut trackers = trackers_for(&plan);
    let mut source = StimulusSource::new(n, cfg)?;
    let mut latches: Vec<bool> = n.latches().iter().map(|l| l.init).collect();
    let mut pis = vec![false; n.inputs().len()];
    let mut previous: Vec<Vec<bool>> = Vec::new();

    for cycle in 0..cfg.cycles {
        source.next_into(&mut pis);
        let mut memo = vec![None; n.net_count()];
        let now: Vec<Vec<bool>> = watched
            .iter()
            .map(|bits| bits.iter().map(|&b| eval(n, b, &pis, &latches, &mut memo)).collect())
            .collect();
        if cycle > 0 {
            for ((t, old), new) in trackers.iter_mut().zip(&previous).zip(&now) {
                if t.is_clock() {
                    continue;
                }
                for (k, counter) in t.counters_mut().iter_mut().enumerate() {
                    if old[k] != new[k] {
                        *counter = counter.saturating_add(1);
                    }
                }
            }
        }
        previous = now;
        latches = n.latches().iter().map(|l| eval_edge(n, l.data, &pis, &latches, &mut memo)).collect();
    }
    dump_from_trackers(n, cfg, &trackers)
}
