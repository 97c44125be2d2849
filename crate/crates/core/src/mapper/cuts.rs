// SPDX-License-Identifier: Apache-2.0
//! K-feasible cut enumeration with per-node priority lists.
//!
//! Cuts are ranked by area flow: the cut's own cost plus each leaf's flow
//! shared among that leaf's fanouts. Ties fall back to depth, leaf count and
//! the leaf ids themselves.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::{cut_area_cost, simopt_scale_factor, CostMode, MapParams, ScoreTable};
use crate::netlist::{Driver, NetId, Netlist};

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub root: NetId,
    /// Ascending.
    pub leaves: Vec<NetId>,
    pub outputs_weight: u32,
    /// Own cost under the active cost mode.
    pub area_cost: f64,
    pub area_flow: f64,
    pub depth: u32,
}

fn rank_order(a: &Cut, b: &Cut) -> Ordering {
    a.area_flow
        .total_cmp(&b.area_flow)
        .then(a.depth.cmp(&b.depth))
        .then(a.leaves.len().cmp(&b.leaves.len()))
        .then_with(|| a.leaves.cmp(&b.leaves))
}

/// Sorts cuts of one root best first.
pub fn rank_cuts(cuts: &mut [Cut]) {
    cuts.sort_by(rank_order);
}

/// Priority cuts of every AND net, plus the depth and flow of every net's best cut.
#[derive(Debug, Clone)]
pub struct CutDb {
    params: MapParams,
    cuts: Vec<Vec<Cut>>,
    depth: Vec<u32>,
    flow: Vec<f64>,
    fanout: Vec<u32>,
}

impl CutDb {
    pub fn params(&self) -> &MapParams {
        &self.params
    }

    /// Ranked non-trivial cuts; empty for sources.
    pub fn cuts(&self, net: NetId) -> &[Cut] {
        &self.cuts[net.index()]
    }

    pub fn best(&self, net: NetId) -> Option<&Cut> {
        self.cuts[net.index()].first()
    }

    pub fn depth(&self, net: NetId) -> u32 {
        self.depth[net.index()]
    }

    pub fn flow(&self, net: NetId) -> f64 {
        self.flow[net.index()]
    }

    pub fn fanout(&self, net: NetId) -> u32 {
        self.fanout[net.index()]
    }

    /// The cut made of the net alone; the constant net's has no leaves.
    pub fn trivial(&self, net: NetId) -> Cut {
        Cut {
            root: net,
            leaves: if net == NetId::CONST { Vec::new() } else { vec![net] },
            outputs_weight: 1,
            area_cost: 0.0,
            area_flow: self.flow(net),
            depth: self.depth(net),
        }
    }

    fn make_cut(&self, root: NetId, leaves: Vec<NetId>, s: &ScoreTable) -> Cut {
        let mut c = Cut { root, leaves, outputs_weight: 1, area_cost: 0.0, area_flow: 0.0, depth: 0 };
        c.area_cost = match self.params.cost_mode {
            CostMode::Vanilla => cut_area_cost(&c, &self.params),
            CostMode::Simopt => cut_area_cost(&c, &self.params) * simopt_scale_factor(s.score(root)),
        };
        c.depth = c.leaves.iter().map(|&l| self.depth(l) + 1).max().unwrap_or(0);
        c.area_flow = c.area_cost + c.leaves.iter().map(|&l| self.flow(l) / self.fanout(l).max(1) as f64).sum::<f64>();
        c
    }
}

fn union(a: &[NetId], b: &[NetId], k: usize) -> Option<Vec<NetId>> {
    let mut out = Vec::with_capacity(k);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.len() == k {
            return None;
        }
        out.push(next);
    }
    Some(out)
}

fn fanouts(n: &Netlist) -> Vec<u32> {
    let mut fo = vec![0u32; n.net_count()];
    for node in n.nodes() {
        let [a, b] = node.fanin.map(|e| e.net);
        fo[a.index()] += 1;
        if b != a {
            fo[b.index()] += 1;
        }
    }
    for out in n.outputs() {
        fo[out.edge.net.index()] += 1;
    }
    for latch in n.latches() {
        fo[latch.data.net.index()] += 1;
    }
    fo
}

/// Computes priority cuts for every AND node in topological order.
pub fn enumerate_cuts(n: &Netlist, p: &MapParams, s: &ScoreTable) -> CutDb {
    let count = n.net_count();
    let mut db = CutDb {
        params: *p,
        cuts: vec![Vec::new(); count],
        depth: vec![0; count],
        flow: vec![0.0; count],
        fanout: fanouts(n),
    };
    for node in n.nodes() {
        let [a, b] = node.fanin.map(|e| e.net);
        let side = |net: NetId| std::iter::once(db.trivial(net).leaves).chain(db.cuts(net).iter().map(|c| c.leaves.clone()));
        let left: Vec<Vec<NetId>> = side(a).collect();
        let right: Vec<Vec<NetId>> = side(b).collect();

        let mut seen = HashSet::new();
        let mut cuts = Vec::new();
        for la in &left {
            for lb in &right {
                if let Some(leaves) = union(la, lb, p.k()) {
                    if seen.insert(leaves.clone()) {
                        cuts.push(db.make_cut(node.out, leaves, s));
                    }
                }
            }
        }
        rank_cuts(&mut cuts);
        cuts.truncate(p.priority());
        db.depth[node.out.index()] = cuts[0].depth;
        db.flow[node.out.index()] = cuts[0].area_flow;
        db.cuts[node.out.index()] = cuts;
    }
    debug_assert!(n.nets().all(|net| matches!(n.driver(net), Driver::And(_)) == !db.cuts(net).is_empty()));
    db
}
