// SPDX-License-Identifier: Apache-2.0
//! Cover extraction: instantiate the best cut of every required node.
//!
//! Mapped net ids below the subject graph's net count name the same nets.
//! Outputs that need a different name or polarity than their driver, and
//! latches fed by complemented or constant edges, get extra port nets.

use std::collections::HashSet;

use super::{enumerate_cuts, CutDb, MapParams, ScoreTable};
use crate::netlist::{Driver, Edge, Lut, MappedLatch, MappedNetlist, MappedParts, NetId, Netlist, TruthTable};

/// Function of `root` over `leaves`, where leaf `j` is input `j`.
pub fn cone_truth(n: &Netlist, root: NetId, leaves: &[NetId]) -> TruthTable {
    let vars = leaves.len();
    let mut cone = Vec::new();
    let mut seen: HashSet<NetId> = leaves.iter().copied().collect();
    let mut stack = vec![root];
    while let Some(net) = stack.pop() {
        if !seen.insert(net) {
            continue;
        }
        match n.node(net) {
            Some(node) => {
                cone.push(net);
                stack.extend(node.fanin.iter().map(|e| e.net));
            }
            None => assert_eq!(net, NetId::CONST, "cut leaves do not separate {net} from the sources"),
        }
    }
    cone.sort_by_key(|&net| n.node_position(net));

    let mut tables: std::collections::HashMap<NetId, TruthTable> =
        leaves.iter().enumerate().map(|(j, &l)| (l, TruthTable::var(vars, j))).collect();
    tables.entry(NetId::CONST).or_insert_with(|| TruthTable::zero(vars));
    for net in cone {
        let [a, b] = n.node(net).expect("cone holds AND nets").fanin;
        let t = tables[&a.net].clone().negate_if(a.complement).and(&tables[&b.net].clone().negate_if(b.complement));
        tables.insert(net, t);
    }
    tables.remove(&root).expect("root evaluated")
}

struct Builder<'a> {
    n: &'a Netlist,
    db: &'a CutDb,
    parts: MappedParts,
    used_names: HashSet<String>,
    port_luts: Vec<Lut>,
}

impl Builder<'_> {
    fn new_net(&mut self, name: String, origin: NetId) -> NetId {
        let id = NetId(self.parts.names.len() as u32);
        self.used_names.insert(name.clone());
        self.parts.names.push(name);
        self.parts.provenance.push(Some(origin));
        id
    }

    fn fresh_name(&self, id: usize) -> String {
        let mut name = format!("n{id}");
        while self.used_names.contains(&name) {
            name.push('_');
        }
        name
    }

    /// A new net computing `edge`. Returns the AND nets whose cuts it reads.
    fn port(&mut self, edge: Edge, name: String) -> (NetId, Vec<NetId>) {
        let net = self.new_net(name, edge.net);
        match self.n.driver(edge.net) {
            Driver::Const => {
                self.parts.ties.push((net, edge.complement));
                (net, Vec::new())
            }
            Driver::Input(_) | Driver::Latch(_) => {
                let truth = TruthTable::var(1, 0).negate_if(edge.complement);
                self.port_luts.push(Lut { root: net, leaves: vec![edge.net], truth });
                (net, Vec::new())
            }
            Driver::And(_) => {
                let leaves = self.db.best(edge.net).expect("AND nets have cuts").leaves.clone();
                let truth = cone_truth(self.n, edge.net, &leaves).negate_if(edge.complement);
                match truth.constant_value() {
                    Some(value) if leaves.is_empty() => self.parts.ties.push((net, value)),
                    _ => self.port_luts.push(Lut { root: net, leaves: leaves.clone(), truth }),
                }
                (net, leaves)
            }
        }
    }
}

/// Builds the mapped netlist from precomputed cuts.
pub fn select_from_cuts(n: &Netlist, db: &CutDb) -> MappedNetlist {
    let src = n.net_count();
    let names: Vec<String> = n.nets().map(|net| n.flat_name(net).into_owned()).collect();
    let mut b = Builder {
        n,
        db,
        used_names: names.iter().cloned().chain(n.outputs().iter().map(|o| o.name.clone())).collect(),
        parts: MappedParts {
            provenance: n.nets().map(Some).collect(),
            names,
            inputs: n.inputs().to_vec(),
            ..Default::default()
        },
        port_luts: Vec::new(),
    };

    let mut demands: Vec<NetId> = Vec::new();
    for out in n.outputs() {
        let direct = !out.edge.complement && out.edge.net != NetId::CONST && *n.flat_name(out.edge.net) == out.name;
        if direct {
            b.parts.outputs.push(out.edge.net);
            demands.push(out.edge.net);
        } else {
            let (net, reads) = b.port(out.edge, out.name.clone());
            b.parts.outputs.push(net);
            demands.extend(reads);
        }
    }
    for latch in n.latches() {
        let data = if !latch.data.complement && latch.data.net != NetId::CONST {
            demands.push(latch.data.net);
            latch.data.net
        } else {
            let name = b.fresh_name(b.parts.names.len());
            let (net, reads) = b.port(latch.data, name);
            demands.extend(reads);
            net
        };
        b.parts.latches.push(MappedLatch { data, state: latch.state, init: latch.init, clock: latch.clock.clone() });
    }

    let mut required = vec![false; src];
    while let Some(net) = demands.pop() {
        if required[net.index()] {
            continue;
        }
        required[net.index()] = true;
        if let Some(cut) = db.best(net) {
            demands.extend(cut.leaves.iter().copied().filter(|l| !required[l.index()]));
        }
    }

    for node in n.nodes() {
        let net = node.out;
        if !required[net.index()] {
            continue;
        }
        let leaves = db.best(net).expect("AND nets have cuts").leaves.clone();
        let truth = cone_truth(n, net, &leaves);
        if leaves.is_empty() {
            b.parts.ties.push((net, truth.get(0)));
        } else {
            b.parts.luts.push(Lut { root: net, leaves, truth });
        }
    }
    b.parts.ties.sort_by_key(|&(net, _)| net);
    let ports = std::mem::take(&mut b.port_luts);
    b.parts.luts.extend(ports);
    MappedNetlist::new(b.parts).expect("cover construction yields a valid mapped netlist")
}

/// Enumerates priority cuts and covers the netlist with their best members.
pub fn select_mapping(n: &Netlist, p: &MapParams, s: &ScoreTable) -> MappedNetlist {
    select_from_cuts(n, &enumerate_cuts(n, p, s))
}
