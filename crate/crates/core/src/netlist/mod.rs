// SPDX-License-Identifier: Apache-2.0
//! And-inverter graph netlists with latches.
//!
//! Every single-bit signal is a [`NetId`]. Net 0 is the constant-false net;
//! constant true is its complemented [`Edge`]. Nets are driven by exactly one
//! of: the constant, a primary input, a latch state, or a two-input AND node.

mod aiger;
mod blif;
mod mapped;
mod truth;

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use thiserror::Error;

pub use aiger::{parse_aiger, write_aiger};
pub use blif::{emit_blif, parse_blif, parse_mapped_blif, MAX_COVER_INPUTS};
pub use mapped::{Lut, MappedLatch, MappedNetlist, MappedParts};
pub use truth::TruthTable;

/// Dense identifier of a single-bit net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetId(pub u32);

impl NetId {
    pub const CONST: NetId = NetId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Name used for nets without a declared name.
    pub fn generated_name(self) -> String {
        format!("n{}", self.0)
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A reference to a net, optionally inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub net: NetId,
    pub complement: bool,
}

impl Edge {
    pub const FALSE: Edge = Edge { net: NetId::CONST, complement: false };
    pub const TRUE: Edge = Edge { net: NetId::CONST, complement: true };

    pub fn new(net: NetId, complement: bool) -> Self {
        Edge { net, complement }
    }

    pub fn pos(net: NetId) -> Self {
        Edge { net, complement: false }
    }

    /// AIGER literal encoding, `2 * net + complement`.
    pub fn from_literal(lit: u64) -> Self {
        Edge { net: NetId((lit >> 1) as u32), complement: lit & 1 == 1 }
    }

    pub fn literal(self) -> u64 {
        2 * self.net.0 as u64 + self.complement as u64
    }
}

impl std::ops::Not for Edge {
    type Output = Edge;

    fn not(self) -> Edge {
        Edge { net: self.net, complement: !self.complement }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AndNode {
    pub out: NetId,
    pub fanin: [Edge; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Latch {
    pub data: Edge,
    pub state: NetId,
    pub init: bool,
    /// Clock name as declared in the source file. Simulation uses one implicit clock.
    pub clock: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub edge: Edge,
    pub name: String,
}

/// What drives a net. Indices point into the netlist's input, latch, or node lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    Const,
    Input(usize),
    Latch(usize),
    And(usize),
}

/// A packed vector recovered from flattened `base[k]` names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusGroup {
    pub base_name: String,
    /// `bits[k]` is the net named `base[k]`.
    pub bits: Vec<NetId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("net {0} is defined more than once")]
    DuplicateDefinition(NetId),
    #[error("net {0} is referenced but never defined")]
    UndefinedNet(NetId),
    #[error("combinational cycle through net {0}")]
    CombinationalCycle(NetId),
    #[error("name `{0}` is used by more than one signal")]
    NameCollision(String),
    #[error("invalid signal name `{0}`")]
    InvalidName(String),
    #[error("latch with state net {0} has no data input")]
    UnconnectedLatch(NetId),
    #[error("LUT rooted at net {0} has an invalid input count")]
    InvalidLut(NetId),
    #[error("netlist must contain at least the constant net")]
    Empty,
}

/// A reader error. `line` is 1-based; 0 means the error concerns the file as a whole.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("literal {literal} out of range (maximum variable {max_var})")]
    LiteralOutOfRange { literal: u64, max_var: u64 },
    #[error("`{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("combinational cycle through `{0}`")]
    CombinationalCycle(String),
    #[error("unsupported directive `{0}`")]
    UnsupportedDirective(String),
    #[error("cover row has {found} input columns, expected {expected}")]
    CoverArity { expected: usize, found: usize },
    #[error("undefined signal `{0}`")]
    UndefinedSignal(String),
    #[error("cover has {0} inputs, more than the supported {max}", max = MAX_COVER_INPUTS)]
    CoverTooWide(usize),
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Netlist(NetlistError),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }

    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError { line, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

/// Raw ingredients of a [`Netlist`]; nodes may be listed in any order.
#[derive(Debug, Clone, Default)]
pub struct NetlistParts {
    pub net_count: usize,
    pub inputs: Vec<NetId>,
    pub latches: Vec<Latch>,
    pub nodes: Vec<AndNode>,
    pub outputs: Vec<Output>,
    pub names: BTreeMap<NetId, String>,
}

/// Immutable, validated and-inverter graph.
#[derive(Debug, Clone)]
pub struct Netlist {
    net_count: usize,
    nodes: Vec<AndNode>,
    inputs: Vec<NetId>,
    outputs: Vec<Output>,
    latches: Vec<Latch>,
    names: BTreeMap<NetId, String>,
    by_name: HashMap<String, NetId>,
    drivers: Vec<Driver>,
    order: Vec<NetId>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && !name.starts_with('#')
        && !name.chars().any(|c| c.is_whitespace() || c.is_control() || c == '\\')
}

impl Netlist {
    /// Validates `parts` and stores the AND nodes in topological order.
    pub fn from_parts(parts: NetlistParts) -> Result<Netlist, NetlistError> {
        let NetlistParts { net_count, inputs, latches, nodes, outputs, names } = parts;
        if net_count == 0 {
            return Err(NetlistError::Empty);
        }
        let check_range = |net: NetId| {
            if net.index() < net_count {
                Ok(net)
            } else {
                Err(NetlistError::UndefinedNet(net))
            }
        };

        let mut drivers: Vec<Option<Driver>> = vec![None; net_count];
        drivers[0] = Some(Driver::Const);
        let mut define = |net: NetId, driver: Driver| -> Result<(), NetlistError> {
            check_range(net)?;
            let slot = &mut drivers[net.index()];
            if slot.is_some() {
                return Err(NetlistError::DuplicateDefinition(net));
            }
            *slot = Some(driver);
            Ok(())
        };
        for (i, &net) in inputs.iter().enumerate() {
            define(net, Driver::Input(i))?;
        }
        for (i, latch) in latches.iter().enumerate() {
            define(latch.state, Driver::Latch(i))?;
        }
        for (i, node) in nodes.iter().enumerate() {
            define(node.out, Driver::And(i))?;
        }
        let drivers: Vec<Driver> = drivers
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or(NetlistError::UndefinedNet(NetId(i as u32))))
            .collect::<Result<_, _>>()?;

        for node in &nodes {
            for e in node.fanin {
                check_range(e.net)?;
            }
        }
        for latch in &latches {
            check_range(latch.data.net)?;
        }
        for out in &outputs {
            check_range(out.edge.net)?;
        }

        let order = order_nets(net_count, &drivers, &nodes).map_err(NetlistError::CombinationalCycle)?;
        let mut position = vec![usize::MAX; nodes.len()];
        let mut sorted = Vec::with_capacity(nodes.len());
        for &net in &order {
            if let Driver::And(i) = drivers[net.index()] {
                position[i] = sorted.len();
                sorted.push(nodes[i]);
            }
        }
        let drivers = drivers
            .into_iter()
            .map(|d| match d {
                Driver::And(i) => Driver::And(position[i]),
                other => other,
            })
            .collect();

        let mut netlist = Netlist {
            net_count,
            nodes: sorted,
            inputs,
            outputs,
            latches,
            names,
            by_name: HashMap::new(),
            drivers,
            order,
        };
        netlist.index_names()?;
        Ok(netlist)
    }

    fn index_names(&mut self) -> Result<(), NetlistError> {
        for (&net, name) in &self.names {
            if net.index() >= self.net_count {
                return Err(NetlistError::UndefinedNet(net));
            }
            if !valid_name(name) {
                return Err(NetlistError::InvalidName(name.clone()));
            }
        }
        let mut by_name = HashMap::with_capacity(self.net_count);
        for i in 0..self.net_count {
            let net = NetId(i as u32);
            let name = self.flat_name(net).into_owned();
            if by_name.insert(name.clone(), net).is_some() {
                return Err(NetlistError::NameCollision(name));
            }
        }
        let mut port_names = HashMap::new();
        for out in &self.outputs {
            if !valid_name(&out.name) {
                return Err(NetlistError::InvalidName(out.name.clone()));
            }
            if port_names.insert(out.name.as_str(), ()).is_some() {
                return Err(NetlistError::NameCollision(out.name.clone()));
            }
            if let Some(&net) = by_name.get(&out.name) {
                if out.edge != Edge::pos(net) {
                    return Err(NetlistError::NameCollision(out.name.clone()));
                }
            }
        }
        for latch in &self.latches {
            if let Some(clock) = &latch.clock {
                if !valid_name(clock) {
                    return Err(NetlistError::InvalidName(clock.clone()));
                }
            }
        }
        self.by_name = by_name;
        Ok(())
    }

    pub fn net_count(&self) -> usize {
        self.net_count
    }

    /// AND nodes in topological order.
    pub fn nodes(&self) -> &[AndNode] {
        &self.nodes
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.index()]
    }

    pub fn is_and(&self, net: NetId) -> bool {
        matches!(self.drivers[net.index()], Driver::And(_))
    }

    /// The AND node driving `net`, if any.
    pub fn node(&self, net: NetId) -> Option<&AndNode> {
        match self.drivers[net.index()] {
            Driver::And(i) => Some(&self.nodes[i]),
            _ => None,
        }
    }

    /// Position of `net` among [`Netlist::nodes`].
    pub fn node_position(&self, net: NetId) -> Option<usize> {
        match self.drivers[net.index()] {
            Driver::And(i) => Some(i),
            _ => None,
        }
    }

    pub fn declared_name(&self, net: NetId) -> Option<&str> {
        self.names.get(&net).map(String::as_str)
    }

    pub fn names(&self) -> &BTreeMap<NetId, String> {
        &self.names
    }

    /// Declared name, or `n<id>` for unnamed nets.
    pub fn flat_name(&self, net: NetId) -> Cow<'_, str> {
        match self.names.get(&net) {
            Some(name) => Cow::Borrowed(name.as_str()),
            None => Cow::Owned(net.generated_name()),
        }
    }

    pub fn net_by_name(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    pub fn nets(&self) -> impl Iterator<Item = NetId> {
        (0..self.net_count as u32).map(NetId)
    }

    /// Distinct latch clock names in declaration order.
    pub fn clock_names(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for latch in &self.latches {
            if let Some(clock) = latch.clock.as_deref() {
                if !seen.contains(&clock) {
                    seen.push(clock);
                }
            }
        }
        seen
    }

    /// Cached result of [`topological_order`].
    pub fn order(&self) -> &[NetId] {
        &self.order
    }
}

/// Sources (constant, inputs, latch states) in ascending id order, then AND
/// nodes by Kahn's algorithm, choosing the lowest ready id first.
fn order_nets(net_count: usize, drivers: &[Driver], nodes: &[AndNode]) -> Result<Vec<NetId>, NetId> {
    let mut order = Vec::with_capacity(net_count);
    let mut pending = vec![0u8; net_count];
    let mut users: Vec<Vec<NetId>> = vec![Vec::new(); net_count];
    let mut heap = BinaryHeap::new();

    for (i, d) in drivers.iter().enumerate() {
        let net = NetId(i as u32);
        match *d {
            Driver::And(n) => {
                for e in nodes[n].fanin {
                    if matches!(drivers[e.net.index()], Driver::And(_)) {
                        pending[i] += 1;
                        users[e.net.index()].push(net);
                    }
                }
                if pending[i] == 0 {
                    heap.push(Reverse(net));
                }
            }
            _ => order.push(net),
        }
    }
    while let Some(Reverse(net)) = heap.pop() {
        order.push(net);
        for &user in &users[net.index()] {
            pending[user.index()] -= 1;
            if pending[user.index()] == 0 {
                heap.push(Reverse(user));
            }
        }
    }
    if order.len() == net_count {
        return Ok(order);
    }

    // Walk unfinished fanins backwards until a net repeats; that net lies on a cycle.
    let start = (0..net_count).find(|&i| pending[i] > 0).expect("unfinished node");
    let mut seen = vec![false; net_count];
    let mut cur = start;
    loop {
        if seen[cur] {
            return Err(NetId(cur as u32));
        }
        seen[cur] = true;
        let Driver::And(n) = drivers[cur] else { unreachable!() };
        cur = nodes[n]
            .fanin
            .iter()
            .map(|e| e.net.index())
            .find(|&f| pending[f] > 0)
            .expect("unfinished node has an unfinished fanin");
    }
}

/// Every net in evaluation order: sources first by ascending id, then AND
/// nodes with the lowest ready id first.
pub fn topological_order(n: &Netlist) -> Vec<NetId> {
    n.order.clone()
}

/// Splits `base[k]` into its parts; `k` must be written canonically.
pub(crate) fn split_indexed(name: &str) -> Option<(&str, usize)> {
    let inner = name.strip_suffix(']')?;
    let open = inner.rfind('[')?;
    let (base, digits) = (&inner[..open], &inner[open + 1..]);
    if base.is_empty() || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    Some((base, digits.parse().ok()?))
}

/// Regroups flattened `base[k]` names into buses. Only bases whose indices
/// are exactly `0..width` form a group; everything else stays ungrouped.
pub fn group_buses(n: &Netlist) -> Vec<BusGroup> {
    let mut bases: BTreeMap<&str, BTreeMap<usize, NetId>> = BTreeMap::new();
    for (&net, name) in &n.names {
        if let Some((base, k)) = split_indexed(name) {
            bases.entry(base).or_default().insert(k, net);
        }
    }
    bases
        .into_iter()
        .filter(|(_, bits)| bits.keys().enumerate().all(|(i, &k)| i == k))
        .map(|(base, bits)| BusGroup { base_name: base.to_string(), bits: bits.into_values().collect() })
        .collect()
}

/// Incremental construction with sequential id allocation.
#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    next: u32,
    inputs: Vec<NetId>,
    latches: Vec<(NetId, Option<Edge>, bool, Option<String>)>,
    nodes: Vec<AndNode>,
    outputs: Vec<Output>,
    names: BTreeMap<NetId, String>,
}

impl Default for NetlistBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl NetlistBuilder {
    pub fn new() -> Self {
        NetlistBuilder {
            next: 1,
            inputs: Vec::new(),
            latches: Vec::new(),
            nodes: Vec::new(),
            outputs: Vec::new(),
            names: BTreeMap::new(),
        }
    }

    fn alloc(&mut self) -> NetId {
        let id = NetId(self.next);
        self.next += 1;
        id
    }

    pub fn net_count(&self) -> usize {
        self.next as usize
    }

    pub fn add_input(&mut self, name: Option<&str>) -> NetId {
        let id = self.alloc();
        self.inputs.push(id);
        if let Some(name) = name {
            self.names.insert(id, name.to_string());
        }
        id
    }

    /// Allocates a latch state net; connect its data input with [`NetlistBuilder::connect_latch`].
    pub fn add_latch(&mut self, name: Option<&str>, init: bool, clock: Option<&str>) -> NetId {
        let id = self.alloc();
        self.latches.push((id, None, init, clock.map(str::to_string)));
        if let Some(name) = name {
            self.names.insert(id, name.to_string());
        }
        id
    }

    pub fn connect_latch(&mut self, state: NetId, data: Edge) {
        let latch = self.latches.iter_mut().find(|l| l.0 == state).expect("not a latch state net");
        latch.1 = Some(data);
    }

    pub fn add_and(&mut self, a: Edge, b: Edge) -> Edge {
        assert!(a.net.0 < self.next && b.net.0 < self.next, "fanin must already exist");
        let out = self.alloc();
        self.nodes.push(AndNode { out, fanin: [a, b] });
        Edge::pos(out)
    }

    pub fn add_or(&mut self, a: Edge, b: Edge) -> Edge {
        !self.add_and(!a, !b)
    }

    pub fn add_xor(&mut self, a: Edge, b: Edge) -> Edge {
        let both = self.add_and(a, b);
        let neither = self.add_and(!a, !b);
        self.add_and(!both, !neither)
    }

    pub fn add_output(&mut self, edge: Edge, name: &str) {
        self.outputs.push(Output { edge, name: name.to_string() });
    }

    pub fn set_name(&mut self, net: NetId, name: &str) {
        self.names.insert(net, name.to_string());
    }

    pub fn name(&self, net: NetId) -> Option<&str> {
        self.names.get(&net).map(String::as_str)
    }

    pub fn build(self) -> Result<Netlist, NetlistError> {
        let latches = self
            .latches
            .into_iter()
            .map(|(state, data, init, clock)| {
                let data = data.ok_or(NetlistError::UnconnectedLatch(state))?;
                Ok(Latch { data, state, init, clock })
            })
            .collect::<Result<_, NetlistError>>()?;
        Netlist::from_parts(NetlistParts {
            net_count: self.next as usize,
            inputs: self.inputs,
            latches,
            nodes: self.nodes,
            outputs: self.outputs,
            names: self.names,
        })
    }
}
