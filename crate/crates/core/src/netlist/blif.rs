// SPDX-License-Identifier: Apache-2.0
//! BLIF subset: `.model`, `.inputs`, `.outputs`, `.names`, `.latch`, `.end`.
//!
//! [`parse_blif`] expands every cover into AND/inverter nodes for simulation
//! and mapping. [`parse_mapped_blif`] keeps every cover as one LUT, which is
//! the inverse of [`emit_blif`].

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt::Write as _;

use super::{
    valid_name, Edge, Lut, MappedLatch, MappedNetlist, MappedParts, NetId, Netlist, NetlistBuilder, NetlistError,
    ParseError, ParseErrorKind, TruthTable,
};

/// Largest `.names` cover accepted on import.
pub const MAX_COVER_INPUTS: usize = 16;

const LATCH_TYPES: [&str; 5] = ["fe", "re", "ah", "al", "as"];

struct RawLatch {
    input: String,
    output: String,
    clock: Option<String>,
    init: bool,
    line: usize,
}

struct RawCover {
    /// Inputs followed by the output.
    signals: Vec<String>,
    rows: Vec<(Vec<u8>, bool)>,
    line: usize,
}

impl RawCover {
    fn inputs(&self) -> &[String] {
        &self.signals[..self.signals.len() - 1]
    }

    fn output(&self) -> &str {
        self.signals.last().unwrap()
    }

    /// Output phase of the listed rows; an empty cover is constant 0.
    fn on_set(&self) -> bool {
        self.rows.first().is_none_or(|r| r.1)
    }

    fn truth_table(&self) -> TruthTable {
        let n = self.inputs().len();
        let on = self.on_set();
        TruthTable::from_fn(n, |m| {
            let hit = self.rows.iter().any(|(plane, _)| {
                plane.iter().enumerate().all(|(j, &c)| c == b'-' || (c == b'1') == (m >> j & 1 == 1))
            });
            hit == on
        })
    }
}

#[derive(Default)]
struct RawModel {
    inputs: Vec<(String, usize)>,
    outputs: Vec<(String, usize)>,
    latches: Vec<RawLatch>,
    covers: Vec<RawCover>,
}

/// Joins `\` continuations and strips comments; yields (first line number, text).
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let raw = raw.split('#').next().unwrap();
        let (body, continues) = match raw.trim_end().strip_suffix('\\') {
            Some(b) => (b, true),
            None => (raw, false),
        };
        let entry = pending.get_or_insert_with(|| (i + 1, String::new()));
        entry.1.push(' ');
        entry.1.push_str(body);
        if !continues {
            let done = pending.take().unwrap();
            if !done.1.trim().is_empty() {
                out.push(done);
            }
        }
    }
    if let Some(done) = pending {
        if !done.1.trim().is_empty() {
            out.push(done);
        }
    }
    out
}

fn parse_model(text: &[u8]) -> Result<RawModel, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| ParseError::syntax(0, format!("invalid UTF-8: {e}")))?;
    let mut model = RawModel::default();
    let mut seen_model = false;
    let mut ended = false;
    let mut in_cover = false;

    for (line, content) in logical_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let head = tokens[0];
        if ended {
            return Err(ParseError::new(line, ParseErrorKind::UnsupportedDirective(format!("{head} after .end"))));
        }
        if !head.starts_with('.') {
            if !in_cover {
                return Err(ParseError::syntax(line, format!("unexpected `{content}`", content = content.trim())));
            }
            let cover = model.covers.last_mut().unwrap();
            let arity = cover.signals.len() - 1;
            let (plane, out) = match (arity, tokens.as_slice()) {
                (0, [out]) => ("", *out),
                (0, _) => {
                    return Err(ParseError::new(line, ParseErrorKind::CoverArity { expected: 0, found: tokens.len() - 1 }))
                }
                (_, [plane, out]) => (*plane, *out),
                _ => return Err(ParseError::syntax(line, "expected `<input plane> <output>`")),
            };
            if plane.len() != arity {
                return Err(ParseError::new(line, ParseErrorKind::CoverArity { expected: arity, found: plane.len() }));
            }
            if !plane.bytes().all(|b| matches!(b, b'0' | b'1' | b'-')) {
                return Err(ParseError::syntax(line, format!("bad cover row `{plane}`")));
            }
            let value = match out {
                "1" => true,
                "0" => false,
                _ => return Err(ParseError::syntax(line, format!("bad cover output `{out}`"))),
            };
            if cover.rows.first().is_some_and(|r| r.1 != value) {
                return Err(ParseError::syntax(line, "cover mixes on-set and off-set rows"));
            }
            cover.rows.push((plane.as_bytes().to_vec(), value));
            continue;
        }

        in_cover = false;
        let args = &tokens[1..];
        let check_names = |names: &[&str]| -> Result<(), ParseError> {
            match names.iter().find(|n| !valid_name(n)) {
                Some(bad) => Err(ParseError::new(line, ParseErrorKind::Netlist(NetlistError::InvalidName(bad.to_string())))),
                None => Ok(()),
            }
        };
        match head {
            ".model" => {
                if seen_model {
                    return Err(ParseError::new(line, ParseErrorKind::UnsupportedDirective(".model (multiple models)".into())));
                }
                seen_model = true;
            }
            ".inputs" => {
                check_names(args)?;
                model.inputs.extend(args.iter().map(|s| (s.to_string(), line)));
            }
            ".outputs" => {
                check_names(args)?;
                model.outputs.extend(args.iter().map(|s| (s.to_string(), line)));
            }
            ".names" => {
                if args.is_empty() {
                    return Err(ParseError::syntax(line, ".names needs an output signal"));
                }
                check_names(args)?;
                if args.len() - 1 > MAX_COVER_INPUTS {
                    return Err(ParseError::new(line, ParseErrorKind::CoverTooWide(args.len() - 1)));
                }
                model.covers.push(RawCover {
                    signals: args.iter().map(|s| s.to_string()).collect(),
                    rows: Vec::new(),
                    line,
                });
                in_cover = true;
            }
            ".latch" => {
                let (input, output, rest) = match args {
                    [i, o, rest @ ..] if rest.len() <= 3 => (*i, *o, rest),
                    _ => return Err(ParseError::syntax(line, "expected `.latch <input> <output> [<type> <control>] [<init>]`")),
                };
                check_names(&[input, output])?;
                let (clock, init) = match rest {
                    [] => (None, None),
                    [init] => (None, Some(*init)),
                    [ty, ctrl] => (Some((*ty, *ctrl)), None),
                    [ty, ctrl, init] => (Some((*ty, *ctrl)), Some(*init)),
                    _ => unreachable!(),
                };
                let clock = match clock {
                    None => None,
                    Some((ty, _)) if !LATCH_TYPES.contains(&ty) => {
                        return Err(ParseError::syntax(line, format!("unknown latch type `{ty}`")))
                    }
                    Some((_, "NIL")) => None,
                    Some((_, ctrl)) => {
                        check_names(&[ctrl])?;
                        Some(ctrl.to_string())
                    }
                };
                let init = match init {
                    None | Some("0") => false,
                    Some("1") => true,
                    Some(other) => return Err(ParseError::syntax(line, format!("latch initial value `{other}` is not supported"))),
                };
                model.latches.push(RawLatch { input: input.into(), output: output.into(), clock, init, line });
            }
            ".end" => ended = true,
            other => return Err(ParseError::new(line, ParseErrorKind::UnsupportedDirective(other.to_string()))),
        }
    }
    Ok(model)
}

#[derive(Clone, Copy)]
enum Def {
    Input(usize),
    Latch(usize),
    Cover(usize),
}

fn definitions(model: &RawModel) -> Result<HashMap<&str, Def>, ParseError> {
    fn add<'a>(defs: &mut HashMap<&'a str, Def>, name: &'a str, line: usize, def: Def) -> Result<(), ParseError> {
        if defs.insert(name, def).is_some() {
            return Err(ParseError::new(line, ParseErrorKind::DuplicateDefinition(name.to_string())));
        }
        Ok(())
    }
    let mut defs = HashMap::new();
    for (i, (name, line)) in model.inputs.iter().enumerate() {
        add(&mut defs, name, *line, Def::Input(i))?;
    }
    for (i, latch) in model.latches.iter().enumerate() {
        add(&mut defs, &latch.output, latch.line, Def::Latch(i))?;
    }
    for (i, cover) in model.covers.iter().enumerate() {
        add(&mut defs, cover.output(), cover.line, Def::Cover(i))?;
    }
    Ok(defs)
}

fn lookup(defs: &HashMap<&str, Def>, name: &str, line: usize) -> Result<Def, ParseError> {
    defs.get(name)
        .copied()
        .ok_or_else(|| ParseError::new(line, ParseErrorKind::UndefinedSignal(name.to_string())))
}

/// Depth-first order of covers such that every cover follows the covers it reads.
fn cover_order(model: &RawModel, defs: &HashMap<&str, Def>) -> Result<Vec<usize>, ParseError> {
    const NEW: u8 = 0;
    const OPEN: u8 = 1;
    const DONE: u8 = 2;
    let covers = &model.covers;
    let mut status = vec![NEW; covers.len()];
    let mut order = Vec::with_capacity(covers.len());
    for root in 0..covers.len() {
        let mut stack = vec![root];
        while let Some(&c) = stack.last() {
            if status[c] == DONE {
                stack.pop();
                continue;
            }
            status[c] = OPEN;
            let mut waiting = false;
            for name in covers[c].inputs() {
                if let Def::Cover(j) = lookup(defs, name, covers[c].line)? {
                    match status[j] {
                        NEW => {
                            stack.push(j);
                            waiting = true;
                        }
                        OPEN => {
                            return Err(ParseError::new(
                                covers[j].line,
                                ParseErrorKind::CombinationalCycle(covers[j].output().to_string()),
                            ))
                        }
                        _ => {}
                    }
                }
            }
            if !waiting {
                status[c] = DONE;
                order.push(c);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Reads a BLIF model into an and-inverter graph.
///
/// Each cover becomes a naive sum of products: cubes are AND chains over their
/// literals, cubes are ORed left to right, and off-set covers are inverted.
/// Every cover output gets its own named net; when the result is inverted or
/// aliases an existing net it is buffered through `AND(x, x)`.
pub fn parse_blif(text: &[u8]) -> Result<Netlist, ParseError> {
    let model = parse_model(text)?;
    let defs = definitions(&model)?;
    let order = cover_order(&model, &defs)?;

    let mut b = NetlistBuilder::new();
    let inputs: Vec<NetId> = model.inputs.iter().map(|(name, _)| b.add_input(Some(name))).collect();
    let latches: Vec<NetId> = model
        .latches
        .iter()
        .map(|l| b.add_latch(Some(&l.output), l.init, l.clock.as_deref()))
        .collect();
    let mut cover_edges: Vec<Option<Edge>> = vec![None; model.covers.len()];
    let edge_of = |def: Def, cover_edges: &[Option<Edge>]| match def {
        Def::Input(i) => Edge::pos(inputs[i]),
        Def::Latch(i) => Edge::pos(latches[i]),
        Def::Cover(i) => cover_edges[i].expect("cover built in dependency order"),
    };

    for c in order {
        let cover = &model.covers[c];
        let fanin: Vec<Edge> = cover
            .inputs()
            .iter()
            .map(|name| Ok(edge_of(lookup(&defs, name, cover.line)?, &cover_edges)))
            .collect::<Result<_, ParseError>>()?;
        let first_new = b.net_count();
        let mut sum: Option<Edge> = None;
        for (plane, _) in &cover.rows {
            let mut cube: Option<Edge> = None;
            for (j, &ch) in plane.iter().enumerate() {
                let lit = match ch {
                    b'1' => fanin[j],
                    b'0' => !fanin[j],
                    _ => continue,
                };
                cube = Some(match cube {
                    None => lit,
                    Some(acc) => b.add_and(acc, lit),
                });
            }
            let cube = cube.unwrap_or(Edge::TRUE);
            sum = Some(match sum {
                None => cube,
                Some(acc) => b.add_or(acc, cube),
            });
        }
        let sum = sum.unwrap_or(Edge::FALSE);
        let result = if cover.on_set() { sum } else { !sum };
        let net = if !result.complement && result.net.index() >= first_new && b.name(result.net).is_none() {
            result.net
        } else {
            b.add_and(result, result).net
        };
        b.set_name(net, cover.output());
        cover_edges[c] = Some(Edge::pos(net));
    }

    for (latch, &state) in model.latches.iter().zip(&latches) {
        let data = edge_of(lookup(&defs, &latch.input, latch.line)?, &cover_edges);
        b.connect_latch(state, data);
    }
    for (name, line) in &model.outputs {
        let edge = edge_of(lookup(&defs, name, *line)?, &cover_edges);
        b.add_output(edge, name);
    }
    rename_shadowed(&mut b);
    b.build().map_err(|e| ParseError::new(0, ParseErrorKind::Netlist(e)))
}

/// Intermediate nets whose generated `n<id>` name is taken by a declared net
/// get `_` appended until the name is free.
fn rename_shadowed(b: &mut NetlistBuilder) {
    let mut taken: HashSet<String> = (0..b.net_count() as u32).filter_map(|i| b.name(NetId(i)).map(str::to_string)).collect();
    for i in 0..b.net_count() as u32 {
        let net = NetId(i);
        if b.name(net).is_some() || !taken.contains(&net.generated_name()) {
            continue;
        }
        let mut name = net.generated_name();
        while taken.contains(&name) {
            name.push('_');
        }
        b.set_name(net, &name);
        taken.insert(name);
    }
}

/// Reads a BLIF model keeping one LUT per cover. Covers without inputs become
/// constant ties. LUTs keep file order where dependencies allow.
pub fn parse_mapped_blif(text: &[u8]) -> Result<MappedNetlist, ParseError> {
    let model = parse_model(text)?;
    let defs = definitions(&model)?;

    let mut names = vec![NetId::CONST.generated_name()];
    let mut alloc = |name: &str| {
        names.push(name.to_string());
        NetId(names.len() as u32 - 1)
    };
    let inputs: Vec<NetId> = model.inputs.iter().map(|(n, _)| alloc(n)).collect();
    let latch_states: Vec<NetId> = model.latches.iter().map(|l| alloc(&l.output)).collect();
    let cover_nets: Vec<NetId> = model.covers.iter().map(|c| alloc(c.output())).collect();
    let net_of = |def: Def| match def {
        Def::Input(i) => inputs[i],
        Def::Latch(i) => latch_states[i],
        Def::Cover(i) => cover_nets[i],
    };

    // Kahn's algorithm over covers, lowest file position first.
    let covers = &model.covers;
    let mut pending = vec![0usize; covers.len()];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); covers.len()];
    let mut leaves: Vec<Vec<NetId>> = Vec::with_capacity(covers.len());
    for (c, cover) in covers.iter().enumerate() {
        let mut ids = Vec::with_capacity(cover.inputs().len());
        for name in cover.inputs() {
            let def = lookup(&defs, name, cover.line)?;
            if let Def::Cover(j) = def {
                if !covers[j].inputs().is_empty() {
                    pending[c] += 1;
                    users[j].push(c);
                }
            }
            ids.push(net_of(def));
        }
        leaves.push(ids);
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..covers.len()).filter(|&c| pending[c] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(covers.len());
    while let Some(Reverse(c)) = ready.pop() {
        order.push(c);
        for &u in &users[c] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if let Some(c) = (0..covers.len()).find(|&c| pending[c] > 0) {
        return Err(ParseError::new(covers[c].line, ParseErrorKind::CombinationalCycle(covers[c].output().to_string())));
    }

    let mut luts = Vec::new();
    let mut ties = Vec::new();
    for c in order {
        let cover = &covers[c];
        let truth = cover.truth_table();
        if cover.inputs().is_empty() {
            ties.push((cover_nets[c], truth.get(0)));
        } else {
            luts.push(Lut { root: cover_nets[c], leaves: leaves[c].clone(), truth });
        }
    }
    ties.sort_by_key(|&(net, _)| net);
    let latches = model
        .latches
        .iter()
        .zip(&latch_states)
        .map(|(l, &state)| {
            Ok(MappedLatch { data: net_of(lookup(&defs, &l.input, l.line)?), state, init: l.init, clock: l.clock.clone() })
        })
        .collect::<Result<_, ParseError>>()?;
    let outputs = model
        .outputs
        .iter()
        .map(|(name, line)| Ok(net_of(lookup(&defs, name, *line)?)))
        .collect::<Result<_, ParseError>>()?;
    MappedNetlist::new(MappedParts { names, provenance: Vec::new(), inputs, outputs, latches, luts, ties })
        .map_err(|e| ParseError::new(0, ParseErrorKind::Netlist(e)))
}

/// Writes `m` as BLIF.
///
/// Layout: `.model`, `.inputs`, `.outputs`, `.latch` lines, LUTs in stored
/// order, then constant ties, then `.end`. Cover rows list only on-set
/// minterms, in ascending order of the row read as a binary number whose
/// first column is the first leaf.
pub fn emit_blif(m: &MappedNetlist, model_name: &str) -> Result<String, NetlistError> {
    if !valid_name(model_name) {
        return Err(NetlistError::InvalidName(model_name.to_string()));
    }
    let mut owners: HashMap<&str, NetId> = HashMap::new();
    let mut claim = |net: NetId| -> Result<(), NetlistError> {
        let name = m.name(net);
        if !valid_name(name) {
            return Err(NetlistError::InvalidName(name.to_string()));
        }
        match owners.insert(name, net) {
            Some(prev) if prev != net => Err(NetlistError::NameCollision(name.to_string())),
            _ => Ok(()),
        }
    };
    for &net in m.inputs().iter().chain(m.outputs()) {
        claim(net)?;
    }
    for latch in m.latches() {
        claim(latch.data)?;
        claim(latch.state)?;
    }
    for lut in m.luts() {
        claim(lut.root)?;
        for &leaf in &lut.leaves {
            claim(leaf)?;
        }
    }
    for &(net, _) in m.ties() {
        claim(net)?;
    }

    let join = |nets: &[NetId]| nets.iter().map(|&n| m.name(n)).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, ".model {model_name}");
    if !m.inputs().is_empty() {
        let _ = writeln!(s, ".inputs {}", join(m.inputs()));
    }
    if !m.outputs().is_empty() {
        let _ = writeln!(s, ".outputs {}", join(m.outputs()));
    }
    for latch in m.latches() {
        let _ = write!(s, ".latch {} {}", m.name(latch.data), m.name(latch.state));
        if let Some(clock) = &latch.clock {
            let _ = write!(s, " re {clock}");
        }
        let _ = writeln!(s, " {}", latch.init as u8);
    }
    for lut in m.luts() {
        let k = lut.leaves.len();
        let _ = writeln!(s, ".names {} {}", join(&lut.leaves), m.name(lut.root));
        for row in 0..1usize << k {
            let index = (0..k).fold(0, |acc, j| acc | (row >> (k - 1 - j) & 1) << j);
            if lut.truth.get(index) {
                for j in 0..k {
                    s.push(if row >> (k - 1 - j) & 1 == 1 { '1' } else { '0' });
                }
                s.push_str(" 1\n");
            }
        }
    }
    for &(net, value) in m.ties() {
        let _ = writeln!(s, ".names {}", m.name(net));
        if value {
            s.push_str("1\n");
        }
    }
    s.push_str(".end\n");
    Ok(s)
}
