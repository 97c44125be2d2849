// SPDX-License-Identifier: Apache-2.0
//! ASCII AIGER (`aag`) reader and writer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    valid_name, AndNode, Edge, Latch, NetId, Netlist, NetlistError, NetlistParts, Output, ParseError,
    ParseErrorKind,
};

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let (i, line) = self.iter.next()?;
        self.last = i + 1;
        Some((i + 1, line.strip_suffix('\r').unwrap_or(line)))
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.next() {
            Some(l) => Ok(l),
            None => Err(ParseError::syntax(self.last + 1, format!("unexpected end of file, expected {what}"))),
        }
    }
}

fn numbers(line_no: usize, line: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<u64>, ParseError> {
    let fields: Vec<u64> = line
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| ParseError::syntax(line_no, format!("`{t}` is not a number"))))
        .collect::<Result<_, _>>()?;
    if !count.contains(&fields.len()) {
        return Err(ParseError::syntax(line_no, format!("expected {count:?} numbers, found {}", fields.len())));
    }
    Ok(fields)
}

/// Parses an ASCII AIGER file. The variable count `M` must equal `I + L + A`
/// so that every net id is defined.
pub fn parse_aiger(text: &[u8]) -> Result<Netlist, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| ParseError::syntax(0, format!("invalid UTF-8: {e}")))?;
    let mut lines = Lines { iter: text.split('\n').enumerate(), last: 0 };

    let (_, header) = lines.expect("header")?;
    let header_err = |msg: &str| ParseError::new(1, ParseErrorKind::MalformedHeader(msg.to_string()));
    let mut tokens = header.split_whitespace();
    match tokens.next() {
        Some("aag") => {}
        Some("aig") => return Err(header_err("binary AIGER is not supported")),
        _ => return Err(header_err("expected `aag`")),
    }
    let counts: Vec<u64> = tokens
        .map(|t| t.parse::<u64>().map_err(|_| header_err(&format!("`{t}` is not a number"))))
        .collect::<Result<_, _>>()?;
    if counts.len() < 5 || counts.len() > 9 {
        return Err(header_err("expected M I L O A"));
    }
    if counts[5..].iter().any(|&c| c != 0) {
        return Err(header_err("bad-state, constraint, justice and fairness sections are not supported"));
    }
    let (m, i, l, o, a) = (counts[0], counts[1], counts[2], counts[3], counts[4]);
    if i.checked_add(l).and_then(|s| s.checked_add(a)) != Some(m) {
        return Err(header_err(&format!("M = {m} does not equal I + L + A = {}", i as u128 + l as u128 + a as u128)));
    }
    if m >= u32::MAX as u64 {
        return Err(header_err("too many variables"));
    }

    let net_count = m as usize + 1;
    let mut defined_at = vec![0usize; net_count];
    let literal = |line_no: usize, lit: u64| -> Result<Edge, ParseError> {
        if lit >> 1 > m {
            return Err(ParseError::new(line_no, ParseErrorKind::LiteralOutOfRange { literal: lit, max_var: m }));
        }
        Ok(Edge::from_literal(lit))
    };
    let mut define = |line_no: usize, lit: u64| -> Result<NetId, ParseError> {
        let edge = literal(line_no, lit)?;
        if edge.complement || edge.net == NetId::CONST {
            return Err(ParseError::syntax(line_no, format!("literal {lit} cannot be defined")));
        }
        let slot = &mut defined_at[edge.net.index()];
        if *slot != 0 {
            return Err(ParseError::new(
                line_no,
                ParseErrorKind::DuplicateDefinition(format!("variable {}", edge.net)),
            ));
        }
        *slot = line_no;
        Ok(edge.net)
    };

    let mut parts = NetlistParts { net_count, ..Default::default() };
    for _ in 0..i {
        let (n, line) = lines.expect("input")?;
        let f = numbers(n, line, 1..=1)?;
        parts.inputs.push(define(n, f[0])?);
    }
    for _ in 0..l {
        let (n, line) = lines.expect("latch")?;
        let f = numbers(n, line, 2..=3)?;
        let state = define(n, f[0])?;
        let data = literal(n, f[1])?;
        let init = match f.get(2) {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => return Err(ParseError::syntax(n, "uninitialised latches are not supported")),
        };
        parts.latches.push(Latch { data, state, init, clock: None });
    }
    let mut output_edges = Vec::new();
    for _ in 0..o {
        let (n, line) = lines.expect("output")?;
        let f = numbers(n, line, 1..=1)?;
        output_edges.push(literal(n, f[0])?);
    }
    for _ in 0..a {
        let (n, line) = lines.expect("AND gate")?;
        let f = numbers(n, line, 3..=3)?;
        let out = define(n, f[0])?;
        parts.nodes.push(AndNode { out, fanin: [literal(n, f[1])?, literal(n, f[2])?] });
    }

    let mut output_names: BTreeMap<usize, String> = BTreeMap::new();
    while let Some((n, line)) = lines.next() {
        if line.is_empty() {
            continue;
        }
        if line.starts_with('c') {
            break;
        }
        let (tag, rest) = line.split_at(1);
        let (index, name) = rest
            .split_once(' ')
            .ok_or_else(|| ParseError::syntax(n, "expected `<i|l|o><index> <name>`"))?;
        let index: usize = index.parse().map_err(|_| ParseError::syntax(n, format!("bad symbol index `{index}`")))?;
        if !valid_name(name) {
            return Err(ParseError::new(n, ParseErrorKind::Netlist(NetlistError::InvalidName(name.to_string()))));
        }
        let slot = match tag {
            "i" => parts.inputs.get(index).copied(),
            "l" => parts.latches.get(index).map(|l| l.state),
            "o" if index < output_edges.len() => {
                if output_names.insert(index, name.to_string()).is_some() {
                    return Err(ParseError::new(n, ParseErrorKind::DuplicateDefinition(format!("symbol o{index}"))));
                }
                continue;
            }
            "o" => None,
            _ => return Err(ParseError::syntax(n, format!("unknown symbol type `{tag}`"))),
        };
        let net = slot.ok_or_else(|| ParseError::syntax(n, format!("symbol index {tag}{index} out of range")))?;
        if parts.names.insert(net, name.to_string()).is_some() {
            return Err(ParseError::new(n, ParseErrorKind::DuplicateDefinition(format!("symbol {tag}{index}"))));
        }
    }

    // An output that is the plain positive edge of an unnamed AND node lends
    // its name to that node.
    let and_nets: std::collections::HashSet<NetId> = parts.nodes.iter().map(|n| n.out).collect();
    for (k, edge) in output_edges.into_iter().enumerate() {
        let name = output_names.remove(&k).unwrap_or_else(|| format!("o{k}"));
        if !edge.complement && and_nets.contains(&edge.net) && !parts.names.contains_key(&edge.net) {
            parts.names.insert(edge.net, name.clone());
        }
        parts.outputs.push(Output { edge, name });
    }

    Netlist::from_parts(parts).map_err(|e| match e {
        NetlistError::CombinationalCycle(net) => ParseError::new(
            defined_at[net.index()],
            ParseErrorKind::CombinationalCycle(format!("variable {net}")),
        ),
        other => ParseError::new(0, ParseErrorKind::Netlist(other)),
    })
}

/// Writes `n` as ASCII AIGER. Net ids are used as variable indices; names of
/// inputs, latches and outputs go to the symbol table. Latch clocks and names
/// of internal nodes are not representable and are dropped.
pub fn write_aiger(n: &Netlist) -> String {
    let mut s = String::new();
    let m = n.net_count() - 1;
    let _ = writeln!(
        s,
        "aag {m} {} {} {} {}",
        n.inputs().len(),
        n.latches().len(),
        n.outputs().len(),
        n.nodes().len()
    );
    for &net in n.inputs() {
        let _ = writeln!(s, "{}", Edge::pos(net).literal());
    }
    for latch in n.latches() {
        let _ = write!(s, "{} {}", Edge::pos(latch.state).literal(), latch.data.literal());
        let _ = writeln!(s, "{}", if latch.init { " 1" } else { "" });
    }
    for out in n.outputs() {
        let _ = writeln!(s, "{}", out.edge.literal());
    }
    for node in n.nodes() {
        let _ = writeln!(s, "{} {} {}", Edge::pos(node.out).literal(), node.fanin[0].literal(), node.fanin[1].literal());
    }
    for (k, &net) in n.inputs().iter().enumerate() {
        if let Some(name) = n.declared_name(net) {
            let _ = writeln!(s, "i{k} {name}");
        }
    }
    for (k, latch) in n.latches().iter().enumerate() {
        if let Some(name) = n.declared_name(latch.state) {
            let _ = writeln!(s, "l{k} {name}");
        }
    }
    for (k, out) in n.outputs().iter().enumerate() {
        let _ = writeln!(s, "o{k} {}", out.name);
    }
    s
}
