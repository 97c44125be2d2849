// SPDX-License-Identifier: Apache-2.0
//! Toggle-counter dumps: canonical text form, merging, and binding to nets.
//!
//! ```text
//! simopt-dump v1
//! design <name>
//! cycles <n>
//! net <flat_name> <counter> <0|1>
//! ```

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::netlist::{NetId, Netlist};
use crate::SATURATED;

const VERSION_LINE: &str = "simopt-dump v1";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DumpEntry {
    pub name: String,
    pub counter: u64,
    pub is_clock: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActivityDump {
    design: String,
    cycles: u64,
    entries: Vec<DumpEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DumpError {
    #[error("line {line}: unsupported dump version `{found}`")]
    Version { line: usize, found: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate entry `{0}`")]
    DuplicateKey(String),
    #[error("line {line}: entry `{name}` is out of order")]
    Unsorted { line: usize, name: String },
    #[error("line {line}: counter `{literal}` does not fit in 64 bits")]
    CounterOverflow { line: usize, literal: String },
    #[error("clock entry `{0}` must hold the saturated counter")]
    ClockNotSaturated(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("cannot merge dumps of `{0}` and `{1}`")]
    DesignMismatch(String, String),
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl ActivityDump {
    /// Sorts `entries` by name and checks the dump invariants.
    pub fn new(design: &str, cycles: u64, mut entries: Vec<DumpEntry>) -> Result<Self, DumpError> {
        if !valid_token(design) {
            return Err(DumpError::InvalidName(design.to_string()));
        }
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in entries.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(DumpError::DuplicateKey(pair[0].name.clone()));
            }
        }
        for e in &entries {
            if !valid_token(&e.name) {
                return Err(DumpError::InvalidName(e.name.clone()));
            }
            if e.is_clock && e.counter != SATURATED {
                return Err(DumpError::ClockNotSaturated(e.name.clone()));
            }
        }
        Ok(ActivityDump { design: design.to_string(), cycles, entries })
    }

    pub fn empty(design: &str) -> Result<Self, DumpError> {
        Self::new(design, 0, Vec::new())
    }

    pub fn design(&self) -> &str {
        &self.design
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    /// Sorted ascending by name.
    pub fn entries(&self) -> &[DumpEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&DumpEntry> {
        self.entries.binary_search_by(|e| e.name.as_str().cmp(name)).ok().map(|i| &self.entries[i])
    }

    /// Keeps only entries whose name satisfies `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> ActivityDump {
        ActivityDump {
            design: self.design.clone(),
            cycles: self.cycles,
            entries: self.entries.iter().filter(|e| keep(&e.name)).cloned().collect(),
        }
    }
}

pub fn serialize(d: &ActivityDump) -> Vec<u8> {
    let mut out = format!("{VERSION_LINE}\ndesign {}\ncycles {}\n", d.design, d.cycles);
    for e in &d.entries {
        out.push_str(&format!("net {} {} {}\n", e.name, e.counter, e.is_clock as u8));
    }
    out.into_bytes()
}

/// Decimal without sign or redundant leading zeros.
fn parse_counter(line: usize, s: &str) -> Result<u64, DumpError> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(DumpError::Parse { line, msg: format!("malformed number `{s}`") });
    }
    s.parse().map_err(|_| DumpError::CounterOverflow { line, literal: s.to_string() })
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<(usize, &'a str), DumpError> {
    let (line, text) = lines.next().ok_or(DumpError::Parse { line: 0, msg: format!("missing `{key}` line") })?;
    match text.split_once(' ') {
        Some((k, v)) if k == key && valid_token(v) => Ok((line, v)),
        _ => Err(DumpError::Parse { line, msg: format!("expected `{key} <value>`") }),
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<ActivityDump, DumpError> {
    let text = std::str::from_utf8(bytes).map_err(|e| DumpError::Parse { line: 0, msg: format!("not UTF-8: {e}") })?;
    let body = match text.strip_suffix('\n') {
        Some(body) => body,
        None => return Err(DumpError::Parse { line: text.lines().count().max(1), msg: "missing final newline".into() }),
    };
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    match lines.next() {
        Some((_, VERSION_LINE)) => {}
        Some((line, other)) => return Err(DumpError::Version { line, found: other.to_string() }),
        None => return Err(DumpError::Version { line: 1, found: String::new() }),
    }
    let (_, design) = header(&mut lines, "design")?;
    let (line, cycles) = header(&mut lines, "cycles")?;
    let cycles = parse_counter(line, cycles)?;

    let mut entries: Vec<DumpEntry> = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(' ').collect();
        let [tag, name, counter, clock] = fields[..] else {
            return Err(DumpError::Parse { line, msg: "expected `net <name> <counter> <0|1>`".into() });
        };
        if tag != "net" || !valid_token(name) {
            return Err(DumpError::Parse { line, msg: "expected `net <name> <counter> <0|1>`".into() });
        }
        let counter = parse_counter(line, counter)?;
        let is_clock = match clock {
            "0" => false,
            "1" => true,
            _ => return Err(DumpError::Parse { line, msg: format!("clock flag must be 0 or 1, found `{clock}`") }),
        };
        if let Some(prev) = entries.last() {
            match prev.name.as_str().cmp(name) {
                std::cmp::Ordering::Equal => return Err(DumpError::DuplicateKey(name.to_string())),
                std::cmp::Ordering::Greater => return Err(DumpError::Unsorted { line, name: name.to_string() }),
                std::cmp::Ordering::Less => {}
            }
        }
        if is_clock && counter != SATURATED {
            return Err(DumpError::ClockNotSaturated(name.to_string()));
        }
        entries.push(DumpEntry { name: name.to_string(), counter, is_clock });
    }
    Ok(ActivityDump { design: design.to_string(), cycles, entries })
}

/// Key union with saturating counter sums.
pub fn merge(a: &ActivityDump, b: &ActivityDump) -> Result<ActivityDump, DumpError> {
    if a.design != b.design {
        return Err(DumpError::DesignMismatch(a.design.clone(), b.design.clone()));
    }
    let mut map: BTreeMap<&str, (u64, bool)> = BTreeMap::new();
    for e in a.entries.iter().chain(&b.entries) {
        let slot = map.entry(&e.name).or_insert((0, false));
        slot.0 = slot.0.saturating_add(e.counter);
        slot.1 |= e.is_clock;
    }
    let entries = map
        .into_iter()
        .map(|(name, (counter, is_clock))| DumpEntry { name: name.to_string(), counter, is_clock })
        .collect();
    Ok(ActivityDump { design: a.design.clone(), cycles: a.cycles.saturating_add(b.cycles), entries })
}

/// Per-net scores recovered from a dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    /// Indexed by net id; unmatched nets hold the saturated sentinel.
    pub scores: Vec<u64>,
    pub matched: usize,
    pub unmatched: usize,
    /// Dump entries that name no net.
    pub unknown_names: Vec<String>,
}

impl Binding {
    pub fn score(&self, net: NetId) -> u64 {
        self.scores[net.index()]
    }
}

pub fn bind_to_netlist(d: &ActivityDump, n: &Netlist) -> Binding {
    let by_name: HashMap<&str, u64> = d.entries.iter().map(|e| (e.name.as_str(), e.counter)).collect();
    let mut scores = vec![SATURATED; n.net_count()];
    let mut matched = 0;
    let mut seen = std::collections::HashSet::new();
    for net in n.nets() {
        let name = n.flat_name(net);
        if let Some((&key, &counter)) = by_name.get_key_value(name.as_ref()) {
            scores[net.index()] = counter;
            matched += 1;
            seen.insert(key);
        }
    }
    let unknown_names = d.entries.iter().filter(|e| !seen.contains(e.name.as_str())).map(|e| e.name.clone()).collect();
    Binding { unmatched: n.net_count() - matched, scores, matched, unknown_names }
}
