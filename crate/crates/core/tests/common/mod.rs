// SPDX-License-Identifier: Apache-2.0
//! Circuit generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use simopt::mapper::simopt_scale_factor;
use simopt::netlist::{parse_aiger, parse_blif, write_aiger, Driver, Edge, NetId, Netlist, NetlistBuilder};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

fn rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

fn below(r: &mut Xoshiro256StarStar, n: u64) -> u64 {
    r.next_u64() % n
}

/// Random sequential AIG. Some nets carry bus-style names so that packed
/// tracking is exercised; some latches name `clk` as their clock.
pub fn random_netlist(seed: u64, max_pis: u64, max_latches: u64, max_ands: u64) -> Netlist {
    let mut r = rng(seed);
    let mut b = NetlistBuilder::new();
    let pis = 1 + below(&mut r, max_pis);
    let latches = below(&mut r, max_latches + 1);
    let ands = below(&mut r, max_ands + 1);
    let with_clock = below(&mut r, 3) == 0;

    let mut pool = vec![Edge::FALSE];
    for k in 0..pis {
        let name = match k {
            0 if with_clock => Some("clk".to_string()),
            _ if below(&mut r, 4) == 0 => None,
            _ => Some(format!("in[{k}]")),
        };
        pool.push(Edge::pos(b.add_input(name.as_deref())));
    }
    let mut states = Vec::new();
    for k in 0..latches {
        let clock = with_clock.then_some("clk");
        let s = b.add_latch(Some(&format!("st[{k}]")), below(&mut r, 2) == 1, clock);
        states.push(s);
        pool.push(Edge::pos(s));
    }
    let pick = |r: &mut Xoshiro256StarStar, pool: &[Edge]| {
        let e = pool[below(r, pool.len() as u64) as usize];
        if below(r, 2) == 1 {
            !e
        } else {
            e
        }
    };
    let mut wires = 0;
    for _ in 0..ands {
        let x = pick(&mut r, &pool);
        let y = pick(&mut r, &pool);
        let e = b.add_and(x, y);
        if below(&mut r, 3) == 0 {
            b.set_name(e.net, &format!("w[{wires}]"));
            wires += 1;
        }
        pool.push(e);
    }
    for &s in &states {
        let d = pick(&mut r, &pool);
        b.connect_latch(s, d);
    }
    let outputs = 1 + below(&mut r, 4);
    for k in 0..outputs {
        let e = pick(&mut r, &pool);
        b.add_output(e, &format!("out[{k}]"));
    }
    b.build().expect("generated netlist is valid")
}

/// Ripple-carry adder with inputs `a[k]`, `b[k]`, sum `s[k]` and `cout`.
pub fn ripple_adder(bits: usize) -> Netlist {
    let mut b = NetlistBuilder::new();
    let a: Vec<Edge> = (0..bits).map(|k| Edge::pos(b.add_input(Some(&format!("a[{k}]"))))).collect();
    let y: Vec<Edge> = (0..bits).map(|k| Edge::pos(b.add_input(Some(&format!("b[{k}]"))))).collect();
    let mut carry = Edge::FALSE;
    for k in 0..bits {
        let half = b.add_xor(a[k], y[k]);
        let sum = b.add_xor(half, carry);
        b.add_output(sum, &format!("s[{k}]"));
        let g = b.add_and(a[k], y[k]);
        let p = b.add_and(half, carry);
        carry = b.add_or(g, p);
    }
    b.add_output(carry, "cout");
    b.build().unwrap()
}

/// XOR of `width` inputs `x[k]` as a balanced tree.
pub fn parity(width: usize) -> Netlist {
    let mut b = NetlistBuilder::new();
    let mut layer: Vec<Edge> = (0..width).map(|k| Edge::pos(b.add_input(Some(&format!("x[{k}]"))))).collect();
    while layer.len() > 1 {
        layer = layer.chunks(2).map(|c| if c.len() == 2 { b.add_xor(c[0], c[1]) } else { c[0] }).collect();
    }
    b.add_output(layer[0], "p");
    b.build().unwrap()
}

/// AND of `width` inputs as a balanced tree.
pub fn and_tree(width: usize) -> Netlist {
    let mut b = NetlistBuilder::new();
    let mut layer: Vec<Edge> = (0..width).map(|_| Edge::pos(b.add_input(None))).collect();
    while layer.len() > 1 {
        layer = layer.chunks(2).map(|c| if c.len() == 2 { b.add_and(c[0], c[1]) } else { c[0] }).collect();
    }
    b.add_output(layer[0], "y");
    b.build().unwrap()
}

pub const SKEW_BLIF: &str = ".model skew\n.inputs a b e\n.outputs h\n.names a b x\n11 1\n.names x e h\n11 1\n.end\n";

/// `a` and `b` held high while `e` toggles every cycle.
pub fn skew_stimulus(cycles: usize) -> String {
    let mut s = String::from("a b e\n");
    for i in 0..cycles {
        s.push_str(&format!("0b1 0b1 0b{}\n", i % 2));
    }
    s
}

const COUNTER_BLIF: &str = "\
.model counter4
.inputs clk en
.outputs q[0] q[1] q[2] q[3]
.latch next[0] q[0] re clk 0
.latch next[1] q[1] re clk 0
.latch next[2] q[2] re clk 0
.latch next[3] q[3] re clk 0
.names en q[0] next[0]
10 1
01 1
.names en q[0] c[1]
11 1
.names c[1] q[1] next[1]
10 1
01 1
.names c[1] q[1] c[2]
11 1
.names c[2] q[2] next[2]
10 1
01 1
.names c[2] q[2] c[3]
11 1
.names c[3] q[3] next[3]
10 1
01 1
.end
";

const MUX_BLIF: &str = "\
.model mux4
.inputs s[0] s[1] d[0] d[1] d[2] d[3]
.outputs y
.names s[0] s[1] d[0] d[1] d[2] d[3] y
001--- 1
10-1-- 1
01--1- 1
11---1 1
.end
";

const PORTS_AAG: &str = "\
aag 5 3 1 5 1
2
4
6
8 11
3
10
11
1
9
10 2 4
i0 a
i1 b
i2 c
l0 st
o0 na
o1 y
o2 ny
o3 one
o4 nst
";

/// File name and contents of every corpus circuit.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut files = vec![
        ("adder8.aag".to_string(), write_aiger(&ripple_adder(8))),
        ("adder128.aag".to_string(), write_aiger(&ripple_adder(128))),
        ("parity16.aag".to_string(), write_aiger(&parity(16))),
        ("counter4.blif".to_string(), COUNTER_BLIF.to_string()),
        ("mux4.blif".to_string(), MUX_BLIF.to_string()),
        ("ports.aag".to_string(), PORTS_AAG.to_string()),
        ("skew.blif".to_string(), SKEW_BLIF.to_string()),
        ("skew.stim".to_string(), skew_stimulus(1000)),
    ];
    for (k, seed) in [11u64, 23, 37].iter().enumerate() {
        files.push((format!("random{k}.aag"), write_aiger(&random_netlist(*seed, 10, 4, 60))));
    }
    files.sort();
    files
}

/// Every circuit of the on-disk corpus, by design name.
pub fn corpus() -> Vec<(String, Netlist)> {
    let mut out = Vec::new();
    for (file, text) in corpus_files() {
        let (stem, ext) = file.rsplit_once('.').unwrap();
        let n = match ext {
            "aag" => parse_aiger(text.as_bytes()).unwrap(),
            "blif" => parse_blif(text.as_bytes()).unwrap(),
            _ => continue,
        };
        out.push((stem.to_string(), n));
    }
    out
}

/// Every minimal K-feasible cut of `root`, found by testing all leaf subsets.
pub fn brute_cuts(n: &Netlist, root: NetId, k: usize) -> Vec<BTreeSet<NetId>> {
    let mut cone = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(net) = stack.pop() {
        if net == NetId::CONST || !seen.insert(net) {
            continue;
        }
        if net != root {
            cone.push(net);
        }
        if let Some(node) = n.node(net) {
            stack.extend(node.fanin.iter().map(|e| e.net));
        }
    }
    cone.sort();
    let separates = |leaves: &BTreeSet<NetId>| {
        let mut stack = vec![root];
        let mut seen = HashSet::new();
        while let Some(net) = stack.pop() {
            if leaves.contains(&net) || net == NetId::CONST || !seen.insert(net) {
                continue;
            }
            match n.node(net) {
                Some(node) => stack.extend(node.fanin.iter().map(|e| e.net)),
                None => return false,
            }
        }
        true
    };
    let mut cuts = Vec::new();
    let total = 1u64 << cone.len();
    for mask in 1..total {
        if mask.count_ones() as usize > k {
            continue;
        }
        let leaves: BTreeSet<NetId> = (0..cone.len()).filter(|&i| mask >> i & 1 == 1).map(|i| cone[i]).collect();
        if !separates(&leaves) {
            continue;
        }
        let minimal = leaves.iter().all(|l| {
            let mut fewer = leaves.clone();
            fewer.remove(l);
            !separates(&fewer)
        });
        if minimal {
            cuts.push(leaves);
        }
    }
    cuts
}

/// One complete covering: the cut chosen for every instantiated AND net.
#[derive(Debug, Clone, PartialEq)]
pub struct Covering {
    pub cuts: HashMap<NetId, BTreeSet<NetId>>,
    pub area: f64,
    pub simopt_area: f64,
    pub levels: HashMap<NetId, u32>,
}

impl Covering {
    pub fn max_level(&self) -> u32 {
        self.levels.values().copied().max().unwrap_or(0)
    }

    /// Largest level over roots scoring at least `threshold`.
    pub fn hot_depth(&self, scores: &[u64], threshold: u64) -> u32 {
        self.levels
            .iter()
            .filter(|(net, _)| scores[net.index()] >= threshold && scores[net.index()] != u64::MAX)
            .map(|(_, &l)| l)
            .max()
            .unwrap_or(0)
    }
}

/// Every covering of the AND nets driving outputs, with all cut choices.
pub fn brute_coverings(n: &Netlist, k: usize, scores: &[u64]) -> Vec<Covering> {
    let cut_lists: HashMap<NetId, Vec<BTreeSet<NetId>>> =
        n.nodes().iter().map(|node| (node.out, brute_cuts(n, node.out, k))).collect();
    let roots: Vec<NetId> = n.outputs().iter().map(|o| o.edge.net).filter(|&net| n.is_and(net)).collect();

    fn extend(
        n: &Netlist,
        lists: &HashMap<NetId, Vec<BTreeSet<NetId>>>,
        pending: Vec<NetId>,
        chosen: HashMap<NetId, BTreeSet<NetId>>,
        out: &mut Vec<HashMap<NetId, BTreeSet<NetId>>>,
    ) {
        let mut pending = pending;
        let next = loop {
            match pending.pop() {
                None => {
                    out.push(chosen);
                    return;
                }
                Some(net) if chosen.contains_key(&net) => continue,
                Some(net) => break net,
            }
        };
        for cut in &lists[&next] {
            let mut c = chosen.clone();
            c.insert(next, cut.clone());
            let mut p = pending.clone();
            p.extend(cut.iter().copied().filter(|&l| matches!(n.driver(l), Driver::And(_))));
            extend(n, lists, p, c, out);
        }
    }
    let mut raw = Vec::new();
    extend(n, &cut_lists, roots, HashMap::new(), &mut raw);

    raw.into_iter()
        .map(|cuts| {
            let mut levels = HashMap::new();
            for node in n.nodes() {
                if let Some(cut) = cuts.get(&node.out) {
                    let l = cut.iter().map(|leaf| levels.get(leaf).copied().unwrap_or(0) + 1).max().unwrap_or(0);
                    levels.insert(node.out, l);
                }
            }
            let area = cuts.values().map(|c| c.len() as f64 / k as f64).sum();
            let simopt_area =
                cuts.iter().map(|(root, c)| c.len() as f64 / k as f64 * simopt_scale_factor(scores[root.index()])).sum();
            Covering { cuts, area, simopt_area, levels }
        })
        .collect()
}
