// SPDX-License-Identifier: Apache-2.0
//! Combinational equivalence of a mapped netlist against its source.
//!
//! Both sides are evaluated as functions from (primary inputs, latch states)
//! to (outputs, latch data), 64 vectors per word. Up to 12 inputs are checked
//! exhaustively, otherwise 1024 seeded random vectors are used.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use thiserror::Error;

use crate::netlist::{Edge, MappedNetlist, Netlist};

pub const EXHAUSTIVE_LIMIT: usize = 12;
pub const RANDOM_VECTORS: usize = 1024;

/// Bit-parallel evaluation of a sequential design's combinational part.
pub trait Evaluate {
    /// Primary inputs followed by latch states.
    fn input_count(&self) -> usize;
    /// Outputs followed by latch data.
    fn output_count(&self) -> usize;
    /// One word per input; bit `l` of every word forms vector `l`.
    fn eval_words(&self, inputs: &[u64]) -> Vec<u64>;
}

fn edge_word(values: &[u64], e: Edge) -> u64 {
    values[e.net.index()] ^ if e.complement { !0 } else { 0 }
}

impl Evaluate for Netlist {
    fn input_count(&self) -> usize {
        self.inputs().len() + self.latches().len()
    }

    fn output_count(&self) -> usize {
        self.outputs().len() + self.latches().len()
    }

    fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.net_count()];
        let sources = self.inputs().iter().copied().chain(self.latches().iter().map(|l| l.state));
        for (net, &w) in sources.zip(inputs) {
            v[net.index()] = w;
        }
        for node in self.nodes() {
            v[node.out.index()] = edge_word(&v, node.fanin[0]) & edge_word(&v, node.fanin[1]);
        }
        let outs = self.outputs().iter().map(|o| o.edge).chain(self.latches().iter().map(|l| l.data));
        outs.map(|e| edge_word(&v, e)).collect()
    }
}

impl Evaluate for MappedNetlist {
    fn input_count(&self) -> usize {
        self.inputs().len() + self.latches().len()
    }

    fn output_count(&self) -> usize {
        self.outputs().len() + self.latches().len()
    }

    fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.net_count()];
        let sources = self.inputs().iter().copied().chain(self.latches().iter().map(|l| l.state));
        for (net, &w) in sources.zip(inputs) {
            v[net.index()] = w;
        }
        for &(net, value) in self.ties() {
            v[net.index()] = if value { !0 } else { 0 };
        }
        for lut in self.luts() {
            let mut word = 0u64;
            for lane in 0..64 {
                let index = lut.leaves.iter().enumerate().fold(0, |acc, (j, l)| acc | ((v[l.index()] >> lane & 1) as usize) << j);
                word |= (lut.truth.get(index) as u64) << lane;
            }
            v[lut.root.index()] = word;
        }
        let outs = self.outputs().iter().copied().chain(self.latches().iter().map(|l| l.data));
        outs.map(|net| v[net.index()]).collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("{signal} differs for input vector {vector}")]
    Mismatch { signal: String, vector: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivStats {
    pub vectors: u64,
    pub exhaustive: bool,
}

fn signal_name(n: &Netlist, k: usize) -> String {
    match n.outputs().get(k) {
        Some(out) => format!("output {}", out.name),
        None => format!("latch {} data", n.flat_name(n.latches()[k - n.outputs().len()].state)),
    }
}

/// Input words for one 64-vector batch.
fn batch(inputs: usize, exhaustive: bool, index: u64, rng: &mut Xoshiro256StarStar) -> Vec<u64> {
    if !exhaustive {
        return (0..inputs).map(|_| rng.next_u64()).collect();
    }
    (0..inputs)
        .map(|i| (0..64).fold(0u64, |w, lane| w | ((index * 64 + lane) >> i & 1) << lane))
        .collect()
}

/// Compares `m` against `n`; `seed` drives the random vectors.
pub fn check_equivalence(n: &Netlist, m: &MappedNetlist, seed: u64) -> Result<EquivStats, EquivError> {
    let shape = |a: usize, b: usize, what: &str| {
        if a == b {
            Ok(())
        } else {
            Err(EquivError::Interface(format!("{what}: {a} vs {b}")))
        }
    };
    shape(n.inputs().len(), m.inputs().len(), "primary inputs")?;
    shape(n.outputs().len(), m.outputs().len(), "outputs")?;
    shape(n.latches().len(), m.latches().len(), "latches")?;

    let inputs = n.input_count();
    let exhaustive = inputs <= EXHAUSTIVE_LIMIT;
    let vectors: u64 = if exhaustive { 1 << inputs } else { RANDOM_VECTORS as u64 };
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    for index in 0..vectors.div_ceil(64) {
        let words = batch(inputs, exhaustive, index, &mut rng);
        let live = if vectors - index * 64 >= 64 { !0 } else { (1u64 << (vectors - index * 64)) - 1 };
        let (want, got) = (n.eval_words(&words), m.eval_words(&words));
        for (k, (a, b)) in want.iter().zip(&got).enumerate() {
            let diff = (a ^ b) & live;
            if diff != 0 {
                let lane = diff.trailing_zeros();
                let vector = words.iter().map(|w| if w >> lane & 1 == 1 { '1' } else { '0' }).collect();
                return Err(EquivError::Mismatch { signal: signal_name(n, k), vector });
            }
        }
    }
    Ok(EquivStats { vectors, exhaustive })
}
