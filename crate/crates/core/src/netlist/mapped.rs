// SPDX-License-Identifier: Apache-2.0
//! LUT networks produced by technology mapping.

use super::{NetId, NetlistError, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lut {
    pub root: NetId,
    pub leaves: Vec<NetId>,
    /// Indexed by assignment; leaf `j` is bit `j` of the index.
    pub truth: TruthTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedLatch {
    pub data: NetId,
    pub state: NetId,
    pub init: bool,
    pub clock: Option<String>,
}

/// Raw ingredients of a [`MappedNetlist`].
#[derive(Debug, Clone, Default)]
pub struct MappedParts {
    /// One name per net id; index 0 is the constant net.
    pub names: Vec<String>,
    /// Subject-graph net each mapped net stands for, when known.
    pub provenance: Vec<Option<NetId>>,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
    pub latches: Vec<MappedLatch>,
    /// Must be listed so that every leaf precedes its user.
    pub luts: Vec<Lut>,
    /// Nets tied to a constant value.
    pub ties: Vec<(NetId, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedNetlist {
    names: Vec<String>,
    provenance: Vec<Option<NetId>>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    latches: Vec<MappedLatch>,
    luts: Vec<Lut>,
    ties: Vec<(NetId, bool)>,
    levels: Vec<u32>,
}

impl MappedNetlist {
    pub fn new(parts: MappedParts) -> Result<Self, NetlistError> {
        let MappedParts { names, mut provenance, inputs, outputs, latches, luts, ties } = parts;
        let count = names.len();
        if count == 0 {
            return Err(NetlistError::Empty);
        }
        provenance.resize(count, None);
        let in_range = |net: NetId| {
            if net.index() < count {
                Ok(())
            } else {
                Err(NetlistError::UndefinedNet(net))
            }
        };

        // 0 = undefined, 1 = defined source, 2 = LUT root not yet reached
        let mut state = vec![0u8; count];
        state[0] = 1;
        let mut define = |net: NetId, kind: u8| {
            in_range(net)?;
            if state[net.index()] != 0 {
                return Err(NetlistError::DuplicateDefinition(net));
            }
            state[net.index()] = kind;
            Ok(())
        };
        for &net in &inputs {
            define(net, 1)?;
        }
        for latch in &latches {
            define(latch.state, 1)?;
        }
        for &(net, _) in &ties {
            define(net, 1)?;
        }
        for lut in &luts {
            define(lut.root, 2)?;
        }

        let mut levels = vec![0u32; count];
        for lut in &luts {
            if lut.leaves.is_empty() || lut.truth.vars() != lut.leaves.len() {
                return Err(NetlistError::InvalidLut(lut.root));
            }
            let mut level = 0;
            for &leaf in &lut.leaves {
                in_range(leaf)?;
                match state[leaf.index()] {
                    0 => return Err(NetlistError::UndefinedNet(leaf)),
                    2 => return Err(NetlistError::CombinationalCycle(leaf)),
                    _ => level = level.max(levels[leaf.index()]),
                }
            }
            levels[lut.root.index()] = level + 1;
            state[lut.root.index()] = 1;
        }
        for &net in outputs.iter().chain(latches.iter().map(|l| &l.data)) {
            in_range(net)?;
            if state[net.index()] == 0 {
                return Err(NetlistError::UndefinedNet(net));
            }
        }
        Ok(MappedNetlist { names, provenance, inputs, outputs, latches, luts, ties, levels })
    }

    /// Fails if any LUT has more than `k` inputs.
    pub fn check_lut_size(&self, k: usize) -> Result<(), NetlistError> {
        match self.luts.iter().find(|l| l.leaves.len() > k) {
            Some(lut) => Err(NetlistError::InvalidLut(lut.root)),
            None => Ok(()),
        }
    }

    pub fn net_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, net: NetId) -> &str {
        &self.names[net.index()]
    }

    pub fn provenance(&self, net: NetId) -> Option<NetId> {
        self.provenance[net.index()]
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn latches(&self) -> &[MappedLatch] {
        &self.latches
    }

    pub fn luts(&self) -> &[Lut] {
        &self.luts
    }

    pub fn ties(&self) -> &[(NetId, bool)] {
        &self.ties
    }

    /// 0 for sources and ties, `1 + max(level of leaves)` for LUT roots.
    pub fn level(&self, net: NetId) -> u32 {
        self.levels[net.index()]
    }

    pub fn max_level(&self) -> u32 {
        self.luts.iter().map(|l| self.level(l.root)).max().unwrap_or(0)
    }
}
