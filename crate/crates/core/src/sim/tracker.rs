// SPDX-License-Identifier: Apache-2.0
//! Per-signal toggle trackers.

use crate::netlist::{BusGroup, NetId};
use crate::SATURATED;

/// What a tracker observes: one net, or a packed bus tracked word-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrackTarget {
    Net(NetId),
    Bus(BusGroup),
}

impl TrackTarget {
    pub fn bits(&self) -> &[NetId] {
        match self {
            TrackTarget::Net(net) => std::slice::from_ref(net),
            TrackTarget::Bus(bus) => &bus.bits,
        }
    }

    pub fn width(&self) -> usize {
        self.bits().len()
    }
}

/// Last observed value (`state`) and saturating per-bit toggle counters for one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimoptTracker {
    target: TrackTarget,
    state: Vec<u64>,
    counters: Vec<u64>,
    is_clock: bool,
}

pub(crate) fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

/// Packs bits LSB-first into 64-bit words.
pub fn pack_bits(bits: impl IntoIterator<Item = bool>) -> Vec<u64> {
    let mut words = Vec::new();
    for (i, bit) in bits.into_iter().enumerate() {
        if i % 64 == 0 {
            words.push(0);
        }
        words[i / 64] |= (bit as u64) << (i % 64);
    }
    words
}

impl SimoptTracker {
    pub fn new(target: TrackTarget) -> Self {
        let width = target.width();
        assert!(width > 0, "tracker target must have at least one bit");
        SimoptTracker { target, state: vec![0; words_for(width)], counters: vec![0; width], is_clock: false }
    }

    /// Clock trackers hold the saturated counter on every bit and are never updated.
    pub fn clock(target: TrackTarget) -> Self {
        let mut t = Self::new(target);
        t.counters.fill(SATURATED);
        t.is_clock = true;
        t
    }

    pub fn target(&self) -> &TrackTarget {
        &self.target
    }

    pub fn width(&self) -> usize {
        self.counters.len()
    }

    pub fn is_clock(&self) -> bool {
        self.is_clock
    }

    pub fn counters(&self) -> &[u64] {
        &self.counters
    }

    /// Last observed value, LSB-first words.
    pub fn state(&self) -> &[u64] {
        &self.state
    }

    pub(crate) fn counters_mut(&mut self) -> &mut [u64] {
        &mut self.counters
    }

    fn check_width(&self, value: &[u64]) {
        assert_eq!(value.len(), self.state.len(), "tracker width mismatch");
        let tail = self.width() % 64;
        if tail != 0 {
            assert_eq!(value[value.len() - 1] >> tail, 0, "value has bits beyond tracker width");
        }
    }

    /// Records `value` as the reference state without counting. Used for the
    /// initialisation cycle.
    pub fn load_state(&mut self, value: &[u64]) {
        self.check_width(value);
        self.state.copy_from_slice(value);
    }

    /// Counts the bits of `value` that differ from the stored state and
    /// brings the state up to date.
    ///
    /// Single-bit targets compare and bump one counter. Wider targets walk
    /// the XOR mask from the least significant set bit, incrementing that
    /// bit's counter and flipping its state bit until the mask is empty.
    pub fn mask_and_increment(&mut self, value: &[u64]) {
        assert!(!self.is_clock, "clock trackers are not updated");
        self.check_width(value);
        if self.counters.len() == 1 {
            if value[0] ^ self.state[0] != 0 {
                self.counters[0] = self.counters[0].saturating_add(1);
                self.state[0] = value[0];
            }
            return;
        }
        for (w, (&v, state)) in value.iter().zip(self.state.iter_mut()).enumerate() {
            let mut mask = v ^ *state;
            while mask != 0 {
                let bit = mask.trailing_zeros() as usize;
                let counter = &mut self.counters[w * 64 + bit];
                *counter = counter.saturating_add(1);
                *state ^= 1 << bit;
                mask &= mask - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bus(width: usize) -> SimoptTracker {
        let bits = (1..=width as u32).map(NetId).collect();
        SimoptTracker::new(TrackTarget::Bus(BusGroup { base_name: "v".into(), bits }))
    }

    #[test]
    fn xor_mask_counts_changed_bits() {
        let mut t = bus(4);
        t.mask_and_increment(&[0b1010]);
        assert_eq!(t.counters(), &[0, 1, 0, 1]);
        assert_eq!(t.state(), &[0b1010]);
    }

    #[test]
    fn unchanged_value_is_a_no_op() {
        for width in [1, 3, 64, 65, 128] {
            let mut t = bus(width);
            let value = pack_bits((0..width).map(|i| i % 3 == 0));
            t.load_state(&value);
            let before = t.clone();
            t.mask_and_increment(&value);
            assert_eq!(t, before);
        }
    }

    #[test]
    fn single_bit_counts_toggles() {
        let mut t = SimoptTracker::new(TrackTarget::Net(NetId(1)));
        for v in [0, 1, 0] {
            t.mask_and_increment(&[v]);
        }
        assert_eq!(t.counters(), &[2]);
    }

    #[test]
    fn counters_saturate() {
        let mut t = SimoptTracker::new(TrackTarget::Net(NetId(1)));
        t.counters_mut()[0] = SATURATED;
        t.mask_and_increment(&[1]);
        assert_eq!(t.counters(), &[SATURATED]);
        assert_eq!(t.state(), &[1]);

        let mut t = bus(70);
        t.counters_mut()[69] = SATURATED;
        t.mask_and_increment(&[0, 1 << 5]);
        assert_eq!(t.counters()[69], SATURATED);
    }

    #[test]
    fn clock_tracker_is_saturated() {
        let t = SimoptTracker::clock(TrackTarget::Net(NetId(3)));
        assert!(t.is_clock());
        assert_eq!(t.counters(), &[SATURATED]);
    }

    #[test]
    #[should_panic(expected = "width mismatch")]
    fn width_mismatch_panics() {
        bus(70).mask_and_increment(&[1]);
    }

    #[test]
    #[should_panic(expected = "beyond tracker width")]
    fn stray_high_bits_panic() {
        bus(3).mask_and_increment(&[0b1000]);
    }
}
