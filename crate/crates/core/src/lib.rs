// SPDX-License-Identifier: Apache-2.0
//! Simulation-guided LUT technology mapping.
//!
//! A netlist is simulated while per-bit toggle counters record how often each
//! signal changes. The counters travel as a canonical text dump to the mapper,
//! where they scale the area cost of priority cuts.

pub mod netlist;
pub mod sim;
pub mod dump;
pub mod equiv;
pub mod flow;
pub mod mapper;

/// Counter value marking a signal of maximal importance, such as a clock.
pub const SATURATED: u64 = u64::MAX;
