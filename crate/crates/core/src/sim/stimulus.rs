// SPDX-License-Identifier: Apache-2.0
//! Input vectors for simulation.
//!
//! Random stimulus uses xoshiro256** seeded through SplitMix64 from the
//! 64-bit seed. Each cycle draws `ceil(inputs / 64)` words in order; primary
//! input `i` (declaration order) takes bit `i % 64` of word `i / 64`.
//!
//! Stimulus files start with a header naming primary inputs or input buses,
//! followed by one line per cycle with one `0b...` or `0x...` literal per
//! column. Bit `k` of a literal drives `base[k]`. Inputs absent from the
//! header are held at 0. Blank lines and `#` comments are skipped.

use std::collections::HashMap;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use super::SimError;
use crate::netlist::{group_buses, NetId, Netlist};

pub(crate) struct RandomStimulus {
    rng: Xoshiro256StarStar,
}

impl RandomStimulus {
    pub(crate) fn new(seed: u64) -> Self {
        RandomStimulus { rng: Xoshiro256StarStar::seed_from_u64(seed) }
    }

    pub(crate) fn fill(&mut self, pis: &mut [bool]) {
        for chunk in pis.chunks_mut(64) {
            let word = self.rng.next_u64();
            for (i, pi) in chunk.iter_mut().enumerate() {
                *pi = word >> i & 1 == 1;
            }
        }
    }
}

fn stimulus_err(line: usize, msg: impl Into<String>) -> SimError {
    SimError::Stimulus { line, msg: msg.into() }
}

/// Bits of a `0b`/`0x` literal, LSB first, with leading zeros dropped.
fn parse_literal(token: &str) -> Option<Vec<bool>> {
    let (digits, radix_bits) = if let Some(d) = token.strip_prefix("0b") {
        (d, 1)
    } else {
        let d = token.strip_prefix("0x")?;
        (d, 4)
    };
    if digits.is_empty() {
        return None;
    }
    let mut bits = Vec::with_capacity(digits.len() * radix_bits);
    for c in digits.chars().rev() {
        let v = c.to_digit(1 << radix_bits)?;
        for b in 0..radix_bits {
            bits.push(v >> b & 1 == 1);
        }
    }
    while bits.last() == Some(&false) {
        bits.pop();
    }
    Some(bits)
}

/// Parses a stimulus file into `cycles` rows of primary-input values.
pub fn parse_stimulus(n: &Netlist, text: &str, cycles: u64) -> Result<Vec<Vec<bool>>, SimError> {
    let input_pos: HashMap<NetId, usize> = n.inputs().iter().enumerate().map(|(i, &net)| (net, i)).collect();
    let input_buses: HashMap<String, Vec<NetId>> = group_buses(n)
        .into_iter()
        .filter(|b| b.bits.iter().all(|net| input_pos.contains_key(net)))
        .map(|b| (b.base_name, b.bits))
        .collect();

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| stimulus_err(1, "missing header line"))?;
    let mut columns: Vec<Vec<usize>> = Vec::new();
    let mut driven = vec![false; n.inputs().len()];
    for name in header.split_whitespace() {
        let bits: Vec<NetId> = match n.net_by_name(name).filter(|net| input_pos.contains_key(net)) {
            Some(net) => vec![net],
            None => input_buses
                .get(name)
                .cloned()
                .ok_or_else(|| stimulus_err(header_line, format!("`{name}` is not a primary input or input bus")))?,
        };
        let positions: Vec<usize> = bits.iter().map(|net| input_pos[net]).collect();
        for &p in &positions {
            if std::mem::replace(&mut driven[p], true) {
                return Err(stimulus_err(header_line, format!("input driven by more than one column (`{name}`)")));
            }
        }
        columns.push(positions);
    }

    let mut rows = Vec::with_capacity(cycles.min(1 << 20) as usize);
    while (rows.len() as u64) < cycles {
        let Some((line, text)) = lines.next() else {
            return Err(SimError::StimulusTooShort { found: rows.len() as u64, needed: cycles });
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != columns.len() {
            return Err(stimulus_err(line, format!("expected {} values, found {}", columns.len(), tokens.len())));
        }
        let mut row = vec![false; n.inputs().len()];
        for (token, positions) in tokens.iter().zip(&columns) {
            let bits = parse_literal(token).ok_or_else(|| stimulus_err(line, format!("bad literal `{token}`")))?;
            if bits.len() > positions.len() {
                return Err(stimulus_err(
                    line,
                    format!("value `{token}` does not fit in {} bits", positions.len()),
                ));
            }
            for (&p, &bit) in positions.iter().zip(&bits) {
                row[p] = bit;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_blif;

    fn design() -> Netlist {
        parse_blif(b".model t\n.inputs a[0] a[1] a[2] rst\n.outputs y\n.names a[0] rst y\n11 1\n.end\n").unwrap()
    }

    #[test]
    fn literals() {
        assert_eq!(parse_literal("0b101"), Some(vec![true, false, true]));
        assert_eq!(parse_literal("0x4"), Some(vec![false, false, true]));
        assert_eq!(parse_literal("0b000"), Some(vec![]));
        assert_eq!(parse_literal("0xg"), None);
        assert_eq!(parse_literal("0b"), None);
        assert_eq!(parse_literal("5"), None);
    }

    #[test]
    fn buses_and_singles() {
        let n = design();
        let rows = parse_stimulus(&n, "a rst\n0b101 0b1\n0x2 0b0\n", 2).unwrap();
        assert_eq!(rows, vec![vec![true, false, true, true], vec![false, true, false, false]]);
        // unlisted inputs stay low
        let rows = parse_stimulus(&n, "rst\n0b1\n", 1).unwrap();
        assert_eq!(rows, vec![vec![false, false, false, true]]);
    }

    #[test]
    fn errors() {
        let n = design();
        assert!(matches!(parse_stimulus(&n, "a\n0x8\n", 1), Err(SimError::Stimulus { line: 2, .. })));
        assert!(matches!(parse_stimulus(&n, "a rst\n0b1\n", 1), Err(SimError::Stimulus { line: 2, .. })));
        assert!(matches!(parse_stimulus(&n, "y\n0b1\n", 1), Err(SimError::Stimulus { line: 1, .. })));
        assert!(matches!(parse_stimulus(&n, "a a[0]\n0b1 0b1\n", 1), Err(SimError::Stimulus { line: 1, .. })));
        assert!(matches!(
            parse_stimulus(&n, "rst\n0b1\n", 3),
            Err(SimError::StimulusTooShort { found: 1, needed: 3 })
        ));
    }

    #[test]
    fn random_stream_layout() {
        let mut a = RandomStimulus::new(7);
        let mut b = RandomStimulus::new(7);
        let mut pis = vec![false; 70];
        a.fill(&mut pis);
        let w0 = b.rng.next_u64();
        let w1 = b.rng.next_u64();
        for (i, &v) in pis.iter().enumerate() {
            let word = if i < 64 { w0 } else { w1 };
            assert_eq!(v, word >> (i % 64) & 1 == 1);
        }
    }
}
