// SPDX-License-Identifier: Apache-2.0
use std::fmt;

/// Truth table over `vars` inputs. Bit `i` holds the output for the
/// assignment where input `j` takes bit `j` of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    vars: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zero(vars: usize) -> Self {
        TruthTable { vars, words: vec![0; Self::word_count(vars)] }
    }

    pub fn constant(vars: usize, value: bool) -> Self {
        let mut t = Self::zero(vars);
        if value {
            t.words.iter_mut().for_each(|w| *w = !0);
            t.mask_tail();
        }
        t
    }

    /// Projection onto input `var`.
    pub fn var(vars: usize, var: usize) -> Self {
        assert!(var < vars);
        Self::from_fn(vars, |i| i >> var & 1 == 1)
    }

    pub fn from_fn(vars: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zero(vars);
        for i in 0..t.len() {
            if f(i) {
                t.words[i / 64] |= 1 << (i % 64);
            }
        }
        t
    }

    fn word_count(vars: usize) -> usize {
        if vars >= 6 {
            1 << (vars - 6)
        } else {
            1
        }
    }

    fn mask_tail(&mut self) {
        if self.vars < 6 {
            self.words[0] &= (1u64 << (1 << self.vars)) - 1;
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Number of entries, `2^vars`.
    pub fn len(&self) -> usize {
        1 << self.vars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        let bit = 1 << (index % 64);
        if value {
            self.words[index / 64] |= bit;
        } else {
            self.words[index / 64] &= !bit;
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        TruthTable { vars: self.vars, words }
    }

    pub fn not(&self) -> Self {
        let mut t = TruthTable { vars: self.vars, words: self.words.iter().map(|w| !w).collect() };
        t.mask_tail();
        t
    }

    pub fn negate_if(self, cond: bool) -> Self {
        if cond {
            self.not()
        } else {
            self
        }
    }

    /// `Some(value)` when the table does not depend on its inputs.
    pub fn constant_value(&self) -> Option<bool> {
        if *self == Self::zero(self.vars) {
            Some(false)
        } else if *self == Self::constant(self.vars, true) {
            Some(true)
        } else {
            None
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}:", self.vars)?;
        for i in (0..self.len()).rev() {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}
