//! Fixed-window bit-vector kernel for sets of small non-negative integers.
//!
//! Sumsets are shift-or accumulations: `A + B = ⋃_{a ∈ A} (B << a)`. The window
//! is chosen by the caller; any bit that would land outside it is a capacity
//! error rather than silent truncation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    window: usize,
}

impl BitSet {
    pub fn new(window: usize) -> Self {
        BitSet {
            words: vec![0; window.div_ceil(64)],
            window,
        }
    }

    pub fn from_values<I: IntoIterator<Item = usize>>(values: I, window: usize) -> Result<Self> {
        let mut set = BitSet::new(window);
        for v in values {
            set.insert(v)?;
        }
        Ok(set)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn insert(&mut self, v: usize) -> Result<()> {
        if v >= self.window {
            return Err(Error::Capacity(format!(
                "value {v} outside bit-window [0, {})",
                self.window
            )));
        }
        self.words[v / 64] |= 1u64 << (v % 64);
        Ok(())
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.window && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Highest set bit, if any.
    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// `self |= other << shift`.
    pub fn or_shifted(&mut self, other: &BitSet, shift: usize) -> Result<()> {
        if let Some(top) = other.max() {
            if top + shift >= self.window {
                return Err(Error::Capacity(format!(
                    "shifted value {} outside bit-window [0, {})",
                    top + shift,
                    self.window
                )));
            }
        } else {
            return Ok(());
        }
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        let n = self.words.len();
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let dst = i + word_shift;
            if dst < n {
                self.words[dst] |= w << bit_shift;
            }
            if bit_shift != 0 && dst + 1 < n {
                self.words[dst + 1] |= w >> (64 - bit_shift);
            }
        }
        Ok(())
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (d, s) in self.words.iter_mut().zip(&other.words) {
            *d |= s;
        }
    }

    /// `A + B` into `out` (cleared first).
    pub fn sumset_into(a: &BitSet, b: &BitSet, out: &mut BitSet) -> Result<()> {
        out.clear();
        for shift in a.iter() {
            out.or_shifted(b, shift)?;
        }
        Ok(())
    }

    pub fn sumset(a: &BitSet, b: &BitSet, window: usize) -> Result<BitSet> {
        let mut out = BitSet::new(window);
        BitSet::sumset_into(a, b, &mut out)?;
        Ok(out)
    }

    /// `r·A` for `r ≥ 0`.
    pub fn dilate(&self, r: usize, window: usize) -> Result<BitSet> {
        let mut out = BitSet::new(window);
        for v in self.iter() {
            let scaled = v.checked_mul(r).ok_or_else(|| {
                Error::Capacity(format!("dilation {r}*{v} overflows machine width"))
            })?;
            out.insert(scaled)?;
        }
        Ok(out)
    }
}
