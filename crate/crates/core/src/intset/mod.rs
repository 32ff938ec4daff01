//! Finite sets of integers: sumsets, dilates, sums of dilates and affine images.
//!
//! [`IntSet`] is the public, arbitrary-precision form. The [`bitset`] kernel is
//! the fixed-window form used by the exhaustive scans; both compute the same
//! sumsets, and the tests hold them to it.

pub mod bitset;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lex::Cursor;

use self::bitset::BitSet;

/// Strictly increasing sequence of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntSet {
    elems: Vec<BigInt>,
}

impl IntSet {
    pub fn new<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut elems: Vec<BigInt> = values.into_iter().map(Into::into).collect();
        elems.sort_unstable();
        elems.dedup();
        IntSet { elems }
    }

    pub fn empty() -> Self {
        IntSet { elems: Vec::new() }
    }

    /// Caller guarantees `elems` is strictly increasing.
    pub(crate) fn from_sorted(elems: Vec<BigInt>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        IntSet { elems }
    }

    /// Inclusive interval `[lo, hi]`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        IntSet::new(lo..=hi)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.elems
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.elems.last()
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.elems.binary_search(v).is_ok()
    }

    /// Machine-width copy, if every element fits.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.elems.iter().map(ToPrimitive::to_i64).collect()
    }

    pub(crate) fn require_non_empty(&self, what: &str) -> Result<()> {
        if self.is_empty() {
            Err(Error::domain(format!("{what}: empty set")))
        } else {
            Ok(())
        }
    }

    /// Bit form with every element shifted by `-offset`; fails if anything
    /// falls outside `[0, window)`.
    pub fn to_bits(&self, offset: &BigInt, window: usize) -> Result<BitSet> {
        let mut out = BitSet::new(window);
        for v in &self.elems {
            let shifted = (v - offset).to_usize().ok_or_else(|| {
                Error::Capacity(format!("value {v} outside bit-window at offset {offset}"))
            })?;
            out.insert(shifted)?;
        }
        Ok(out)
    }

    pub fn from_bits(bits: &BitSet, offset: &BigInt) -> Self {
        IntSet::from_sorted(bits.iter().map(|v| BigInt::from(v) + offset).collect())
    }
}

impl FromIterator<BigInt> for IntSet {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        IntSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = &'a BigInt;
    type IntoIter = std::slice::Iter<'a, BigInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_int::vec::serialize(&self.elems, s)
    }
}

impl<'de> Deserialize<'de> for IntSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(IntSet::new(crate::serde_int::vec::deserialize(d)?))
    }
}

/// `A + B` by a k-way merge of the translates `a + B`.
pub fn sumset(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    a.require_non_empty("sumset")?;
    b.require_non_empty("sumset")?;
    // Merge the shorter family of translates.
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut heap: BinaryHeap<Reverse<(BigInt, usize, usize)>> = outer
        .elems
        .iter()
        .enumerate()
        .map(|(i, x)| Reverse((x + &inner.elems[0], i, 0)))
        .collect();
    let mut out: Vec<BigInt> = Vec::with_capacity(outer.len() + inner.len());
    while let Some(Reverse((sum, i, j))) = heap.pop() {
        if j + 1 < inner.len() {
            heap.push(Reverse((&outer.elems[i] + &inner.elems[j + 1], i, j + 1)));
        }
        if out.last() != Some(&sum) {
            out.push(sum);
        }
    }
    debug_assert!(out.len() + 1 >= a.len() + b.len());
    debug_assert!(out.len() <= a.len() * b.len());
    Ok(IntSet::from_sorted(out))
}

/// `r·A`.
pub fn dilate(r: impl Into<BigInt>, a: &IntSet) -> IntSet {
    let r = r.into();
    if a.is_empty() {
        return IntSet::empty();
    }
    if r.is_zero() {
        return IntSet::new([BigInt::zero()]);
    }
    let mut elems: Vec<BigInt> = a.elems.iter().map(|x| x * &r).collect();
    if r.is_negative() {
        elems.reverse();
    }
    IntSet::from_sorted(elems)
}

/// `r·A + s·B`.
pub fn dilate_sum(
    r: impl Into<BigInt>,
    a: &IntSet,
    s: impl Into<BigInt>,
    b: &IntSet,
) -> Result<IntSet> {
    a.require_non_empty("dilate_sum")?;
    b.require_non_empty("dilate_sum")?;
    sumset(&dilate(r, a), &dilate(s, b))
}

/// `u·A + v`, `u ≠ 0`.
pub fn affine_image(a: &IntSet, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Result<IntSet> {
    let u = u.into();
    let v = v.into();
    if u.is_zero() {
        return Err(Error::domain("affine_image: multiplier u must be non-zero"));
    }
    let mut elems: Vec<BigInt> = a.elems.iter().map(|x| x * &u + &v).collect();
    if u.is_negative() {
        elems.reverse();
    }
    Ok(IntSet::from_sorted(elems))
}

/// `A + B` through the bit kernel; both sets are shifted to start at zero and
/// the result must fit in `window` bits.
pub fn sumset_bits(a: &IntSet, b: &IntSet, window: usize) -> Result<IntSet> {
    a.require_non_empty("sumset_bits")?;
    b.require_non_empty("sumset_bits")?;
    let a0 = a.min().unwrap().clone();
    let b0 = b.min().unwrap().clone();
    let ab = a.to_bits(&a0, window)?;
    let bb = b.to_bits(&b0, window)?;
    let out = BitSet::sumset(&ab, &bb, window)?;
    Ok(IntSet::from_bits(&out, &(a0 + b0)))
}

/// Parses a set literal.
///
/// Grammar: one or more terms joined by `|` (or `∪`). A term is
/// `[u*] base [(+|-) v]`, where `base` is either a braced list `{0,1,3}` or an
/// inclusive range `[lo..hi]`. So `3*[0..2] | 3*[0..2]+1` is `{0,1,3,4,6,7}`.
pub fn parse(text: &str) -> Result<IntSet> {
    let mut cur = Cursor::new(text);
    let set = parse_set(&mut cur)?;
    cur.finish()?;
    Ok(set)
}

pub(crate) fn parse_set(cur: &mut Cursor<'_>) -> Result<IntSet> {
    let mut all: Vec<BigInt> = Vec::new();
    loop {
        all.extend(parse_term(cur)?);
        cur.skip_ws();
        if !(cur.eat('|') || cur.eat('∪')) {
            break;
        }
    }
    Ok(IntSet::new(all))
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Vec<BigInt>> {
    cur.skip_ws();
    let mut scale = BigInt::from(1);
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '-' || c == '+') {
        scale = cur.integer()?;
        cur.skip_ws();
        cur.expect('*')?;
        cur.skip_ws();
    }
    let base = match cur.peek() {
        Some('{') => parse_braced(cur)?,
        Some('[') => parse_range(cur)?,
        _ => return Err(cur.error("expected `{` or `[`")),
    };
    cur.skip_ws();
    let shift = if cur.peek() == Some('+') || cur.peek() == Some('-') {
        let neg = cur.eat('-');
        if !neg {
            cur.eat('+');
        }
        cur.skip_ws();
        let v = cur.integer()?;
        if neg {
            -v
        } else {
            v
        }
    } else {
        BigInt::zero()
    };
    Ok(base.into_iter().map(|x| x * &scale + &shift).collect())
}

fn parse_braced(cur: &mut Cursor<'_>) -> Result<Vec<BigInt>> {
    cur.expect('{')?;
    let mut out = Vec::new();
    cur.skip_ws();
    if cur.eat('}') {
        return Ok(out);
    }
    loop {
        cur.skip_ws();
        out.push(cur.integer()?);
        cur.skip_ws();
        if cur.eat('}') {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

fn parse_range(cur: &mut Cursor<'_>) -> Result<Vec<BigInt>> {
    cur.expect('[')?;
    cur.skip_ws();
    let at = cur.offset();
    let lo = cur.integer()?;
    cur.skip_ws();
    if !cur.eat_str("..") {
        return Err(cur.error("expected `..`"));
    }
    cur.skip_ws();
    let hi = cur.integer()?;
    cur.skip_ws();
    cur.expect(']')?;
    if hi < lo {
        return Err(Error::parse(at, format!("empty range [{lo}..{hi}]")));
    }
    let len = (&hi - &lo)
        .to_u32()
        .filter(|&l| l < 1 << 24)
        .ok_or_else(|| Error::parse(at, "range too long to expand"))?;
    Ok((0..=len).map(|i| &lo + BigInt::from(i)).collect())
}

impl FromStr for IntSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
