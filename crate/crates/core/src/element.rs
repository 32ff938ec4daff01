//! Normal-form arithmetic in the monoid BS⁺(1,n) = { b^m a^x : m ≥ 0, x ∈ ℤ }.
//!
//! The defining relation is `ab = ba^n`, which gives `a^x b^m = b^m a^{n^m x}` and
//! therefore
//!
//! ```text
//! (b^m a^x)(b^p a^y) = b^{m+p} a^{n^p x + y}
//! ```
//!
//! a-exponents are arbitrary precision; b-exponents are `u32` and checked
//! against [`GroupParams::max_b`] wherever user input enters the monoid.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lex::Cursor;

/// Default cap on b-exponents accepted from input.
pub const DEFAULT_MAX_B: u32 = 64;

/// The dilation base `n` of BS(1,n), plus the b-exponent cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    base: u32,
    max_b: u32,
}

impl GroupParams {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::domain(format!("base n must be >= 2, got {base}")));
        }
        Ok(GroupParams {
            base,
            max_b: DEFAULT_MAX_B,
        })
    }

    pub fn with_max_b(mut self, max_b: u32) -> Self {
        self.max_b = max_b;
        self
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn max_b(&self) -> u32 {
        self.max_b
    }

    /// `n^m`, exactly.
    pub fn pow(&self, m: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.base), m as usize)
    }

    /// Rejects elements whose b-exponent exceeds the cap.
    pub fn check(&self, e: &MonoidElement) -> Result<()> {
        if e.b_exp > self.max_b {
            return Err(Error::domain(format!(
                "b-exponent {} exceeds cap {}",
                e.b_exp, self.max_b
            )));
        }
        Ok(())
    }
}

/// `b^m a^x` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonoidElement {
    #[serde(rename = "m")]
    b_exp: u32,
    #[serde(rename = "x", with = "crate::serde_int")]
    a_exp: BigInt,
}

impl MonoidElement {
    pub fn new(b_exp: u32, a_exp: impl Into<BigInt>) -> Self {
        MonoidElement {
            b_exp,
            a_exp: a_exp.into(),
        }
    }

    pub fn identity() -> Self {
        MonoidElement::new(0, 0)
    }

    pub fn b_exp(&self) -> u32 {
        self.b_exp
    }

    pub fn a_exp(&self) -> &BigInt {
        &self.a_exp
    }

    pub fn is_identity(&self) -> bool {
        self.b_exp == 0 && self.a_exp.is_zero()
    }
}

pub fn identity() -> MonoidElement {
    MonoidElement::identity()
}

/// `(m1, x1)·(m2, x2) = (m1 + m2, n^{m2} x1 + x2)`.
pub fn multiply(e1: &MonoidElement, e2: &MonoidElement, p: &GroupParams) -> MonoidElement {
    let b_exp = e1.b_exp.checked_add(e2.b_exp).expect("b-exponent overflow");
    let a_exp = p.pow(e2.b_exp) * &e1.a_exp + &e2.a_exp;
    MonoidElement { b_exp, a_exp }
}

/// `e^j` by binary powering; fails if the resulting b-exponent would exceed the cap.
pub fn power(e: &MonoidElement, j: u64, p: &GroupParams) -> Result<MonoidElement> {
    let total = (e.b_exp as u64)
        .checked_mul(j)
        .filter(|&t| t <= p.max_b as u64)
        .ok_or_else(|| {
            Error::domain(format!(
                "power b-exponent {}*{} exceeds cap {}",
                e.b_exp, j, p.max_b
            ))
        })?;
    debug_assert!(total <= u32::MAX as u64);
    let mut result = MonoidElement::identity();
    let mut base = e.clone();
    let mut rem = j;
    while rem > 0 {
        if rem & 1 == 1 {
            result = multiply(&result, &base, p);
        }
        rem >>= 1;
        if rem > 0 {
            base = multiply(&base, &base, p);
        }
    }
    Ok(result)
}

/// `e1 e2 = e2 e1`, via `(n^{m2} - 1) x1 = (n^{m1} - 1) x2`.
pub fn commutes(e1: &MonoidElement, e2: &MonoidElement, p: &GroupParams) -> bool {
    let lhs = (p.pow(e2.b_exp) - 1u32) * &e1.a_exp;
    let rhs = (p.pow(e1.b_exp) - 1u32) * &e2.a_exp;
    lhs == rhs
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b^{}*a^{}", self.b_exp, self.a_exp)
    }
}

pub fn format(e: &MonoidElement) -> String {
    e.to_string()
}

/// Parses `b^<uint>*a^<int>`, `a^<int>` or `b^<uint>`.
pub fn parse(text: &str) -> Result<MonoidElement> {
    let mut cur = Cursor::new(text);
    let e = parse_element(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

pub(crate) fn parse_element(cur: &mut Cursor<'_>) -> Result<MonoidElement> {
    cur.skip_ws();
    let mut b_exp: Option<u32> = None;
    if cur.peek() == Some('b') {
        let at = cur.offset();
        cur.eat('b');
        cur.skip_ws();
        cur.expect('^')?;
        cur.skip_ws();
        let v = cur.integer()?;
        if v.is_negative() {
            return Err(Error::domain(format!(
                "negative b-exponent {v} at byte {at} is outside BS+"
            )));
        }
        b_exp = Some(v.to_u32().ok_or_else(|| {
            Error::domain(format!("b-exponent {v} at byte {at} is out of range"))
        })?);
        cur.skip_ws();
        if !cur.eat('*') {
            return Ok(MonoidElement::new(b_exp.unwrap_or(0), 0));
        }
        cur.skip_ws();
    }
    if !cur.eat('a') {
        return Err(cur.error(if b_exp.is_some() {
            "expected `a^<int>` after `*`"
        } else {
            "expected `b^` or `a^`"
        }));
    }
    cur.skip_ws();
    cur.expect('^')?;
    cur.skip_ws();
    let a_exp = cur.integer()?;
    Ok(MonoidElement::new(b_exp.unwrap_or(0), a_exp))
}

impl FromStr for MonoidElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
