//! Finite subsets of BS⁺(1,n) stored as coset decompositions
//! `S = b^{m_0} a^{A_0} ∪ … ∪ b^{m_t} a^{A_t}` with `m_0 < … < m_t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::element::{self, GroupParams, MonoidElement};
use crate::error::{Error, Result};
use crate::intset::{self, IntSet};
use crate::lex::Cursor;

/// Equality and hashing look at `n` and the slices; the b-exponent cap is input policy.
#[derive(Debug, Clone)]
pub struct MonoidSet {
    params: GroupParams,
    slices: BTreeMap<u32, IntSet>,
}

impl PartialEq for MonoidSet {
    fn eq(&self, other: &Self) -> bool {
        self.params.base() == other.params.base() && self.slices == other.slices
    }
}

impl Eq for MonoidSet {}

impl std::hash::Hash for MonoidSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.params.base().hash(state);
        self.slices.hash(state);
    }
}

/// Number of cosets, slice sizes `k_i` and b-exponents `m_i`, in increasing `m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetProfile {
    pub cosets: usize,
    pub sizes: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl MonoidSet {
    pub fn from_elements<I>(elems: I, params: GroupParams) -> Result<Self>
    where
        I: IntoIterator<Item = MonoidElement>,
    {
        let mut grouped: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
        for e in elems {
            params.check(&e)?;
            grouped
                .entry(e.b_exp())
                .or_default()
                .push(e.a_exp().clone());
        }
        if grouped.is_empty() {
            return Err(Error::domain("monoid set must be non-empty"));
        }
        Ok(MonoidSet {
            params,
            slices: grouped
                .into_iter()
                .map(|(m, xs)| (m, IntSet::new(xs)))
                .collect(),
        })
    }

    /// Builds from `(m_i, A_i)` pairs; repeated exponents are merged.
    pub fn from_slices<I>(params: GroupParams, slices: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, IntSet)>,
    {
        let mut grouped: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
        for (m, a) in slices {
            if a.is_empty() {
                return Err(Error::domain(format!("slice at b^{m} is empty")));
            }
            if m > params.max_b() {
                return Err(Error::domain(format!(
                    "b-exponent {m} exceeds cap {}",
                    params.max_b()
                )));
            }
            grouped.entry(m).or_default().extend(a.iter().cloned());
        }
        if grouped.is_empty() {
            return Err(Error::domain("monoid set must be non-empty"));
        }
        Ok(MonoidSet {
            params,
            slices: grouped
                .into_iter()
                .map(|(m, xs)| (m, IntSet::new(xs)))
                .collect(),
        })
    }

    /// `b^m a^A`.
    pub fn single_slice(params: GroupParams, m: u32, a: IntSet) -> Result<Self> {
        MonoidSet::from_slices(params, [(m, a)])
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn slices(&self) -> &BTreeMap<u32, IntSet> {
        &self.slices
    }

    /// `k = Σ |A_i|`.
    pub fn len(&self) -> usize {
        self.slices.values().map(IntSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn slice_count(&self) -> usize {
        self.slices.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = MonoidElement> + '_ {
        self.slices
            .iter()
            .flat_map(|(&m, a)| a.iter().map(move |x| MonoidElement::new(m, x.clone())))
    }

    pub fn contains(&self, e: &MonoidElement) -> bool {
        self.slices
            .get(&e.b_exp())
            .is_some_and(|a| a.contains(e.a_exp()))
    }

    /// Single-slice sets are `b^m a^A`; returns `(m, A)`.
    pub fn as_single_slice(&self) -> Option<(u32, &IntSet)> {
        if self.slices.len() == 1 {
            self.slices.iter().next().map(|(&m, a)| (m, a))
        } else {
            None
        }
    }

    pub fn coset_profile(&self) -> CosetProfile {
        CosetProfile {
            cosets: self.slices.len(),
            sizes: self.slices.values().map(IntSet::len).collect(),
            exponents: self.slices.keys().copied().collect(),
        }
    }

    /// `S·T`, slice pair by slice pair:
    /// `(b^p a^A)(b^q a^B) = b^{p+q} a^{n^q·A + B}`, unioned per output exponent.
    pub fn product_set(&self, other: &MonoidSet) -> Result<MonoidSet> {
        if self.params.base() != other.params.base() {
            return Err(Error::domain(format!(
                "parameter mismatch: n={} vs n={}",
                self.params.base(),
                other.params.base()
            )));
        }
        let mut out: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
        for (&p, a) in &self.slices {
            for (&q, b) in &other.slices {
                let block = intset::dilate_sum(self.params.pow(q), a, 1, b)?;
                let key = p.checked_add(q).expect("b-exponent overflow");
                out.entry(key).or_default().extend(block.iter().cloned());
            }
        }
        Ok(MonoidSet {
            params: self.params,
            slices: out
                .into_iter()
                .map(|(m, xs)| (m, IntSet::new(xs)))
                .collect(),
        })
    }

    pub fn square(&self) -> MonoidSet {
        self.product_set(self).expect("same parameters")
    }

    /// Some pair of elements fails to commute. Pairwise commuting generators
    /// generate an abelian subgroup, so this decides whether `⟨S⟩` is abelian.
    pub fn is_nonabelian(&self) -> bool {
        let cs: Vec<(u32, BigInt)> = self
            .slices
            .keys()
            .map(|&m| (m, self.params.pow(m) - 1u32))
            .collect();
        let slices: Vec<&IntSet> = self.slices.values().collect();
        for (i, a) in slices.iter().enumerate() {
            let (m_i, c_i) = &cs[i];
            // inside one coset: (n^m - 1)(x - y) = 0
            if *m_i > 0 && a.len() >= 2 {
                return true;
            }
            for (j, b) in slices.iter().enumerate().skip(i + 1) {
                let c_j = &cs[j].1;
                for x in a.iter() {
                    let lhs = c_j * x;
                    for y in b.iter() {
                        if lhs != c_i * y {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Parses `{b^0*a^0, b^0*a^1, b^1*a^0}`.
    pub fn parse(text: &str, params: GroupParams) -> Result<MonoidSet> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        cur.expect('{')?;
        let mut elems = Vec::new();
        cur.skip_ws();
        if !cur.eat('}') {
            loop {
                elems.push(element::parse_element(&mut cur)?);
                cur.skip_ws();
                if cur.eat('}') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        cur.finish()?;
        MonoidSet::from_elements(elems, params)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MonoidSet> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("monoid set json: {e}")))
    }
}

impl fmt::Display for MonoidSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct SliceRepr {
    m: u32,
    #[serde(rename = "A")]
    a: IntSet,
}

#[derive(Serialize, Deserialize)]
struct MonoidSetRepr {
    n: u32,
    slices: Vec<SliceRepr>,
}

impl Serialize for MonoidSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonoidSetRepr {
            n: self.params.base(),
            slices: self
                .slices
                .iter()
                .map(|(&m, a)| SliceRepr { m, a: a.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonoidSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MonoidSetRepr::deserialize(d)?;
        if repr.slices.windows(2).any(|w| w[0].m >= w[1].m) {
            return Err(D::Error::custom(
                "slice exponents must be strictly increasing",
            ));
        }
        let params = GroupParams::new(repr.n).map_err(D::Error::custom)?;
        let max_m = repr.slices.iter().map(|s| s.m).max().unwrap_or(0);
        let params = params.with_max_b(params.max_b().max(max_m));
        MonoidSet::from_slices(params, repr.slices.into_iter().map(|s| (s.m, s.a)))
            .map_err(D::Error::custom)
    }
}
