//! Structural diagnostics of an integer set.
//!
//! For `A = {a_0 < … < a_{k-1}}`: length `ℓ(A) = a_{k-1} - a_0`, holes
//! `h_A = ℓ(A) + 1 - |A|`, `d(A) = gcd(a_i - a_0)`, the normal form
//! `A* = (A - min A) / d(A)`, and `c_m(A)`, the number of residue classes
//! of `A` modulo `m`. Singletons use `d = 0`, `A* = {0}`.
//!
//! Two sets are affine-equivalent (`x ↦ ux + v`, `u ≠ 0`) iff their
//! [`canonical_form`]s agree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intset::{self, IntSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub size: usize,
    #[serde(with = "crate::serde_int")]
    pub length: BigInt,
    #[serde(with = "crate::serde_int")]
    pub gcd_diffs: BigInt,
    #[serde(with = "crate::serde_int")]
    pub holes: BigInt,
    pub normalized: IntSet,
    #[serde(with = "crate::serde_int")]
    pub normalized_length: BigInt,
    /// modulus → c_m(A)
    pub classes: BTreeMap<u64, usize>,
    #[serde(with = "crate::serde_int")]
    pub min_ap_size: BigInt,
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ℓ={} d={} h={} A*={}",
            self.length, self.gcd_diffs, self.holes, self.normalized
        )?;
        for (m, c) in &self.classes {
            write!(f, " c{m}={c}")?;
        }
        write!(
            f,
            " ℓ*={} min_ap={}",
            self.normalized_length, self.min_ap_size
        )
    }
}

fn non_empty<'a>(a: &'a IntSet, what: &str) -> Result<(&'a BigInt, &'a BigInt)> {
    match (a.min(), a.max()) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::domain(format!("{what}: empty set"))),
    }
}

pub fn length(a: &IntSet) -> Result<BigInt> {
    let (lo, hi) = non_empty(a, "length")?;
    Ok(hi - lo)
}

/// `d(A)`; zero for singletons.
pub fn gcd_diffs(a: &IntSet) -> Result<BigInt> {
    let (lo, _) = non_empty(a, "gcd_diffs")?;
    Ok(a.iter().fold(BigInt::zero(), |g, x| g.gcd(&(x - lo))))
}

pub fn holes(a: &IntSet) -> Result<BigInt> {
    Ok(length(a)? + 1u32 - BigInt::from(a.len()))
}

/// `A* = (A - min A) / d(A)`.
pub fn normalize(a: &IntSet) -> Result<IntSet> {
    let (lo, _) = non_empty(a, "normalize")?;
    let d = gcd_diffs(a)?;
    if d.is_zero() {
        return Ok(IntSet::new([BigInt::zero()]));
    }
    Ok(IntSet::new(a.iter().map(|x| (x - lo) / &d)))
}

/// `{max A - x : x ∈ A}`.
pub fn reflect(a: &IntSet) -> Result<IntSet> {
    let (_, hi) = non_empty(a, "reflect")?;
    Ok(IntSet::new(a.iter().map(|x| hi - x)))
}

/// `c_m(A)`.
pub fn residue_classes(a: &IntSet, modulus: u64) -> Result<usize> {
    non_empty(a, "residue_classes")?;
    if modulus == 0 {
        return Err(Error::domain("modulus must be positive"));
    }
    let m = BigInt::from(modulus);
    let classes: BTreeSet<BigInt> = a.iter().map(|x| x.mod_floor(&m)).collect();
    Ok(classes.len())
}

pub fn analyze(a: &IntSet, moduli: &[u64]) -> Result<StructureReport> {
    let length = length(a)?;
    let gcd_diffs = gcd_diffs(a)?;
    let normalized = normalize(a)?;
    let normalized_length = if gcd_diffs.is_zero() {
        BigInt::zero()
    } else {
        &length / &gcd_diffs
    };
    let mut classes = BTreeMap::new();
    for &m in moduli {
        classes.insert(m, residue_classes(a, m)?);
    }
    let report = StructureReport {
        size: a.len(),
        holes: &length + 1u32 - BigInt::from(a.len()),
        min_ap_size: &normalized_length + 1u32,
        length,
        gcd_diffs,
        normalized,
        normalized_length,
        classes,
    };
    debug_assert!(report.holes >= BigInt::zero());
    Ok(report)
}

/// Size of the shortest arithmetic progression containing `A`: `ℓ/d + 1`.
pub fn min_ap_size(a: &IntSet) -> Result<BigInt> {
    let ap = min_ap(a)?;
    Ok(ap.len)
}

/// `{start + i·step : 0 ≤ i < len}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progression {
    pub start: BigInt,
    pub step: BigInt,
    pub len: BigInt,
}

impl Progression {
    pub fn contains(&self, v: &BigInt) -> bool {
        let off = v - &self.start;
        if self.step.is_zero() {
            return off.is_zero();
        }
        let (q, r) = off.div_rem(&self.step);
        r.is_zero() && q >= BigInt::zero() && q < self.len
    }
}

/// The progression witnessing [`min_ap_size`]. Singletons get step 1.
pub fn min_ap(a: &IntSet) -> Result<Progression> {
    let (lo, hi) = non_empty(a, "min_ap")?;
    let d = gcd_diffs(a)?;
    if d.is_zero() {
        return Ok(Progression {
            start: lo.clone(),
            step: BigInt::one(),
            len: BigInt::one(),
        });
    }
    Ok(Progression {
        start: lo.clone(),
        len: (hi - lo) / &d + 1u32,
        step: d,
    })
}

/// Lexicographically smaller of `normalize(A)` and `normalize(reflect(A))`.
pub fn canonical_form(a: &IntSet) -> Result<IntSet> {
    let direct = normalize(a)?;
    let mirrored = normalize(&reflect(a)?)?;
    Ok(std::cmp::min(direct, mirrored))
}

/// Affine map `x ↦ u·x + v` taking `canonical_form(A)` back onto `A`.
pub fn canonical_witness(a: &IntSet) -> Result<(BigInt, BigInt)> {
    let (lo, hi) = non_empty(a, "canonical_witness")?;
    let d = gcd_diffs(a)?;
    if d.is_zero() {
        return Ok((BigInt::one(), lo.clone()));
    }
    let direct = normalize(a)?;
    let mirrored = normalize(&reflect(a)?)?;
    if direct <= mirrored {
        Ok((d, lo.clone()))
    } else {
        Ok((-d, hi.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalTag {
    /// affine image of `{0,1,3}`
    Type013,
    /// affine image of `{0,1,4}`
    Type014,
    /// affine image of `3·{0..n} ∪ (3·{0..n} + 1)`
    UnionType(u64),
    #[serde(rename = "None")]
    NotExtremal,
}

impl fmt::Display for ExtremalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalTag::Type013 => f.write_str("Type013"),
            ExtremalTag::Type014 => f.write_str("Type014"),
            ExtremalTag::UnionType(n) => write!(f, "UnionType({n})"),
            ExtremalTag::NotExtremal => f.write_str("None"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalClass {
    pub tag: ExtremalTag,
    /// `(u, v)` with `affine_image(model, u, v) = A`.
    #[serde(with = "witness_serde")]
    pub witness_affine: Option<(BigInt, BigInt)>,
}

mod witness_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair(
        #[serde(with = "crate::serde_int")] BigInt,
        #[serde(with = "crate::serde_int")] BigInt,
    );

    pub fn serialize<S: Serializer>(
        v: &Option<(BigInt, BigInt)>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|(u, w)| Pair(u.clone(), w.clone()))
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<(BigInt, BigInt)>, D::Error> {
        Ok(Option::<Pair>::deserialize(d)?.map(|Pair(u, w)| (u, w)))
    }
}

/// `3·{0..n} ∪ (3·{0..n} + 1)`.
pub fn union_model(n: u64) -> IntSet {
    IntSet::new((0..=n).flat_map(|i| {
        let base = BigInt::from(3 * i);
        [base.clone(), base + 1u32]
    }))
}

pub fn extremal_model(tag: ExtremalTag) -> Option<IntSet> {
    match tag {
        ExtremalTag::Type013 => Some(IntSet::new([0, 1, 3])),
        ExtremalTag::Type014 => Some(IntSet::new([0, 1, 4])),
        ExtremalTag::UnionType(n) => Some(union_model(n)),
        ExtremalTag::NotExtremal => None,
    }
}

/// Which extremal family for `|A + 3·A| = 4|A| - 4` the set `A` belongs to.
pub fn classify_extremal(a: &IntSet) -> Result<ExtremalClass> {
    if a.len() < 3 {
        return Err(Error::domain(format!(
            "classify_extremal needs |A| >= 3, got {}",
            a.len()
        )));
    }
    let canon = canonical_form(a)?;
    let mut tag = ExtremalTag::NotExtremal;
    if canon == IntSet::new([0, 1, 3]) {
        tag = ExtremalTag::Type013;
    } else if canon == IntSet::new([0, 1, 4]) {
        tag = ExtremalTag::Type014;
    } else if a.len().is_multiple_of(2) {
        let n = (a.len() / 2 - 1) as u64;
        if canon == union_model(n) {
            tag = ExtremalTag::UnionType(n);
        }
    }
    let witness_affine = match tag {
        ExtremalTag::NotExtremal => None,
        _ => {
            let (u, v) = canonical_witness(a)?;
            debug_assert_eq!(
                intset::affine_image(&extremal_model(tag).unwrap(), u.clone(), v.clone()).as_ref(),
                Ok(a)
            );
            Some((u, v))
        }
    };
    Ok(ExtremalClass {
        tag,
        witness_affine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intset::affine_image;

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.iter().copied())
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&set(&[0, 1, 3]), &[3]).unwrap();
        assert_eq!(r.length, big(3));
        assert_eq!(r.gcd_diffs, big(1));
        assert_eq!(r.holes, big(1));
        assert_eq!(r.normalized, set(&[0, 1, 3]));
        assert_eq!(r.classes[&3], 2);
        assert_eq!(r.min_ap_size, big(4));

        let r = analyze(&set(&[0, 3, 9]), &[3]).unwrap();
        assert_eq!(r.gcd_diffs, big(3));
        assert_eq!(r.normalized, set(&[0, 1, 3]));
        assert_eq!(r.normalized_length, big(3));
        assert_eq!(r.holes, big(7));
        assert_eq!(r.classes[&3], 1);
        assert_eq!(r.to_string(), "ℓ=9 d=3 h=7 A*={0,1,3} c3=1 ℓ*=3 min_ap=4");

        let r = analyze(&set(&[0, 1, 2]), &[3]).unwrap();
        assert_eq!(r.holes, big(0));
        assert_eq!(r.classes[&3], 3);
    }

    #[test]
    fn analyze_singleton_and_errors() {
        let r = analyze(&set(&[7]), &[3, 5]).unwrap();
        assert_eq!(r.gcd_diffs, big(0));
        assert_eq!(r.normalized, set(&[0]));
        assert_eq!(r.normalized_length, big(0));
        assert_eq!(r.min_ap_size, big(1));
        assert!(matches!(
            analyze(&IntSet::empty(), &[3]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(analyze(&set(&[1]), &[0]), Err(Error::Domain(_))));
    }

    #[test]
    fn residues_of_negative_values() {
        assert_eq!(residue_classes(&set(&[-1, 2, 5]), 3).unwrap(), 1);
        assert_eq!(residue_classes(&set(&[-3, -2, -1, 0]), 3).unwrap(), 3);
    }

    #[test]
    fn min_ap_examples() {
        assert_eq!(min_ap_size(&set(&[0, 2, 6])).unwrap(), big(4));
        assert_eq!(min_ap_size(&set(&[0, 1, 2])).unwrap(), big(3));
        assert_eq!(min_ap_size(&set(&[0, 1, 3])).unwrap(), big(4));
        assert_eq!(min_ap_size(&set(&[5])).unwrap(), big(1));
        let ap = min_ap(&set(&[-4, 2, 8])).unwrap();
        assert_eq!((ap.start, ap.step, ap.len), (big(-4), big(6), big(3)));
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(canonical_form(&set(&[0, 3, 9])).unwrap(), set(&[0, 1, 3]));
        assert_eq!(canonical_form(&set(&[0, 2, 3])).unwrap(), set(&[0, 1, 3]));
        assert_eq!(canonical_form(&set(&[0, 1, 3])).unwrap(), set(&[0, 1, 3]));
        assert_eq!(canonical_form(&set(&[0, 3, 4])).unwrap(), set(&[0, 1, 4]));
        assert_eq!(canonical_form(&set(&[-2])).unwrap(), set(&[0]));
    }

    #[test]
    fn canonical_form_is_affine_invariant() {
        for mask in 1u32..(1 << 7) {
            let a = IntSet::new((0..7).filter(|i| mask >> i & 1 == 1));
            let c = canonical_form(&a).unwrap();
            assert_eq!(canonical_form(&c).unwrap(), c);
            for u in [-3, -2, -1, 1, 2, 3] {
                for v in -5..=5 {
                    let img = affine_image(&a, u, v).unwrap();
                    assert_eq!(canonical_form(&img).unwrap(), c, "{a} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn witness_maps_canonical_onto_input() {
        for a in [
            set(&[2, 5, 11]),
            set(&[0, 2, 3]),
            set(&[10, 7, 1]),
            set(&[4]),
        ] {
            let c = canonical_form(&a).unwrap();
            let (u, v) = canonical_witness(&a).unwrap();
            assert_eq!(affine_image(&c, u, v).unwrap(), a);
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify_extremal(&set(&[0, 1, 3])).unwrap();
        assert_eq!(c.tag, ExtremalTag::Type013);
        assert_eq!(c.witness_affine, Some((big(1), big(0))));
        assert_eq!(
            classify_extremal(&set(&[0, 1, 4])).unwrap().tag,
            ExtremalTag::Type014
        );
        assert_eq!(
            classify_extremal(&set(&[0, 1, 3, 4])).unwrap().tag,
            ExtremalTag::UnionType(1)
        );
        assert_eq!(
            classify_extremal(&set(&[0, 1, 2])).unwrap().tag,
            ExtremalTag::NotExtremal
        );
        assert!(classify_extremal(&set(&[0, 1, 2]))
            .unwrap()
            .witness_affine
            .is_none());
        assert!(matches!(
            classify_extremal(&set(&[0, 1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn classify_affine_images_with_witness() {
        for (model, tag) in [
            (set(&[0, 1, 3]), ExtremalTag::Type013),
            (set(&[0, 1, 4]), ExtremalTag::Type014),
            (union_model(2), ExtremalTag::UnionType(2)),
        ] {
            for (u, v) in [(-2, 7), (3, -1), (-1, 0), (5, 5)] {
                let a = affine_image(&model, u, v).unwrap();
                let c = classify_extremal(&a).unwrap();
                assert_eq!(c.tag, tag);
                let (wu, wv) = c.witness_affine.unwrap();
                assert_eq!(affine_image(&model, wu, wv).unwrap(), a);
            }
        }
    }

    #[test]
    fn type013_and_type014_are_distinct_classes() {
        assert_ne!(
            canonical_form(&set(&[0, 1, 3])).unwrap(),
            canonical_form(&set(&[0, 1, 4])).unwrap()
        );
        // {0,1,4} is the normalized mirror of {0,3,4}
        assert_eq!(
            normalize(&reflect(&set(&[0, 3, 4])).unwrap()).unwrap(),
            set(&[0, 1, 4])
        );
    }

    #[test]
    fn union_model_is_its_own_canonical_form() {
        for n in 0..5 {
            let m = union_model(n);
            assert_eq!(m.len(), 2 * (n as usize + 1));
            assert_eq!(canonical_form(&m).unwrap(), m);
        }
    }

    #[test]
    fn json_report_has_exact_integers() {
        let r = analyze(&set(&[0, 3, 9]), &[3]).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"length\":9"));
        assert!(json.contains("\"classes\":{\"3\":1}"));
        assert_eq!(serde_json::from_str::<StructureReport>(&json).unwrap(), r);
        let c = classify_extremal(&set(&[0, 2, 3])).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"tag":"Type013","witness_affine":[-1,3]}"#);
        assert_eq!(serde_json::from_str::<ExtremalClass>(&json).unwrap(), c);
    }
}
