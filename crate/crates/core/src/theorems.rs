//! Evaluation of each small-doubling bound on one concrete input.
//!
//! Every comparison is exact: bounds such as `7k/2 - 6` are [`BigRational`]s and
//! nothing is ever rounded. A verdict carries `holds` only when the hypotheses
//! are met, and `boundary` whenever `lhs` equals the compared quantity.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::element::GroupParams;
use crate::error::{Error, Result};
use crate::intset::{self, IntSet};
use crate::monoid_set::MonoidSet;
use crate::structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "BS12_Direct")]
    Bs12Direct,
    #[serde(rename = "BS12_Inverse")]
    Bs12Inverse,
    #[serde(rename = "Thm1_3")]
    Thm1_3,
    #[serde(rename = "LSS_1")]
    Lss1,
    #[serde(rename = "LSS_2")]
    Lss2,
    #[serde(rename = "Thm1_5")]
    Thm1_5,
    #[serde(rename = "Cor1_6")]
    Cor1_6,
    #[serde(rename = "Thm3_Direct")]
    Thm3Direct,
    #[serde(rename = "Thm3_Inverse")]
    Thm3Inverse,
    #[serde(rename = "Lemma2_1a")]
    Lemma2_1a,
    #[serde(rename = "Lemma2_1b")]
    Lemma2_1b,
    #[serde(rename = "Lemma2_2a")]
    Lemma2_2a,
    #[serde(rename = "Lemma2_2b")]
    Lemma2_2b,
    #[serde(rename = "Lemma2_3")]
    Lemma2_3,
    #[serde(rename = "Lemma2_4")]
    Lemma2_4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::Bs12Direct,
        TheoremId::Bs12Inverse,
        TheoremId::Thm1_3,
        TheoremId::Lss1,
        TheoremId::Lss2,
        TheoremId::Thm1_5,
        TheoremId::Cor1_6,
        TheoremId::Thm3Direct,
        TheoremId::Thm3Inverse,
        TheoremId::Lemma2_1a,
        TheoremId::Lemma2_1b,
        TheoremId::Lemma2_2a,
        TheoremId::Lemma2_2b,
        TheoremId::Lemma2_3,
        TheoremId::Lemma2_4,
    ];

    pub const LEMMAS: [TheoremId; 6] = [
        TheoremId::Lemma2_1a,
        TheoremId::Lemma2_1b,
        TheoremId::Lemma2_2a,
        TheoremId::Lemma2_2b,
        TheoremId::Lemma2_3,
        TheoremId::Lemma2_4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Bs12Direct => "BS12_Direct",
            TheoremId::Bs12Inverse => "BS12_Inverse",
            TheoremId::Thm1_3 => "Thm1_3",
            TheoremId::Lss1 => "LSS_1",
            TheoremId::Lss2 => "LSS_2",
            TheoremId::Thm1_5 => "Thm1_5",
            TheoremId::Cor1_6 => "Cor1_6",
            TheoremId::Thm3Direct => "Thm3_Direct",
            TheoremId::Thm3Inverse => "Thm3_Inverse",
            TheoremId::Lemma2_1a => "Lemma2_1a",
            TheoremId::Lemma2_1b => "Lemma2_1b",
            TheoremId::Lemma2_2a => "Lemma2_2a",
            TheoremId::Lemma2_2b => "Lemma2_2b",
            TheoremId::Lemma2_3 => "Lemma2_3",
            TheoremId::Lemma2_4 => "Lemma2_4",
        }
    }

    /// Spelling used on the command line, e.g. `thm3-direct`, `lemma2.3`.
    pub fn cli_name(self) -> &'static str {
        match self {
            TheoremId::Bs12Direct => "bs12-direct",
            TheoremId::Bs12Inverse => "bs12-inverse",
            TheoremId::Thm1_3 => "thm1.3",
            TheoremId::Lss1 => "lss1",
            TheoremId::Lss2 => "lss2",
            TheoremId::Thm1_5 => "thm1.5",
            TheoremId::Cor1_6 => "cor1.6",
            TheoremId::Thm3Direct => "thm3-direct",
            TheoremId::Thm3Inverse => "thm3-inverse",
            TheoremId::Lemma2_1a => "lemma2.1a",
            TheoremId::Lemma2_1b => "lemma2.1b",
            TheoremId::Lemma2_2a => "lemma2.2a",
            TheoremId::Lemma2_2b => "lemma2.2b",
            TheoremId::Lemma2_3 => "lemma2.3",
            TheoremId::Lemma2_4 => "lemma2.4",
        }
    }

    /// Lower-bound statements, as opposed to inverse or structural ones.
    pub fn is_direct(self) -> bool {
        !matches!(
            self,
            TheoremId::Bs12Inverse
                | TheoremId::Thm1_3
                | TheoremId::Thm3Inverse
                | TheoremId::Lemma2_1a
        )
    }

    pub fn is_lemma(self) -> bool {
        TheoremId::LEMMAS.contains(&self)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    /// Accepts the canonical names and the command-line spellings, ignoring
    /// case and the separators `_`, `-`, `.`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | '.' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        let key = key
            .strip_prefix("theorem")
            .map_or(key.clone(), |k| format!("thm{k}"));
        TheoremId::ALL
            .into_iter()
            .find(|id| {
                let canon: String = id
                    .name()
                    .chars()
                    .filter(|c| *c != '_')
                    .flat_map(char::to_lowercase)
                    .collect();
                let cli: String = id
                    .cli_name()
                    .chars()
                    .filter(|c| !matches!(c, '-' | '.'))
                    .collect();
                key == canon || key == cli
            })
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

/// Arithmetic-progression containment part of an inverse statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCheck {
    #[serde(with = "crate::serde_int")]
    pub min_ap_size: BigInt,
    /// `k + h`, the claimed progression size.
    #[serde(with = "crate::serde_int")]
    pub ap_bound: BigInt,
    /// Upper estimate the claimed size is stated to satisfy (strict or not,
    /// per `size_clause_strict`).
    #[serde(with = "crate::serde_int::ratio::option")]
    pub size_clause: Option<BigRational>,
    pub size_clause_strict: bool,
    pub size_clause_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    #[serde(rename = "theorem_id")]
    pub theorem: TheoremId,
    pub hypotheses_met: bool,
    pub reason: String,
    /// `|S²|`, `|A + r·A|` or `|A + B|`.
    pub lhs: u64,
    /// Lower bound for direct statements; hypothesis threshold on `lhs` for
    /// inverse statements. `None` for purely structural checks.
    #[serde(with = "crate::serde_int::ratio::option")]
    pub bound: Option<BigRational>,
    #[serde(rename = "slack_h")]
    pub h: Option<i64>,
    pub holds: Option<bool>,
    pub boundary: bool,
    pub ap: Option<ApCheck>,
    pub input: String,
}

impl BoundVerdict {
    pub(crate) fn unmet(
        theorem: TheoremId,
        reason: impl Into<String>,
        lhs: u64,
        input: String,
    ) -> Self {
        BoundVerdict {
            theorem,
            hypotheses_met: false,
            reason: reason.into(),
            lhs,
            bound: None,
            h: None,
            holds: None,
            boundary: false,
            ap: None,
            input,
        }
    }

    fn direct(
        theorem: TheoremId,
        reason: String,
        lhs: u64,
        bound: BigRational,
        input: String,
    ) -> Self {
        let l = int(lhs);
        BoundVerdict {
            theorem,
            hypotheses_met: true,
            reason,
            lhs,
            holds: Some(l >= bound),
            boundary: l == bound,
            bound: Some(bound),
            h: None,
            ap: None,
            input,
        }
    }

    /// Hypotheses met but the conclusion failed.
    pub fn is_violation(&self) -> bool {
        self.hypotheses_met && self.holds == Some(false)
    }

    /// `lhs - bound` when a bound is present.
    pub fn slack(&self) -> Option<BigRational> {
        self.bound.as_ref().map(|b| int(self.lhs) - b)
    }

    /// The progression-size estimate failed although containment held.
    pub fn is_size_anomaly(&self) -> bool {
        self.hypotheses_met
            && self
                .ap
                .as_ref()
                .is_some_and(|ap| ap.size_clause_ok == Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: ", self.theorem, self.input)?;
        if !self.hypotheses_met {
            return write!(f, "hypotheses not met ({}); lhs {}", self.reason, self.lhs);
        }
        write!(f, "lhs {}", self.lhs)?;
        if let Some(b) = &self.bound {
            write!(f, " bound {b}")?;
        }
        if let Some(h) = self.h {
            write!(f, " h {h}")?;
        }
        if let Some(ap) = &self.ap {
            write!(f, " min_ap {} ≤? {}", ap.min_ap_size, ap.ap_bound)?;
        }
        match self.holds {
            Some(true) => f.write_str(" holds")?,
            Some(false) => f.write_str(" VIOLATED")?,
            None => {}
        }
        if self.boundary {
            f.write_str(" boundary")?;
        }
        if self.is_size_anomaly() {
            f.write_str(" size-anomaly")?;
        }
        Ok(())
    }
}

/// Header plus one record per verdict.
pub fn verdicts_to_csv(verdicts: &[BoundVerdict]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "theorem",
        "hypotheses_met",
        "lhs",
        "bound",
        "h",
        "holds",
        "boundary",
        "min_ap_size",
        "ap_bound",
        "input",
        "reason",
    ])
    .expect("in-memory write");
    let opt = |o: Option<String>| o.unwrap_or_default();
    for v in verdicts {
        w.write_record([
            v.theorem.to_string(),
            v.hypotheses_met.to_string(),
            v.lhs.to_string(),
            opt(v.bound.as_ref().map(|b| b.to_string())),
            opt(v.h.map(|h| h.to_string())),
            opt(v.holds.map(|h| h.to_string())),
            v.boundary.to_string(),
            opt(v.ap.as_ref().map(|a| a.min_ap_size.to_string())),
            opt(v.ap.as_ref().map(|a| a.ap_bound.to_string())),
            v.input.clone(),
            v.reason.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn count(set: &IntSet) -> u64 {
    set.len() as u64
}

fn lhs_of_square(s: &MonoidSet) -> u64 {
    s.square().len() as u64
}

fn three() -> GroupParams {
    GroupParams::new(3).expect("n = 3")
}

/// `7k/2 - 6`.
pub fn seven_halves_bound(k: usize) -> BigRational {
    frac(7 * k as i64, 2) - int(6)
}

/// `max(4k - 4, 1)`.
pub fn four_k_bound(k: usize) -> BigRational {
    int((4 * k as i64 - 4).max(1))
}

// ---------------------------------------------------------------------------
// sums of dilates of a single set
// ---------------------------------------------------------------------------

/// `|A + r·A| ≥ max(4k - 4, 1)` for `r ≥ 3`.
pub fn verify_cor1(a: &IntSet, r: i64) -> Result<BoundVerdict> {
    let lhs = count(&intset::dilate_sum(1, a, r, a)?);
    Ok(cor1_verdict(a, r, lhs))
}

pub fn cor1_verdict(a: &IntSet, r: i64, lhs: u64) -> BoundVerdict {
    let input = format!("r={r} A={a}");
    if r < 3 {
        return BoundVerdict::unmet(TheoremId::Cor1_6, format!("r = {r} < 3"), lhs, input);
    }
    BoundVerdict::direct(
        TheoremId::Cor1_6,
        format!("k = {}, r = {r}", a.len()),
        lhs,
        four_k_bound(a.len()),
        input,
    )
}

/// `|A + 3·A| ≥ 4k - 4`, with equality exactly on the classified extremal sets.
pub fn verify_thm1_5(a: &IntSet) -> Result<BoundVerdict> {
    let lhs = count(&intset::dilate_sum(1, a, 3, a)?);
    thm1_5_verdict(a, lhs)
}

pub fn thm1_5_verdict(a: &IntSet, lhs: u64) -> Result<BoundVerdict> {
    let k = a.len();
    let mut v = BoundVerdict::direct(
        TheoremId::Thm1_5,
        format!("k = {k}"),
        lhs,
        four_k_bound(k),
        format!("A={a}"),
    );
    if k >= 3 {
        let class = structure::classify_extremal(a)?;
        let classified = class.tag != structure::ExtremalTag::NotExtremal;
        v.reason = format!("k = {k}, class {}", class.tag);
        if v.boundary != classified {
            v.holds = Some(false);
            v.reason.push_str(if v.boundary {
                "; equality attained by an unclassified set"
            } else {
                "; classified set misses equality"
            });
        }
    }
    Ok(v)
}

/// Inverse statement for `A + 3·A` parameterised by `t = c_3(A)`.
pub fn verify_thm1(a: &IntSet) -> Result<BoundVerdict> {
    check_thm1_domain(a)?;
    let lhs = count(&intset::dilate_sum(1, a, 3, a)?);
    thm1_verdict(a, lhs)
}

fn check_thm1_domain(a: &IntSet) -> Result<()> {
    if a.len() < 2 {
        return Err(Error::domain(format!("needs |A| >= 2, got {}", a.len())));
    }
    if !a.contains(&BigInt::zero()) {
        return Err(Error::domain("needs 0 ∈ A"));
    }
    Ok(())
}

pub fn thm1_verdict(a: &IntSet, lhs: u64) -> Result<BoundVerdict> {
    check_thm1_domain(a)?;
    let k = a.len() as i64;
    let t = structure::residue_classes(a, 3)? as i64;
    let h = lhs as i64 - ((t + 1) * k - t);
    let threshold = (t + 2) * k - 2 * t;
    let input = format!("A={a}");
    let met = lhs as i64 <= threshold;
    let min_ap = structure::min_ap_size(a)?;
    let ap_bound = BigInt::from(k + h);
    let clause = int(2 * k - 3);
    let ap = ApCheck {
        size_clause_ok: met.then(|| int(ap_bound.clone()) <= clause),
        min_ap_size: min_ap.clone(),
        ap_bound: ap_bound.clone(),
        size_clause: Some(clause),
        size_clause_strict: false,
    };
    Ok(BoundVerdict {
        theorem: TheoremId::Thm1_3,
        hypotheses_met: met,
        reason: format!(
            "t = c_3(A) = {t}, |A+3A| = {lhs} {} (t+2)k-2t = {threshold}",
            if met { "<=" } else { ">" }
        ),
        lhs,
        bound: Some(int(threshold)),
        h: Some(h),
        holds: met.then(|| min_ap <= ap_bound),
        boundary: lhs as i64 == threshold,
        ap: Some(ap),
        input,
    })
}

/// `S = b·a^A` in BS⁺(1,2): `|A + 2·A| ≥ 3k - 2`, plus the inverse part below
/// `7k/2 - 4`. Returns `(direct, inverse)`.
pub fn verify_bs12(a: &IntSet) -> Result<(BoundVerdict, BoundVerdict)> {
    let lhs = count(&intset::dilate_sum(1, a, 2, a)?);
    Ok(bs12_verdicts(a, lhs))
}

pub fn bs12_verdicts(a: &IntSet, lhs: u64) -> (BoundVerdict, BoundVerdict) {
    let k = a.len() as i64;
    let input = format!("A={a}");
    let direct_bound = int(3 * k - 2);
    let h = lhs as i64 - (3 * k - 2);
    let mut direct = BoundVerdict::direct(
        TheoremId::Bs12Direct,
        format!("k = {k}"),
        lhs,
        direct_bound,
        input.clone(),
    );
    direct.h = Some(h);

    let threshold = frac(7 * k, 2) - int(4);
    let met = int(lhs) < threshold;
    let min_ap = structure::min_ap_size(a).expect("non-empty");
    let ap_bound = BigInt::from(k + h);
    let clause = frac(3 * k, 2) - int(2);
    let clause_ok = int(ap_bound.clone()) < clause;
    let inverse = BoundVerdict {
        theorem: TheoremId::Bs12Inverse,
        hypotheses_met: met,
        reason: format!(
            "|A+2A| = {lhs} {} 7k/2-4 = {threshold}",
            if met { "<" } else { ">=" }
        ),
        lhs,
        boundary: int(lhs) == threshold,
        bound: Some(threshold),
        h: Some(h),
        holds: met.then(|| min_ap <= ap_bound && clause_ok),
        ap: Some(ApCheck {
            min_ap_size: min_ap,
            ap_bound,
            size_clause: Some(clause),
            size_clause_strict: true,
            size_clause_ok: met.then_some(clause_ok),
        }),
        input,
    };
    (direct, inverse)
}

// ---------------------------------------------------------------------------
// sumsets of two sets
// ---------------------------------------------------------------------------

/// `δ_{A,B} = 1` iff `ℓ(A) = ℓ(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaAB {
    pub value: u8,
}

pub fn delta(a: &IntSet, b: &IntSet) -> Result<DeltaAB> {
    let same = structure::length(a)? == structure::length(b)?;
    Ok(DeltaAB {
        value: u8::from(same),
    })
}

/// Both branches of the two-set length bound; always `[LSS_1, LSS_2]`.
pub fn verify_lss(a: &IntSet, b: &IntSet) -> Result<[BoundVerdict; 2]> {
    let lhs = count(&intset::sumset(a, b)?);
    lss_verdicts(a, b, lhs)
}

pub fn lss_verdicts(a: &IntSet, b: &IntSet, lhs: u64) -> Result<[BoundVerdict; 2]> {
    let input = format!("A={a} B={b}");
    let zero = BigInt::zero();
    let in_naturals = |s: &IntSet| s.min().is_some_and(|m| !m.is_negative());
    if !(a.contains(&zero) && b.contains(&zero)) || !in_naturals(a) || !in_naturals(b) {
        let why = "needs A, B ⊆ ℕ with 0 ∈ A ∩ B";
        return Ok([
            BoundVerdict::unmet(TheoremId::Lss1, why, lhs, input.clone()),
            BoundVerdict::unmet(TheoremId::Lss2, why, lhs, input),
        ]);
    }
    let la = structure::length(a)?;
    let lb = structure::length(b)?;
    let d = delta(a, b)?.value as i64;
    let (ka, kb) = (a.len() as i64, b.len() as i64);
    let longest = (&la).max(&lb).clone();
    let da = structure::gcd_diffs(a)?;

    let b1_needed = BigInt::from(ka + kb - 1 - d);
    let branch1 = la == longest && longest >= b1_needed && da == BigInt::from(1);
    let first = if branch1 {
        BoundVerdict::direct(
            TheoremId::Lss1,
            format!("δ = {d}, ℓ(A) = {la} >= {b1_needed}, d(A) = 1"),
            lhs,
            int(ka + 2 * kb - 2 - d),
            input.clone(),
        )
    } else {
        BoundVerdict::unmet(
            TheoremId::Lss1,
            format!("δ = {d}: needs ℓ(A) = max ≥ {b1_needed} and d(A) = 1 (ℓ(A) = {la}, ℓ(B) = {lb}, d(A) = {da})"),
            lhs,
            input.clone(),
        )
    };

    let b2_allowed = BigInt::from(ka + kb - 2 - d);
    let second = if longest <= b2_allowed {
        let bound = (&la + kb).max(&lb + ka);
        BoundVerdict::direct(
            TheoremId::Lss2,
            format!("δ = {d}, max(ℓ(A), ℓ(B)) = {longest} <= {b2_allowed}"),
            lhs,
            int(bound),
            input,
        )
    } else {
        BoundVerdict::unmet(
            TheoremId::Lss2,
            format!("δ = {d}: max(ℓ(A), ℓ(B)) = {longest} > {b2_allowed}"),
            lhs,
            input,
        )
    };
    Ok([first, second])
}

// ---------------------------------------------------------------------------
// subsets of BS⁺(1,3)
// ---------------------------------------------------------------------------

pub fn verify_thm3_direct(s: &MonoidSet) -> BoundVerdict {
    thm3_direct_verdict(s, lhs_of_square(s))
}

pub fn thm3_direct_verdict(s: &MonoidSet, lhs: u64) -> BoundVerdict {
    let input = format!("n={} S={s}", s.params().base());
    let k = s.len();
    if s.params().base() != 3 {
        return BoundVerdict::unmet(TheoremId::Thm3Direct, "needs n = 3", lhs, input);
    }
    if k < 3 {
        return BoundVerdict::unmet(TheoremId::Thm3Direct, format!("k = {k} < 3"), lhs, input);
    }
    if s.slice_count() < 2 {
        return BoundVerdict::unmet(TheoremId::Thm3Direct, "single coset (t = 0)", lhs, input);
    }
    if !s.is_nonabelian() {
        return BoundVerdict::unmet(
            TheoremId::Thm3Direct,
            "S generates an abelian group",
            lhs,
            input,
        );
    }
    BoundVerdict::direct(
        TheoremId::Thm3Direct,
        format!("k = {k}, t + 1 = {} cosets", s.slice_count()),
        lhs,
        seven_halves_bound(k),
        input,
    )
}

/// Single-coset inverse statement. Multi-slice input is a domain error.
pub fn verify_thm3_inverse(s: &MonoidSet) -> Result<BoundVerdict> {
    if s.as_single_slice().is_none() {
        return Err(Error::domain(format!(
            "thm3-inverse needs a single coset, got {}",
            s.slice_count()
        )));
    }
    thm3_inverse_verdict(s, lhs_of_square(s))
}

pub fn thm3_inverse_verdict(s: &MonoidSet, lhs: u64) -> Result<BoundVerdict> {
    let Some((r, a)) = s.as_single_slice() else {
        return Err(Error::domain("thm3-inverse needs a single coset"));
    };
    let input = format!("n={} S={s}", s.params().base());
    let id = TheoremId::Thm3Inverse;
    let k = a.len() as i64;
    if s.params().base() != 3 {
        return Ok(BoundVerdict::unmet(id, "needs n = 3", lhs, input));
    }
    if !a.contains(&BigInt::zero()) {
        return Ok(BoundVerdict::unmet(id, "needs 0 ∈ A", lhs, input));
    }
    if k < 3 {
        return Ok(BoundVerdict::unmet(id, format!("k = {k} < 3"), lhs, input));
    }
    if r == 0 {
        return Ok(BoundVerdict::unmet(id, "S ⊆ ⟨a⟩ is abelian", lhs, input));
    }
    let t = structure::residue_classes(a, 3)? as i64;
    let h = lhs as i64 - ((t + 2) * k - 2 * t);
    let threshold = seven_halves_bound(k as usize);
    let met = int(lhs) < threshold;
    let min_ap = structure::min_ap_size(a)?;
    let ap_bound = BigInt::from(k + h);
    let clause = frac(5 * k, 2) - int(t * (k - 2)) - int(6);
    let clause_ok = int(ap_bound.clone()) < clause;
    Ok(BoundVerdict {
        theorem: id,
        hypotheses_met: met,
        reason: format!(
            "t = c_3(A) = {t}, |S²| = {lhs} {} 7k/2-6 = {threshold}",
            if met { "<" } else { ">=" }
        ),
        lhs,
        boundary: int(lhs) == threshold,
        bound: Some(threshold),
        h: Some(h),
        holds: met.then(|| min_ap <= ap_bound && clause_ok),
        ap: Some(ApCheck {
            min_ap_size: min_ap,
            ap_bound,
            size_clause: Some(clause),
            size_clause_strict: true,
            size_clause_ok: met.then_some(clause_ok),
        }),
        input,
    })
}

fn tail_is_abelian(s: &MonoidSet) -> bool {
    let elems: Vec<_> = s.elements().skip(1).collect();
    if elems.len() < 2 {
        return true;
    }
    MonoidSet::from_elements(elems, s.params().with_max_b(u32::MAX))
        .map(|t| !t.is_nonabelian())
        .unwrap_or(true)
}

/// Lemmas whose hypotheses `S` satisfies, read off the coset profile and the
/// commutation structure.
pub fn lemma_match(s: &MonoidSet) -> Vec<TheoremId> {
    let prof = s.coset_profile();
    let sizes = &prof.sizes;
    let k = s.len();
    let slices = prof.cosets;
    let mut out = Vec::new();
    if slices >= 2 && sizes.iter().any(|&kj| kj >= 2) {
        out.push(TheoremId::Lemma2_1a);
    }
    if slices == 2 && k >= 4 {
        out.push(TheoremId::Lemma2_1b);
    }
    if slices >= 3 && sizes[0] >= 2 && sizes[1..].iter().all(|&ki| ki == 1) {
        out.push(TheoremId::Lemma2_2a);
    }
    if slices >= 3 && sizes[slices - 1] >= 2 && sizes[..slices - 1].iter().all(|&ki| ki == 1) {
        out.push(TheoremId::Lemma2_2b);
    }
    if k >= 2 && sizes.iter().all(|&ki| ki == 1) && s.is_nonabelian() {
        if tail_is_abelian(s) {
            out.push(TheoremId::Lemma2_3);
        }
        if prof.exponents[0] >= 1 {
            out.push(TheoremId::Lemma2_4);
        }
    }
    out
}

pub fn verify_lemma(s: &MonoidSet, id: TheoremId) -> BoundVerdict {
    lemma_verdict(s, id, lhs_of_square(s), &lemma_match(s))
}

/// `matched` must be `lemma_match(s)`.
pub fn lemma_verdict(
    s: &MonoidSet,
    id: TheoremId,
    lhs: u64,
    matched: &[TheoremId],
) -> BoundVerdict {
    let input = format!("n={} S={s}", s.params().base());
    if !id.is_lemma() {
        return BoundVerdict::unmet(id, format!("{id} is not a lemma"), lhs, input);
    }
    if s.params().base() != 3 {
        return BoundVerdict::unmet(id, "needs n = 3", lhs, input);
    }
    if !matched.contains(&id) {
        return BoundVerdict::unmet(id, "coset profile does not match", lhs, input);
    }
    let k = s.len();
    let reason = format!("k = {k}, sizes {:?}", s.coset_profile().sizes);
    match id {
        TheoremId::Lemma2_1a => {
            let nonab = s.is_nonabelian();
            BoundVerdict {
                theorem: id,
                hypotheses_met: true,
                reason,
                lhs,
                bound: None,
                h: None,
                holds: Some(nonab),
                boundary: false,
                ap: None,
                input,
            }
        }
        TheoremId::Lemma2_1b | TheoremId::Lemma2_2a | TheoremId::Lemma2_2b => {
            BoundVerdict::direct(id, reason, lhs, seven_halves_bound(k), input)
        }
        TheoremId::Lemma2_3 | TheoremId::Lemma2_4 => {
            BoundVerdict::direct(id, reason, lhs, int(4 * k as i64 - 4), input)
        }
        _ => unreachable!("is_lemma checked"),
    }
}

/// Single-coset squares are sums of dilates; exposed for callers holding only `A`.
pub fn single_coset(a: &IntSet, r: u32) -> Result<MonoidSet> {
    MonoidSet::single_slice(three(), r, a.clone())
}

/// Smallest `lhs - bound` among verdicts whose hypotheses were met.
pub fn min_slack<'a, I: IntoIterator<Item = &'a BoundVerdict>>(verdicts: I) -> Option<BigRational> {
    verdicts
        .into_iter()
        .filter(|v| v.hypotheses_met)
        .filter_map(BoundVerdict::slack)
        .min()
}

/// Integer part of a rational, for display.
pub fn floor_i64(r: &BigRational) -> Option<i64> {
    r.floor().to_integer().to_i64()
}
