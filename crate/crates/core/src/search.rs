//! Exhaustive and randomized scans.
//!
//! Exhaustive scans enumerate integer sets inside `[value_min, window]` as
//! `u64` masks (so the value range holds at most 64 integers), evaluate the
//! cardinality on a bit-vector kernel when the output fits the configured
//! bit-window, and feed the count to the verifiers in [`crate::theorems`].
//! Every `sample_every`-th instance of a shard is recomputed on the
//! arbitrary-precision path and any disagreement is reported as a mismatch.
//!
//! Work is split into shards by enumeration prefix, shards run on rayon, and
//! their accumulators are merged in prefix order, so a report does not depend
//! on the thread count. Randomized hunts draw instance `i` from its own ChaCha
//! stream `(seed, i)` for the same reason.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::{GroupParams, MonoidElement};
use crate::error::{Error, Result};
use crate::intset::bitset::BitSet;
use crate::intset::{self, IntSet};
use crate::monoid_set::MonoidSet;
use crate::structure;
use crate::theorems::{self, BoundVerdict, TheoremId};

const HUNT_SHARD: u64 = 1024;
/// Instances per list in the human-readable report.
const SHOWN: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constraints {
    /// `0 ∈ A` (integer-set scans).
    pub require_zero: bool,
    /// `d(A) = 1` (integer-set scans; excludes singletons).
    pub require_d1: bool,
    /// Emit only `A = canonical_form(A)`.
    pub canonical_dedup: bool,
    /// Skip monoid sets generating an abelian group.
    pub require_nonabelian: bool,
    /// Monoid sets with every coset of size one.
    pub singleton_slices: bool,
}

/// Search space. Integer values range over `[value_min, window]`; monoid sets
/// use b-exponents `0..=max_b_exponent` and slice supports in that range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpec {
    pub n: u32,
    pub value_min: i64,
    pub window: i64,
    pub k_range: (usize, usize),
    pub max_b_exponent: u32,
    /// Upper limit on the number of non-empty cosets; absent means unlimited.
    pub max_slices: Option<usize>,
    pub constraints: Constraints,
    /// Dilation factors `r` for `A + r·A` scans; empty means `[n]`.
    pub dilations: Vec<i64>,
    pub seed: u64,
    /// Largest output width, in bits, handled by the bit-vector kernel.
    pub bit_window: usize,
    /// Cross-check one instance in this many per shard; 0 disables.
    pub sample_every: u64,
    /// Longest instance list kept in a report; counts stay exact.
    pub list_limit: usize,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            n: 3,
            value_min: 0,
            window: 12,
            k_range: (3, 5),
            max_b_exponent: 2,
            max_slices: None,
            constraints: Constraints::default(),
            dilations: Vec::new(),
            seed: 0,
            bit_window: 4096,
            sample_every: 100,
            list_limit: 1000,
        }
    }
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        let (k_min, k_max) = self.k_range;
        if self.n < 2 {
            return Err(Error::Config(format!("n must be >= 2, got {}", self.n)));
        }
        if k_min == 0 || k_min > k_max {
            return Err(Error::Config(format!("bad k_range {k_min}..{k_max}")));
        }
        if self.window < self.value_min {
            return Err(Error::Config(format!(
                "window {} below value_min {}",
                self.window, self.value_min
            )));
        }
        if self.bit_window < 64 {
            return Err(Error::Config("bit_window must be at least 64".into()));
        }
        if let Some(r) = self.dilations.iter().find(|&&r| r < 1) {
            return Err(Error::Config(format!(
                "dilation factors must be >= 1, got {r}"
            )));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SearchSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: SearchSpec =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a `.toml` or `.json` file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_toml_str(&text),
            Some("json") => Self::from_json_str(&text),
            _ => Err(Error::Config(format!(
                "{}: expected a .toml or .json file",
                path.display()
            ))),
        }
    }

    fn params(&self) -> Result<GroupParams> {
        Ok(GroupParams::new(self.n)?.with_max_b(self.max_b_exponent))
    }

    /// Number of integers in `[value_min, window]`, which must fit a mask.
    fn span(&self) -> Result<u32> {
        let span = (self.window as i128) - (self.value_min as i128) + 1;
        if span > 64 {
            return Err(Error::Capacity(format!(
                "value range [{}, {}] holds {span} integers; exhaustive enumeration supports at most 64",
                self.value_min, self.window
            )));
        }
        Ok(span as u32)
    }

    fn dilation_list(&self) -> Vec<i64> {
        if self.dilations.is_empty() {
            vec![self.n as i64]
        } else {
            self.dilations.clone()
        }
    }
}

/// One scanned input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instance {
    Set(IntSet),
    Dilate { r: i64, a: IntSet },
    Pair { a: IntSet, b: IntSet },
    Monoid(MonoidSet),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Set(a) => write!(f, "A={a}"),
            Instance::Dilate { r, a } => write!(f, "r={r} A={a}"),
            Instance::Pair { a, b } => write!(f, "A={a} B={b}"),
            Instance::Monoid(s) => write!(f, "S={s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    /// `scan`, `equality` or `hunt`.
    pub mode: String,
    pub theorem: Option<TheoremId>,
    pub spec: SearchSpec,
    pub budget: Option<u64>,
    pub symmetry_reduction: String,
    pub kernel: String,
    pub instances_scanned: u64,
    pub hypotheses_met: u64,
    pub violation_count: u64,
    pub violations: Vec<BoundVerdict>,
    pub boundary_count: u64,
    pub boundary_cases: Vec<Instance>,
    pub equality_count: u64,
    pub equality_cases: Vec<Instance>,
    pub mismatches: Vec<String>,
    pub anomaly_count: u64,
    pub anomalies: Vec<BoundVerdict>,
    #[serde(with = "crate::serde_int::ratio::option")]
    pub min_slack: Option<BigRational>,
    pub cross_checks: u64,
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl ScanReport {
    /// No violation and no kernel or classification mismatch.
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0 && self.mismatches.is_empty()
    }

    /// Equality ignoring `wall_time_ms`.
    pub fn same_outcome(&self, other: &ScanReport) -> bool {
        let mut a = self.clone();
        a.wall_time_ms = other.wall_time_ms;
        a == *other
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Header and one summary record.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "mode",
            "theorem",
            "instances_scanned",
            "hypotheses_met",
            "violations",
            "boundary_cases",
            "equality_cases",
            "mismatches",
            "anomalies",
            "min_slack",
            "cross_checks",
            "kernel",
            "symmetry_reduction",
            "wall_time_ms",
        ])
        .expect("in-memory write");
        w.write_record([
            self.mode.clone(),
            self.theorem.map(|t| t.to_string()).unwrap_or_default(),
            self.instances_scanned.to_string(),
            self.hypotheses_met.to_string(),
            self.violation_count.to_string(),
            self.boundary_count.to_string(),
            self.equality_count.to_string(),
            self.mismatches.len().to_string(),
            self.anomaly_count.to_string(),
            self.min_slack
                .as_ref()
                .map(|s| s.to_string())
                .unwrap_or_default(),
            self.cross_checks.to_string(),
            self.kernel.clone(),
            self.symmetry_reduction.clone(),
            self.wall_time_ms.to_string(),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.theorem.map_or("-".to_string(), |t| t.to_string());
        writeln!(
            f,
            "{} {name}: {} instances, {} hypotheses met, {} violations, {} boundary, {} equality, {} mismatches, {} anomalies",
            self.mode,
            self.instances_scanned,
            self.hypotheses_met,
            self.violation_count,
            self.boundary_count,
            self.equality_count,
            self.mismatches.len(),
            self.anomaly_count,
        )?;
        if let Some(s) = &self.min_slack {
            writeln!(f, "min slack {s}")?;
        }
        writeln!(
            f,
            "kernel {}; symmetry reduction: {}; {} cross-checks; {} ms",
            self.kernel, self.symmetry_reduction, self.cross_checks, self.wall_time_ms
        )?;
        let list = |f: &mut fmt::Formatter<'_>, title: &str, items: &[Instance], total: u64| {
            if items.is_empty() {
                return Ok(());
            }
            writeln!(f, "{title} ({total}):")?;
            for it in items.iter().take(SHOWN) {
                writeln!(f, "  {it}")?;
            }
            let shown = items.len().min(SHOWN) as u64;
            if shown < total {
                writeln!(f, "  ... {} more", total - shown)?;
            }
            Ok(())
        };
        list(
            f,
            "equality cases",
            &self.equality_cases,
            self.equality_count,
        )?;
        if self.boundary_cases != self.equality_cases {
            list(
                f,
                "boundary cases",
                &self.boundary_cases,
                self.boundary_count,
            )?;
        }
        for (title, vs, total) in [
            ("violations", &self.violations, self.violation_count),
            ("anomalies", &self.anomalies, self.anomaly_count),
        ] {
            if !vs.is_empty() {
                writeln!(f, "{title} ({total}):")?;
                for v in vs.iter().take(SHOWN) {
                    writeln!(f, "  {v}")?;
                }
                let shown = vs.len().min(SHOWN) as u64;
                if shown < total {
                    writeln!(f, "  ... {} more", total - shown)?;
                }
            }
        }
        for m in &self.mismatches {
            writeln!(f, "mismatch: {m}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// accumulation
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
struct Acc {
    limit: usize,
    instances: u64,
    hypotheses: u64,
    violations: Vec<BoundVerdict>,
    violation_count: u64,
    boundary: Vec<Instance>,
    boundary_count: u64,
    equality: Vec<Instance>,
    equality_count: u64,
    mismatches: Vec<String>,
    anomalies: Vec<BoundVerdict>,
    anomaly_count: u64,
    min_slack: Option<BigRational>,
    cross_checks: u64,
}

fn push_capped<T>(list: &mut Vec<T>, limit: usize, item: impl FnOnce() -> T) {
    if list.len() < limit {
        list.push(item());
    }
}

impl Acc {
    fn new(limit: usize) -> Self {
        Acc {
            limit,
            ..Acc::default()
        }
    }

    fn record(&mut self, v: BoundVerdict, inst: impl Fn() -> Instance) {
        self.instances += 1;
        if v.boundary {
            self.boundary_count += 1;
            push_capped(&mut self.boundary, self.limit, &inst);
        }
        if !v.hypotheses_met {
            return;
        }
        self.hypotheses += 1;
        if v.boundary {
            self.equality_count += 1;
            push_capped(&mut self.equality, self.limit, &inst);
        }
        if v.theorem.is_direct() {
            if let Some(s) = v.slack() {
                if self.min_slack.as_ref().is_none_or(|m| s < *m) {
                    self.min_slack = Some(s);
                }
            }
        }
        if v.is_size_anomaly() {
            self.anomaly_count += 1;
            push_capped(&mut self.anomalies, self.limit, || v.clone());
        }
        if v.is_violation() {
            self.violation_count += 1;
            push_capped(&mut self.violations, self.limit, || v);
        }
    }

    fn merge(&mut self, other: Acc) {
        fn extend<T>(dst: &mut Vec<T>, src: Vec<T>, limit: usize) {
            let room = limit.saturating_sub(dst.len());
            dst.extend(src.into_iter().take(room));
        }
        self.instances += other.instances;
        self.hypotheses += other.hypotheses;
        self.violation_count += other.violation_count;
        extend(&mut self.violations, other.violations, self.limit);
        self.boundary_count += other.boundary_count;
        extend(&mut self.boundary, other.boundary, self.limit);
        self.equality_count += other.equality_count;
        extend(&mut self.equality, other.equality, self.limit);
        self.mismatches.extend(other.mismatches);
        self.anomaly_count += other.anomaly_count;
        extend(&mut self.anomalies, other.anomalies, self.limit);
        self.cross_checks += other.cross_checks;
        if let Some(s) = other.min_slack {
            if self.min_slack.as_ref().is_none_or(|m| s < *m) {
                self.min_slack = Some(s);
            }
        }
    }

    /// Recompute `lhs` on the exact path and compare.
    fn cross_check(
        &mut self,
        fast: u64,
        exact: impl FnOnce() -> u64,
        what: impl FnOnce() -> String,
    ) {
        self.cross_checks += 1;
        let slow = exact();
        if slow != fast {
            self.mismatches.push(format!(
                "kernel disagreement on {}: bitset {fast}, exact {slow}",
                what()
            ));
        }
    }
}

fn run_shards<S, F>(shards: &[S], limit: usize, f: F) -> Acc
where
    S: Sync,
    F: Fn(&S, &mut Acc) + Sync,
{
    let parts: Vec<Acc> = shards
        .par_iter()
        .map(|s| {
            let mut acc = Acc::new(limit);
            f(s, &mut acc);
            acc
        })
        .collect();
    let mut total = Acc::new(limit);
    for p in parts {
        total.merge(p);
    }
    total
}

struct ReportMeta {
    mode: &'static str,
    theorem: Option<TheoremId>,
    budget: Option<u64>,
    symmetry_reduction: String,
    kernel: String,
    notes: Vec<String>,
}

fn finish(spec: &SearchSpec, meta: ReportMeta, acc: Acc, started: Instant) -> ScanReport {
    let mut notes = meta.notes;
    if acc.hypotheses == 0 && meta.theorem.is_some() {
        notes.push(format!(
            "hypothesis set is empty: none of the {} instances satisfies the hypotheses",
            acc.instances
        ));
    }
    ScanReport {
        mode: meta.mode.to_string(),
        theorem: meta.theorem,
        spec: spec.clone(),
        budget: meta.budget,
        symmetry_reduction: meta.symmetry_reduction,
        kernel: meta.kernel,
        instances_scanned: acc.instances,
        hypotheses_met: acc.hypotheses,
        violation_count: acc.violation_count,
        violations: acc.violations,
        boundary_count: acc.boundary_count,
        boundary_cases: acc.boundary,
        equality_count: acc.equality_count,
        equality_cases: acc.equality,
        mismatches: acc.mismatches,
        anomaly_count: acc.anomaly_count,
        anomalies: acc.anomalies,
        min_slack: acc.min_slack,
        cross_checks: acc.cross_checks,
        notes,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }
}

// ---------------------------------------------------------------------------
// bit-vector kernel
// ---------------------------------------------------------------------------

/// Evaluates `|r·A + B|` and blockwise products for sets given as masks over
/// `[lo, hi]`. Bit `i` of a mask is the value `lo + i`; bit `j` of an output
/// is the value `offset + j`.
#[derive(Debug, Clone)]
struct Kernel {
    lo: i64,
    offset: i64,
    width: usize,
    out: Vec<BitSet>,
}

impl Kernel {
    /// `None` when some `r·x + y` with `x, y ∈ [lo, hi]` falls outside `bit_window` bits.
    fn new(
        lo: i64,
        hi: i64,
        multipliers: &[BigInt],
        keys: usize,
        bit_window: usize,
    ) -> Option<Kernel> {
        let (lo_b, hi_b) = (BigInt::from(lo), BigInt::from(hi));
        let offset = multipliers.iter().map(|r| r * &lo_b + &lo_b).min()?;
        let top = multipliers.iter().map(|r| r * &hi_b + &hi_b).max()?;
        let width = (top - &offset + 1u32).to_usize()?;
        if width > bit_window {
            return None;
        }
        Some(Kernel {
            lo,
            offset: offset.to_i64()?,
            width,
            out: vec![BitSet::new(width); keys],
        })
    }

    fn bits(mask: u64) -> BitSet {
        let mut b = BitSet::new(64);
        for i in mask_bits(mask) {
            b.insert(i as usize).expect("mask bit inside 64");
        }
        b
    }

    fn clear(&mut self) {
        self.out.iter_mut().for_each(BitSet::clear);
    }

    /// `out[key] |= r·A + B`.
    fn add(&mut self, key: usize, r: i64, a: u64, b: u64) {
        let b_bits = Self::bits(b);
        for i in mask_bits(a) {
            let x = self.lo + i as i64;
            let shift = r * x + self.lo - self.offset;
            self.out[key]
                .or_shifted(&b_bits, shift as usize)
                .expect("kernel width covers every r·x + y");
        }
    }

    fn count(&self) -> u64 {
        self.out.iter().map(|b| b.count() as u64).sum()
    }

    fn dilate_sum(&mut self, r: i64, a: u64, b: u64) -> u64 {
        self.clear();
        self.add(0, r, a, b);
        self.count()
    }

    /// `|S²|` for `S = ⋃ b^m a^{A_m}` with `powers[m] = n^m`.
    fn square(&mut self, slices: &[(u32, u64)], powers: &[i64]) -> u64 {
        self.clear();
        for &(p, a) in slices {
            for &(q, b) in slices {
                self.add((p + q) as usize, powers[q as usize], a, b);
            }
        }
        self.count()
    }
}

fn mask_bits(mask: u64) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        Some(bit)
    })
}

fn mask_values(mask: u64, lo: i64) -> Vec<i64> {
    mask_bits(mask).map(|i| lo + i as i64).collect()
}

fn mask_set(mask: u64, lo: i64) -> IntSet {
    IntSet::new(mask_values(mask, lo))
}

fn gcd_of_diffs(v: &[i64]) -> i64 {
    v.iter().skip(1).fold(0i64, |g, x| g.gcd(&(x - v[0])))
}

/// `A = canonical_form(A)` for a sorted list.
fn is_canonical(v: &[i64]) -> bool {
    if v.len() == 1 {
        return v[0] == 0;
    }
    if v[0] != 0 || gcd_of_diffs(v) != 1 {
        return false;
    }
    let top = v[v.len() - 1];
    let mirrored = v.iter().rev().map(|x| top - x);
    v.iter().copied().cmp(mirrored) != std::cmp::Ordering::Greater
}

fn passes(v: &[i64], c: &Constraints) -> bool {
    (!c.require_zero || v.contains(&0))
        && (!c.require_d1 || (v.len() >= 2 && gcd_of_diffs(v) == 1))
        && (!c.canonical_dedup || is_canonical(v))
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

/// Masks of in-spec integer sets in lexicographic order of their elements.
fn set_masks(spec: &SearchSpec) -> Result<Vec<u64>> {
    spec.validate()?;
    let span = spec.span()?;
    let (k_min, k_max) = spec.k_range;
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn rec(
        start: u32,
        span: u32,
        mask: u64,
        stack: &mut Vec<u32>,
        k: (usize, usize),
        spec: &SearchSpec,
        out: &mut Vec<u64>,
    ) {
        for i in start..span {
            let m = mask | (1u64 << i);
            stack.push(i);
            if stack.len() >= k.0 {
                let v = mask_values(m, spec.value_min);
                if passes(&v, &spec.constraints) {
                    out.push(m);
                }
            }
            if stack.len() < k.1 {
                rec(i + 1, span, m, stack, k, spec, out);
            }
            stack.pop();
        }
    }
    rec(0, span, 0, &mut stack, (k_min, k_max), spec, &mut out);
    Ok(out)
}

/// Shards of consecutive masks sharing their two smallest elements.
fn prefix_shards(masks: &[u64]) -> Vec<&[u64]> {
    let prefix = |m: u64| {
        let first = m & m.wrapping_neg();
        let rest = m ^ first;
        (first, rest & rest.wrapping_neg())
    };
    masks.chunk_by(|a, b| prefix(*a) == prefix(*b)).collect()
}

/// Every `A ⊆ [value_min, window]` with `|A|` in `k_range` satisfying the
/// constraints, in lexicographic order.
pub fn enum_canonical_sets(spec: &SearchSpec) -> Result<Vec<IntSet>> {
    Ok(set_masks(spec)?
        .into_iter()
        .map(|m| mask_set(m, spec.value_min))
        .collect())
}

type RawMonoid = Vec<(u32, u64)>;

/// Coset decompositions `(m, A_m)` with non-empty masks and increasing `m`.
fn monoid_raws(spec: &SearchSpec) -> Result<Vec<RawMonoid>> {
    spec.validate()?;
    let span = spec.span()?;
    let (k_min, k_max) = spec.k_range;
    let per_slice = if spec.constraints.singleton_slices {
        1
    } else {
        k_max
    };
    let mut options: Vec<u64> = vec![0];
    let mut frontier: Vec<u64> = vec![0];
    for _ in 0..per_slice {
        let mut next = Vec::new();
        for &m in &frontier {
            let start = if m == 0 { 0 } else { 64 - m.leading_zeros() };
            for i in start..span {
                next.push(m | (1u64 << i));
            }
        }
        options.extend(&next);
        frontier = next;
    }
    options.sort_unstable();
    let max_slices = spec.max_slices.unwrap_or(usize::MAX);

    let mut out = Vec::new();
    let mut cur: RawMonoid = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        e: u32,
        top: u32,
        total: usize,
        options: &[u64],
        k: (usize, usize),
        max_slices: usize,
        cur: &mut RawMonoid,
        out: &mut Vec<RawMonoid>,
    ) {
        if e > top {
            if total >= k.0 && !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for &m in options {
            let c = m.count_ones() as usize;
            if total + c > k.1 || (c > 0 && cur.len() >= max_slices) {
                continue;
            }
            if c > 0 {
                cur.push((e, m));
            }
            rec(e + 1, top, total + c, options, k, max_slices, cur, out);
            if c > 0 {
                cur.pop();
            }
        }
    }
    rec(
        0,
        spec.max_b_exponent,
        0,
        &options,
        (k_min, k_max),
        max_slices,
        &mut cur,
        &mut out,
    );
    Ok(out)
}

fn monoid_from_raw(raw: &RawMonoid, lo: i64, params: GroupParams) -> MonoidSet {
    MonoidSet::from_slices(params, raw.iter().map(|&(m, mask)| (m, mask_set(mask, lo))))
        .expect("enumerated within the cap")
}

/// Every in-spec monoid set, in enumeration order.
pub fn enum_monoid_sets(spec: &SearchSpec) -> Result<Vec<MonoidSet>> {
    let params = spec.params()?;
    let raws = monoid_raws(spec)?;
    Ok(raws
        .iter()
        .map(|r| monoid_from_raw(r, spec.value_min, params))
        .filter(|s| !spec.constraints.require_nonabelian || s.is_nonabelian())
        .collect())
}

// ---------------------------------------------------------------------------
// scans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Sets,
    Pairs,
    Monoids,
}

fn family(id: TheoremId) -> Family {
    match id {
        TheoremId::Lss1 | TheoremId::Lss2 => Family::Pairs,
        TheoremId::Thm3Direct
        | TheoremId::Lemma2_1a
        | TheoremId::Lemma2_1b
        | TheoremId::Lemma2_2a
        | TheoremId::Lemma2_2b
        | TheoremId::Lemma2_3
        | TheoremId::Lemma2_4 => Family::Monoids,
        _ => Family::Sets,
    }
}

/// Multipliers `r` of the `A + r·A` instances a set-family scan evaluates,
/// paired with the b-exponent of the single coset where that applies.
fn set_multipliers(id: TheoremId, spec: &SearchSpec) -> Result<Vec<(i64, u32)>> {
    let need = |n: u32| -> Result<()> {
        if spec.n != n {
            return Err(Error::domain(format!(
                "{id} is a statement about n = {n}, got n = {}",
                spec.n
            )));
        }
        Ok(())
    };
    Ok(match id {
        TheoremId::Cor1_6 => spec.dilation_list().into_iter().map(|r| (r, 0)).collect(),
        TheoremId::Thm1_3 | TheoremId::Thm1_5 => {
            need(3)?;
            vec![(3, 0)]
        }
        TheoremId::Bs12Direct | TheoremId::Bs12Inverse => {
            need(2)?;
            vec![(2, 0)]
        }
        TheoremId::Thm3Inverse => (1..=spec.max_b_exponent.max(1))
            .map(|m| {
                BigInt::from(spec.n)
                    .pow(m)
                    .to_i64()
                    .map(|r| (r, m))
                    .ok_or_else(|| Error::Capacity(format!("n^{m} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?,
        _ => unreachable!("set family"),
    })
}

fn set_verdict(
    id: TheoremId,
    a: &IntSet,
    r: i64,
    m: u32,
    lhs: u64,
    spec: &SearchSpec,
) -> BoundVerdict {
    let unmet = |e: Error| BoundVerdict::unmet(id, e.to_string(), lhs, format!("A={a}"));
    match id {
        TheoremId::Cor1_6 => theorems::cor1_verdict(a, r, lhs),
        TheoremId::Thm1_5 => theorems::thm1_5_verdict(a, lhs).unwrap_or_else(unmet),
        TheoremId::Thm1_3 => theorems::thm1_verdict(a, lhs).unwrap_or_else(unmet),
        TheoremId::Bs12Direct => theorems::bs12_verdicts(a, lhs).0,
        TheoremId::Bs12Inverse => theorems::bs12_verdicts(a, lhs).1,
        TheoremId::Thm3Inverse => {
            let params = GroupParams::new(spec.n).expect("validated").with_max_b(m);
            let s = MonoidSet::single_slice(params, m, a.clone()).expect("non-empty");
            theorems::thm3_inverse_verdict(&s, lhs).unwrap_or_else(unmet)
        }
        _ => unreachable!("set family"),
    }
}

fn monoid_verdict(id: TheoremId, s: &MonoidSet, lhs: u64) -> BoundVerdict {
    if id == TheoremId::Thm3Direct {
        theorems::thm3_direct_verdict(s, lhs)
    } else {
        theorems::lemma_verdict(s, id, lhs, &theorems::lemma_match(s))
    }
}

fn exact_dilate(a: &IntSet, r: i64, b: &IntSet) -> u64 {
    intset::dilate_sum(r, a, 1, b).expect("non-empty").len() as u64
}

fn sample(spec: &SearchSpec, local: u64) -> bool {
    spec.sample_every != 0 && local.is_multiple_of(spec.sample_every)
}

fn kernel_note(kernel: &Option<Kernel>, spec: &SearchSpec) -> (String, Vec<String>) {
    match kernel {
        Some(k) => (format!("bitset (width {})", k.width), Vec::new()),
        None => (
            "vector".to_string(),
            vec![format!(
                "output range exceeds the {}-bit window; using the arbitrary-precision kernel",
                spec.bit_window
            )],
        ),
    }
}

fn scan_sets(id: TheoremId, spec: &SearchSpec) -> Result<ScanReport> {
    let started = Instant::now();
    let mults = set_multipliers(id, spec)?;
    let masks = set_masks(spec)?;
    let shards = prefix_shards(&masks);
    let rs: Vec<BigInt> = mults.iter().map(|&(r, _)| BigInt::from(r)).collect();
    let kernel = Kernel::new(spec.value_min, spec.window, &rs, 1, spec.bit_window);
    let lo = spec.value_min;
    let acc = run_shards(&shards, spec.list_limit, |shard, acc| {
        let mut k = kernel.clone();
        for (local, &mask) in shard.iter().enumerate() {
            let a = mask_set(mask, lo);
            for &(r, m) in &mults {
                let lhs = match k.as_mut() {
                    Some(k) => {
                        let fast = k.dilate_sum(r, mask, mask);
                        if sample(spec, local as u64) {
                            acc.cross_check(
                                fast,
                                || exact_dilate(&a, r, &a),
                                || format!("r={r} A={a}"),
                            );
                        }
                        fast
                    }
                    None => exact_dilate(&a, r, &a),
                };
                let v = set_verdict(id, &a, r, m, lhs, spec);
                acc.record(v, || {
                    if id == TheoremId::Cor1_6 {
                        Instance::Dilate { r, a: a.clone() }
                    } else {
                        Instance::Set(a.clone())
                    }
                });
            }
        }
    });
    let (kernel_name, notes) = kernel_note(&kernel, spec);
    Ok(finish(
        spec,
        ReportMeta {
            mode: "scan",
            theorem: Some(id),
            budget: None,
            symmetry_reduction: symmetry_note(spec),
            kernel: kernel_name,
            notes,
        },
        acc,
        started,
    ))
}

fn symmetry_note(spec: &SearchSpec) -> String {
    if spec.constraints.canonical_dedup {
        "affine canonical form (A = canonical_form(A))".to_string()
    } else {
        "none".to_string()
    }
}

fn scan_pairs(id: TheoremId, spec: &SearchSpec) -> Result<ScanReport> {
    let started = Instant::now();
    let masks = set_masks(spec)?;
    let kernel = Kernel::new(
        spec.value_min,
        spec.window,
        &[BigInt::one()],
        1,
        spec.bit_window,
    );
    let lo = spec.value_min;
    let branch = usize::from(id == TheoremId::Lss2);
    let sets: Vec<IntSet> = masks.iter().map(|&m| mask_set(m, lo)).collect();
    let idx: Vec<usize> = (0..masks.len()).collect();
    let acc = run_shards(&idx, spec.list_limit, |&i, acc| {
        let mut k = kernel.clone();
        let a = &sets[i];
        for (j, b) in sets.iter().enumerate() {
            let lhs = match k.as_mut() {
                Some(k) => {
                    let fast = k.dilate_sum(1, masks[i], masks[j]);
                    if sample(spec, j as u64) {
                        acc.cross_check(fast, || exact_dilate(a, 1, b), || format!("A={a} B={b}"));
                    }
                    fast
                }
                None => exact_dilate(a, 1, b),
            };
            let [first, second] = theorems::lss_verdicts(a, b, lhs).expect("non-empty sets");
            let v = if branch == 0 { first } else { second };
            acc.record(v, || Instance::Pair {
                a: a.clone(),
                b: b.clone(),
            });
        }
    });
    let (kernel_name, notes) = kernel_note(&kernel, spec);
    Ok(finish(
        spec,
        ReportMeta {
            mode: "scan",
            theorem: Some(id),
            budget: None,
            symmetry_reduction: symmetry_note(spec),
            kernel: kernel_name,
            notes,
        },
        acc,
        started,
    ))
}

fn scan_monoids(id: TheoremId, spec: &SearchSpec) -> Result<ScanReport> {
    let started = Instant::now();
    let params = spec.params()?;
    let raws = monoid_raws(spec)?;
    let shards: Vec<&[RawMonoid]> = raws
        .chunk_by(|a, b| {
            let head = |r: &RawMonoid| r.first().filter(|(m, _)| *m == 0).map(|p| p.1);
            head(a) == head(b)
        })
        .collect();
    let powers: Vec<BigInt> = (0..=spec.max_b_exponent)
        .map(|m| BigInt::from(spec.n).pow(m))
        .collect();
    let keys = 2 * spec.max_b_exponent as usize + 1;
    let kernel = Kernel::new(spec.value_min, spec.window, &powers, keys, spec.bit_window);
    let small_powers: Vec<i64> = if kernel.is_some() {
        powers
            .iter()
            .map(|p| p.to_i64().expect("fits the window"))
            .collect()
    } else {
        Vec::new()
    };
    let lo = spec.value_min;
    let acc = run_shards(&shards, spec.list_limit, |shard, acc| {
        let mut k = kernel.clone();
        for (local, raw) in shard.iter().enumerate() {
            let s = monoid_from_raw(raw, lo, params);
            if spec.constraints.require_nonabelian && !s.is_nonabelian() {
                continue;
            }
            let lhs = match k.as_mut() {
                Some(k) => {
                    let fast = k.square(raw, &small_powers);
                    if sample(spec, local as u64) {
                        acc.cross_check(fast, || s.square().len() as u64, || format!("S={s}"));
                    }
                    fast
                }
                None => s.square().len() as u64,
            };
            let v = monoid_verdict(id, &s, lhs);
            acc.record(v, || Instance::Monoid(s.clone()));
        }
    });
    let (kernel_name, mut notes) = kernel_note(&kernel, spec);
    if spec.constraints.require_nonabelian {
        notes.push("abelian monoid sets skipped before counting".to_string());
    }
    Ok(finish(
        spec,
        ReportMeta {
            mode: "scan",
            theorem: Some(id),
            budget: None,
            symmetry_reduction: "none (full coset space; translating A_0 or shifting all b-exponents does not preserve |S²|)".to_string(),
            kernel: kernel_name,
            notes,
        },
        acc,
        started,
    ))
}

/// Runs the verifier for `id` on every in-spec instance: integer sets for the
/// statements about `A + r·A`, ordered pairs for the two-set bound, and monoid
/// sets for the product-set statements.
pub fn scan_bound(id: TheoremId, spec: &SearchSpec) -> Result<ScanReport> {
    spec.validate()?;
    match family(id) {
        Family::Sets => scan_sets(id, spec),
        Family::Pairs => scan_pairs(id, spec),
        Family::Monoids => scan_monoids(id, spec),
    }
}

/// All in-spec `A` with `|A + n·A| = 4|A| - 4`. For `n = 3` each set is also
/// classified, and a disagreement in either direction is a mismatch.
pub fn find_equality_sets(n: u32, spec: &SearchSpec) -> Result<ScanReport> {
    if n < 3 {
        return Err(Error::domain(format!(
            "equality search needs n >= 3, got {n}"
        )));
    }
    let started = Instant::now();
    let masks = set_masks(spec)?;
    let shards = prefix_shards(&masks);
    let kernel = Kernel::new(
        spec.value_min,
        spec.window,
        &[BigInt::from(n)],
        1,
        spec.bit_window,
    );
    let lo = spec.value_min;
    let r = n as i64;
    let acc = run_shards(&shards, spec.list_limit, |shard, acc| {
        let mut k = kernel.clone();
        for (local, &mask) in shard.iter().enumerate() {
            let a = mask_set(mask, lo);
            let lhs = match k.as_mut() {
                Some(k) => {
                    let fast = k.dilate_sum(r, mask, mask);
                    if sample(spec, local as u64) {
                        acc.cross_check(fast, || exact_dilate(&a, r, &a), || format!("A={a}"));
                    }
                    fast
                }
                None => exact_dilate(&a, r, &a),
            };
            let size = a.len() as u64;
            let equal = size >= 2 && lhs == 4 * size - 4;
            let v = theorems::cor1_verdict(&a, r, lhs);
            let violated = v.is_violation();
            acc.instances += 1;
            acc.hypotheses += 1;
            if violated {
                acc.violation_count += 1;
                push_capped(&mut acc.violations, acc.limit, || v);
            }
            if n == 3 && size >= 3 {
                let class = structure::classify_extremal(&a).expect("|A| >= 3");
                let classified = class.tag != structure::ExtremalTag::NotExtremal;
                if classified != equal {
                    acc.mismatches.push(format!(
                        "A={a}: |A+3A| = {lhs}, 4k-4 = {}, classified {}",
                        4 * size - 4,
                        class.tag
                    ));
                }
            }
            if equal {
                acc.equality_count += 1;
                acc.boundary_count += 1;
                push_capped(&mut acc.equality, acc.limit, || Instance::Set(a.clone()));
                push_capped(&mut acc.boundary, acc.limit, || Instance::Set(a.clone()));
            }
        }
    });
    let (kernel_name, mut notes) = kernel_note(&kernel, spec);
    if n == 3 && spec.k_range.0 < 3 {
        notes.push("sets with |A| < 3 are not classified".to_string());
    }
    Ok(finish(
        spec,
        ReportMeta {
            mode: "equality",
            theorem: (n == 3).then_some(TheoremId::Thm1_5),
            budget: None,
            symmetry_reduction: symmetry_note(spec),
            kernel: kernel_name,
            notes,
        },
        acc,
        started,
    ))
}

// ---------------------------------------------------------------------------
// randomized hunts
// ---------------------------------------------------------------------------

fn random_set(rng: &mut ChaCha8Rng, spec: &SearchSpec, k: usize) -> IntSet {
    let (lo, hi) = (spec.value_min, spec.window);
    let span = (hi as i128 - lo as i128 + 1) as u128;
    let k = (k as u128).min(span) as usize;
    let mut chosen = std::collections::BTreeSet::new();
    if spec.constraints.require_zero && lo <= 0 && 0 <= hi {
        chosen.insert(0i64);
    }
    while chosen.len() < k {
        chosen.insert(rng.gen_range(lo..=hi));
    }
    IntSet::new(chosen)
}

fn random_monoid(
    rng: &mut ChaCha8Rng,
    spec: &SearchSpec,
    k: usize,
    params: GroupParams,
) -> MonoidSet {
    let (lo, hi) = (spec.value_min, spec.window);
    let top = spec.max_b_exponent;
    let mut elems = std::collections::BTreeSet::new();
    if spec.constraints.singleton_slices {
        let k = k.min(top as usize + 1);
        let exps = rand::seq::index::sample(rng, top as usize + 1, k);
        for m in exps.iter() {
            elems.insert((m as u32, rng.gen_range(lo..=hi)));
        }
    } else {
        let room = (top as u128 + 1) * (hi as i128 - lo as i128 + 1) as u128;
        let k = (k as u128).min(room) as usize;
        while elems.len() < k {
            elems.insert((rng.gen_range(0..=top), rng.gen_range(lo..=hi)));
        }
    }
    MonoidSet::from_elements(
        elems.into_iter().map(|(m, x)| MonoidElement::new(m, x)),
        params,
    )
    .expect("within the cap")
}

fn hunt_one(
    id: TheoremId,
    spec: &SearchSpec,
    i: u64,
    params: GroupParams,
    acc: &mut Acc,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(i);
    let k = rng.gen_range(spec.k_range.0..=spec.k_range.1);
    match family(id) {
        Family::Sets => {
            let mults = set_multipliers(id, spec)?;
            let (r, m) = mults[rng.gen_range(0..mults.len())];
            let a = random_set(&mut rng, spec, k);
            let lhs = exact_dilate(&a, r, &a);
            let v = set_verdict(id, &a, r, m, lhs, spec);
            acc.record(v, || Instance::Dilate { r, a: a.clone() });
        }
        Family::Pairs => {
            let a = random_set(&mut rng, spec, k);
            let kb = rng.gen_range(spec.k_range.0..=spec.k_range.1);
            let b = random_set(&mut rng, spec, kb);
            let lhs = exact_dilate(&a, 1, &b);
            let [first, second] = theorems::lss_verdicts(&a, &b, lhs)?;
            let v = if id == TheoremId::Lss1 { first } else { second };
            acc.record(v, || Instance::Pair {
                a: a.clone(),
                b: b.clone(),
            });
        }
        Family::Monoids => {
            let s = random_monoid(&mut rng, spec, k, params);
            let lhs = s.square().len() as u64;
            let v = monoid_verdict(id, &s, lhs);
            acc.record(v, || Instance::Monoid(s.clone()));
        }
    }
    Ok(())
}

/// Seeded random search over `budget` instances drawn from the spec's ranges,
/// evaluated on the arbitrary-precision path. Value ranges may exceed the
/// exhaustive 64-integer limit.
pub fn hunt(id: TheoremId, spec: &SearchSpec, budget: u64) -> Result<ScanReport> {
    spec.validate()?;
    let started = Instant::now();
    let params = spec.params()?;
    if family(id) == Family::Sets {
        set_multipliers(id, spec)?;
    }
    let shards: Vec<(u64, u64)> = (0..budget.div_ceil(HUNT_SHARD))
        .map(|s| (s * HUNT_SHARD, ((s + 1) * HUNT_SHARD).min(budget)))
        .collect();
    let errors = std::sync::Mutex::new(None);
    let acc = run_shards(&shards, spec.list_limit, |&(from, to), acc| {
        for i in from..to {
            if let Err(e) = hunt_one(id, spec, i, params, acc) {
                errors.lock().expect("unpoisoned").get_or_insert(e);
                return;
            }
        }
    });
    if let Some(e) = errors.into_inner().expect("unpoisoned") {
        return Err(e);
    }
    let mut notes = vec![format!(
        "seed {}, instance i drawn from ChaCha8 stream i",
        spec.seed
    )];
    if spec.constraints.require_d1 || spec.constraints.canonical_dedup {
        notes.push("require_d1 and canonical_dedup do not apply to random sampling".to_string());
    }
    Ok(finish(
        spec,
        ReportMeta {
            mode: "hunt",
            theorem: Some(id),
            budget: Some(budget),
            symmetry_reduction: "none".to_string(),
            kernel: "vector".to_string(),
            notes,
        },
        acc,
        started,
    ))
}
