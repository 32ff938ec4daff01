//! Reference computations shared by the integration tests. Nothing here calls
//! the arithmetic of the crate under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `{r·a + b}` by nested loops.
pub fn dilate_sum(r: i64, a: &[i64], b: &[i64]) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            out.insert(r * x + y);
        }
    }
    out
}

/// `A + r·A`.
pub fn a_plus_ra(a: &[i64], r: i64) -> usize {
    dilate_sum(r, a, a).len()
}

/// Right action of BS(1,n) on ℚ: `x·a = x + 1`, `x·b = n·x`, so the word
/// `b^m a^x` acts as `t ↦ n^m·t + x`. An element is the pair `(n^m, x)` and a
/// product is composition of affine maps (equivalently the matrix product
/// `[[α,0],[β,1]]`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affine {
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl Affine {
    pub fn word(n: u32, m: u32, x: impl Into<BigInt>) -> Affine {
        Affine {
            alpha: BigInt::from(n).pow(m),
            beta: x.into(),
        }
    }

    /// `t·(f g) = (t·f)·g`.
    pub fn then(&self, g: &Affine) -> Affine {
        let m = [[&self.alpha, &BigInt::zero()], [&self.beta, &BigInt::one()]];
        let h = [[&g.alpha, &BigInt::zero()], [&g.beta, &BigInt::one()]];
        let prod = |i: usize, j: usize| -> BigInt { m[i][0] * h[0][j] + m[i][1] * h[1][j] };
        debug_assert!(prod(0, 1).is_zero() && prod(1, 1).is_one());
        Affine {
            alpha: prod(0, 0),
            beta: prod(1, 0),
        }
    }

    /// Recovers `m` from `α = n^m`.
    pub fn b_exp(&self, n: u32) -> u32 {
        let mut m = 0;
        let mut p = BigInt::one();
        while p < self.alpha {
            p *= n;
            m += 1;
        }
        assert_eq!(p, self.alpha, "not a power of n");
        m
    }
}

/// Elementwise `S·T` as `(m, x)` pairs.
pub fn product(n: u32, s: &[(u32, BigInt)], t: &[(u32, BigInt)]) -> BTreeSet<(u32, BigInt)> {
    let mut out = BTreeSet::new();
    for (m1, x1) in s {
        let f = Affine::word(n, *m1, x1.clone());
        for (m2, x2) in t {
            let g = Affine::word(n, *m2, x2.clone());
            let h = f.then(&g);
            out.insert((h.b_exp(n), h.beta));
        }
    }
    out
}

pub fn square_size(n: u32, s: &[(u32, BigInt)]) -> usize {
    product(n, s, s).len()
}

/// Two elements commute iff their maps commute.
pub fn commute(n: u32, e: &(u32, BigInt), f: &(u32, BigInt)) -> bool {
    let (p, q) = (
        Affine::word(n, e.0, e.1.clone()),
        Affine::word(n, f.0, f.1.clone()),
    );
    p.then(&q) == q.then(&p)
}

pub fn nonabelian(n: u32, s: &[(u32, BigInt)]) -> bool {
    s.iter()
        .enumerate()
        .any(|(i, e)| s[i + 1..].iter().any(|f| !commute(n, e, f)))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Smallest arithmetic progression containing a sorted set.
pub fn min_ap(a: &[i64]) -> i64 {
    if a.len() == 1 {
        return 1;
    }
    let d = a.iter().fold(0, |g, x| gcd(g, x - a[0]));
    (a[a.len() - 1] - a[0]) / d + 1
}

/// All subsets of `[lo, hi]` with size in `k_min..=k_max`, sorted.
pub fn subsets(lo: i64, hi: i64, k_min: usize, k_max: usize) -> Vec<Vec<i64>> {
    let vals: Vec<i64> = (lo..=hi).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << vals.len()) {
        let k = mask.count_ones() as usize;
        if k >= k_min && k <= k_max {
            out.push(
                (0..vals.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| vals[i])
                    .collect(),
            );
        }
    }
    out
}

/// Lexicographically least of the normalized set and its normalized mirror image.
pub fn canonical(a: &[i64]) -> Vec<i64> {
    let norm = |v: &[i64]| -> Vec<i64> {
        let lo = v[0];
        let d = v.iter().fold(0, |g, x| gcd(g, x - lo));
        let mut w: Vec<i64> = v
            .iter()
            .map(|x| if d == 0 { 0 } else { (x - lo) / d })
            .collect();
        w.sort();
        w
    };
    let hi = a[a.len() - 1];
    let mut mirror: Vec<i64> = a.iter().map(|x| hi - x).collect();
    mirror.sort();
    norm(a).min(norm(&mirror))
}
