mod common;

use bsmonoid::theorems::{self, TheoremId};
use bsmonoid::{GroupParams, MonoidElement, MonoidSet};
use num_bigint::BigInt;

fn pairs(s: &MonoidSet) -> Vec<(u32, BigInt)> {
    s.elements()
        .map(|e| (e.b_exp(), e.a_exp().clone()))
        .collect()
}

/// Every subset of the cells `{0,1} × {-1,0,1}` of size 1..=4, for n = 2, 3.
fn small_sets() -> Vec<MonoidSet> {
    let cells: Vec<(u32, i64)> = (0..3).flat_map(|m| (-1..=1).map(move |x| (m, x))).collect();
    let mut out = Vec::new();
    for n in [2, 3] {
        let p = GroupParams::new(n).unwrap();
        for mask in 1u32..(1 << cells.len()) {
            if mask.count_ones() > 4 {
                continue;
            }
            let elems = (0..cells.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| MonoidElement::new(cells[i].0, cells[i].1));
            out.push(MonoidSet::from_elements(elems, p).unwrap());
        }
    }
    out
}

#[test]
fn square_matches_elementwise_products() {
    for s in small_sets() {
        let n = s.params().base();
        let want = common::product(n, &pairs(&s), &pairs(&s));
        let got: std::collections::BTreeSet<_> = pairs(&s.square()).into_iter().collect();
        assert_eq!(got, want, "{s}");
    }
}

#[test]
fn product_of_distinct_sets_matches() {
    let sets = small_sets();
    for (i, s) in sets.iter().enumerate().step_by(37) {
        for t in sets.iter().skip(i % 11).step_by(53) {
            if t.params().base() != s.params().base() {
                assert!(s.product_set(t).is_err());
                continue;
            }
            let n = s.params().base();
            let want = common::product(n, &pairs(s), &pairs(t));
            let got: std::collections::BTreeSet<_> =
                pairs(&s.product_set(t).unwrap()).into_iter().collect();
            assert_eq!(got, want, "{s} · {t}");
        }
    }
}

#[test]
fn nonabelian_matches_pairwise_commutation() {
    for s in small_sets() {
        assert_eq!(
            s.is_nonabelian(),
            common::nonabelian(s.params().base(), &pairs(&s)),
            "{s}"
        );
    }
}

#[test]
fn every_nonabelian_multicoset_set_has_a_case() {
    // each falls under a lemma or the generic direct bound
    for s in small_sets() {
        if s.params().base() != 3 || s.slice_count() < 2 || !s.is_nonabelian() {
            continue;
        }
        let lemmas = theorems::lemma_match(&s);
        let generic = theorems::verify_thm3_direct(&s);
        assert!(
            !lemmas.is_empty() || (s.len() >= 3 && generic.hypotheses_met) || s.len() < 3,
            "{s}"
        );
        for id in lemmas {
            let v = theorems::verify_lemma(&s, id);
            assert!(v.hypotheses_met, "{id} {s}");
            assert_eq!(v.holds, Some(true), "{v}");
        }
    }
}

#[test]
fn lemma_two_three_equality_example() {
    let p = GroupParams::new(3).unwrap();
    let s = MonoidSet::parse("{a^1, b^1*a^0, b^2*a^0}", p).unwrap();
    assert_eq!(common::square_size(3, &pairs(&s)), 8);
    assert!(theorems::lemma_match(&s).contains(&TheoremId::Lemma2_3));
    let v = theorems::verify_lemma(&s, TheoremId::Lemma2_3);
    assert_eq!((v.lhs, v.boundary), (8, true));
}

#[test]
fn wide_exponents_square_exactly() {
    let p = GroupParams::new(3).unwrap();
    let big: BigInt = BigInt::from(1u8) << 200usize;
    let s = MonoidSet::from_elements(
        [
            MonoidElement::new(0, big.clone()),
            MonoidElement::new(5, -big.clone()),
            MonoidElement::new(40, 7),
        ],
        p,
    )
    .unwrap();
    let want = common::product(3, &pairs(&s), &pairs(&s));
    let got: std::collections::BTreeSet<_> = pairs(&s.square()).into_iter().collect();
    assert_eq!(got, want);
}
