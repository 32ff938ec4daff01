mod common;

use bsmonoid::element::{self, parse as parse_element};
use bsmonoid::intset::{self, affine_image, dilate, dilate_sum, sumset};
use bsmonoid::structure::{self, canonical_form, classify_extremal, min_ap_size};
use bsmonoid::{commutes, multiply, power, GroupParams, IntSet, MonoidElement, MonoidSet};
use num_bigint::BigInt;
use proptest::prelude::*;

fn wide() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        (-50i64..50).prop_map(BigInt::from),
        any::<i128>().prop_map(BigInt::from),
        (any::<i128>(), any::<u64>()).prop_map(|(h, l)| (BigInt::from(h) << 64) + l),
    ]
}

fn elem() -> impl Strategy<Value = MonoidElement> {
    (0u32..8, wide()).prop_map(|(m, x)| MonoidElement::new(m, x))
}

fn params() -> impl Strategy<Value = GroupParams> {
    (2u32..6).prop_map(|n| GroupParams::new(n).unwrap())
}

fn small_set(max: usize) -> impl Strategy<Value = IntSet> {
    prop::collection::btree_set(-30i64..30, 1..=max).prop_map(IntSet::new)
}

fn oracle_pair(e: &MonoidElement) -> (u32, BigInt) {
    (e.b_exp(), e.a_exp().clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn multiplication_is_associative(p in params(), e in elem(), f in elem(), g in elem()) {
        let left = multiply(&multiply(&e, &f, &p), &g, &p);
        let right = multiply(&e, &multiply(&f, &g, &p), &p);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_cancellative(p in params(), e in elem(), f in elem(), g in elem()) {
        prop_assume!(f != g);
        prop_assert_ne!(multiply(&e, &f, &p), multiply(&e, &g, &p));
        prop_assert_ne!(multiply(&f, &e, &p), multiply(&g, &e, &p));
    }

    #[test]
    fn multiplication_matches_affine_maps(p in params(), e in elem(), f in elem()) {
        let prod = multiply(&e, &f, &p);
        let n = p.base();
        let oracle = common::Affine::word(n, e.b_exp(), e.a_exp().clone())
            .then(&common::Affine::word(n, f.b_exp(), f.a_exp().clone()));
        prop_assert_eq!(prod.b_exp(), oracle.b_exp(n));
        prop_assert_eq!(prod.a_exp(), &oracle.beta);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn commutes_agrees_with_products(p in params(), e in elem(), f in elem()) {
        let swapped = multiply(&e, &f, &p) == multiply(&f, &e, &p);
        prop_assert_eq!(commutes(&e, &f, &p), swapped);
        prop_assert_eq!(commutes(&e, &f, &p), common::commute(p.base(), &oracle_pair(&e), &oracle_pair(&f)));
    }

    #[test]
    fn commutes_on_small_exponents(p in params(), m1 in 0u32..4, m2 in 0u32..4, x1 in -20i64..20, x2 in -20i64..20) {
        let (e, f) = (MonoidElement::new(m1, x1), MonoidElement::new(m2, x2));
        prop_assert_eq!(commutes(&e, &f, &p), multiply(&e, &f, &p) == multiply(&f, &e, &p));
    }

    #[test]
    fn power_is_repeated_product(p in params(), e in elem(), j in 0u64..7) {
        let mut expect = element::identity();
        for _ in 0..j {
            expect = multiply(&expect, &e, &p);
        }
        prop_assert_eq!(power(&e, j, &p).unwrap(), expect);
    }

    #[test]
    fn element_text_round_trips(e in elem()) {
        prop_assert_eq!(parse_element(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn sumset_is_commutative(a in small_set(8), b in small_set(8)) {
        prop_assert_eq!(sumset(&a, &b).unwrap(), sumset(&b, &a).unwrap());
    }

    #[test]
    fn sumset_is_associative(a in small_set(6), b in small_set(6), c in small_set(6)) {
        let left = sumset(&sumset(&a, &b).unwrap(), &c).unwrap();
        let right = sumset(&a, &sumset(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sumset_matches_nested_loops(a in small_set(9), b in small_set(9)) {
        let got = sumset(&a, &b).unwrap().to_i64_vec().unwrap();
        let want: Vec<i64> = common::dilate_sum(1, &a.to_i64_vec().unwrap(), &b.to_i64_vec().unwrap()).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn bit_kernel_matches_merge(a in prop::collection::btree_set(0i64..200, 1..12), b in prop::collection::btree_set(0i64..200, 1..12)) {
        let (a, b) = (IntSet::new(a), IntSet::new(b));
        prop_assert_eq!(intset::sumset_bits(&a, &b, 512).unwrap(), sumset(&a, &b).unwrap());
    }

    #[test]
    fn dilate_sum_is_sum_of_dilates(r in -5i64..6, s in -5i64..6, a in small_set(7), b in small_set(7)) {
        let direct = dilate_sum(r, &a, s, &b).unwrap();
        prop_assert_eq!(direct, sumset(&dilate(r, &a), &dilate(s, &b)).unwrap());
    }

    #[test]
    fn sumset_size_is_affine_invariant(u in prop_oneof![-4i64..0, 1i64..5], v in -9i64..9, w in -9i64..9, a in small_set(7), b in small_set(7)) {
        let base = sumset(&a, &b).unwrap().len();
        let moved = sumset(&affine_image(&a, u, v).unwrap(), &affine_image(&b, u, w).unwrap()).unwrap().len();
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn structure_is_affine_invariant(u in prop_oneof![-4i64..0, 1i64..5], v in -9i64..9, a in small_set(7)) {
        let img = affine_image(&a, u, v).unwrap();
        prop_assert_eq!(canonical_form(&img).unwrap(), canonical_form(&a).unwrap());
        prop_assert_eq!(min_ap_size(&img).unwrap(), min_ap_size(&a).unwrap());
        prop_assert_eq!(structure::holes(&canonical_form(&img).unwrap()).unwrap(), structure::holes(&canonical_form(&a).unwrap()).unwrap());
        if a.len() >= 3 {
            prop_assert_eq!(classify_extremal(&img).unwrap().tag, classify_extremal(&a).unwrap().tag);
        }
    }

    #[test]
    fn canonical_form_matches_reference(a in small_set(8)) {
        let want = common::canonical(&a.to_i64_vec().unwrap());
        prop_assert_eq!(canonical_form(&a).unwrap().to_i64_vec().unwrap(), want);
    }

    #[test]
    fn min_ap_matches_reference(a in small_set(8)) {
        prop_assert_eq!(min_ap_size(&a).unwrap(), BigInt::from(common::min_ap(&a.to_i64_vec().unwrap())));
    }

    #[test]
    fn set_text_round_trips(a in small_set(10)) {
        prop_assert_eq!(intset::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn monoid_set_json_round_trips(n in 2u32..5, elems in prop::collection::btree_set((0u32..4, -20i64..20), 1..8)) {
        let p = GroupParams::new(n).unwrap();
        let s = MonoidSet::from_elements(elems.iter().map(|&(m, x)| MonoidElement::new(m, x)), p).unwrap();
        prop_assert_eq!(MonoidSet::from_json(&s.to_json()).unwrap(), s.clone());
        prop_assert_eq!(MonoidSet::parse(&s.to_string(), p).unwrap(), s);
    }
}
