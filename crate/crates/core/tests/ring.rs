use std::collections::BTreeMap;

use proptest::prelude::*;
use webskein_core::{qbinom, qfact, qint, Exp, GaussInt, Generator, RingElem};

fn elem() -> impl Strategy<Value = RingElem> {
    let term = (-6i32..=6, -2i32..=2, -2i32..=2, -3i64..=3, -2i64..=2)
        .prop_map(|(s, z, a, re, im)| (Exp::new(s, z, a), GaussInt::new(re, im)));
    prop::collection::vec(term, 0..5).prop_map(RingElem::from_terms)
}

fn unit() -> impl Strategy<Value = RingElem> {
    (0i64..4, -5i32..=5, -2i32..=2, -2i32..=2).prop_map(|(k, s, z, a)| RingElem::monomial(GaussInt::i_pow(k), Exp::new(s, z, a)))
}

proptest! {
    #[test]
    fn ring_axioms(x in elem(), y in elem(), w in elem()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &w, &x + &(&y + &w));
        prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        prop_assert_eq!(&x - &x, RingElem::zero());
        prop_assert_eq!(&x * &RingElem::one(), x.clone());
    }

    #[test]
    fn bar_is_an_involutive_automorphism(x in elem(), y in elem()) {
        prop_assert_eq!(x.bar().bar(), x.clone());
        prop_assert_eq!((&x * &y).bar(), &x.bar() * &y.bar());
        prop_assert_eq!((&x + &y).bar(), &x.bar() + &y.bar());
    }

    #[test]
    fn exact_division_inverts_multiplication(x in elem(), y in elem()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!((&x * &y).exact_div(&y).unwrap(), x);
    }

    #[test]
    fn units_invert(u in unit(), k in -4i64..=4) {
        let inv = u.unit_inverse().unwrap();
        prop_assert!((&u * &inv).is_one());
        prop_assert_eq!(&u.pow(k).unwrap() * &u.pow(-k).unwrap(), RingElem::one());
    }

    #[test]
    fn text_round_trip(x in elem()) {
        let back: RingElem = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn specialization_is_a_homomorphism(x in elem(), y in elem(), u in unit()) {
        let mut m = BTreeMap::new();
        m.insert(Generator::A, u);
        let sp = |e: &RingElem| e.specialize(&m).unwrap();
        prop_assert_eq!(sp(&(&x * &y)), &sp(&x) * &sp(&y));
        prop_assert_eq!(sp(&(&x + &y)), &sp(&x) + &sp(&y));
    }
}

#[test]
fn quantum_binomials() {
    for p in 0..=8i64 {
        for k in 0..=p as u32 {
            let lhs = &qbinom(p, k) * &(&qfact(k) * &qfact(p as u32 - k));
            assert_eq!(lhs, qfact(p as u32), "p={} k={}", p, k);
            assert_eq!(qbinom(p, k).bar(), qbinom(p, k));
        }
        assert!(qbinom(p, p as u32 + 1).is_zero());
    }
    for p in 1..=7i64 {
        for k in 1..=p as u32 {
            // Pascal rule [p, k] = q^{-k}[p-1, k] + q^{p-k}[p-1, k-1].
            let rhs = &(&RingElem::q_pow(-(k as i32)) * &qbinom(p - 1, k))
                + &(&RingElem::q_pow((p - k as i64) as i32) * &qbinom(p - 1, k - 1));
            assert_eq!(qbinom(p, k), rhs);
        }
    }
    assert_eq!(qint(-2), -qint(2));
    assert_eq!(qint(0), RingElem::zero());
}

#[test]
fn canonical_text() {
    let x = &RingElem::one() - &RingElem::q_pow(-2);
    assert_eq!(x.to_string(), "-1*q^(-2) + 1");
    assert_eq!(RingElem::zero().to_string(), "0");
    assert!(RingElem::s_pow(1).pow(1).is_ok());
    assert!(qint(2).pow(-1).is_err());
}
