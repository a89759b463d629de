use proptest::prelude::*;
use webskein_core::repcore::{apply_chevalley, apply_divided, Chevalley, Monomial, RepSpace, RepVector};
use webskein_core::weights::{all_sequences, RungKind};
use webskein_core::{qint, RingElem};

fn vector_in(v: &RepVector, s: &webskein_core::GlSequence) -> bool {
    v.terms.keys().all(|mono| mono.profile(s.n, s.m()) == *s)
}

/// A basis monomial of `Λ^N(C^n ⊗ C^m)` with `N` bits among `n·m`.
fn monomial() -> impl Strategy<Value = (u32, usize, Monomial)> {
    (1u32..=3, 2usize..=4).prop_flat_map(|(n, m)| {
        let size = n as usize * m;
        prop::sample::subsequence((0..size).collect::<Vec<_>>(), 0..=size)
            .prop_map(move |bits| (n, m, Monomial(bits.iter().fold(0u64, |acc, b| acc | 1 << b))))
    })
}

proptest! {
    #[test]
    fn commutator_is_quantum_integer((n, m, mono) in monomial(), i in 1usize..4) {
        prop_assume!(i < m);
        let v = RepVector::basis(mono);
        let lam = mono.profile(n, m).lambda(i);
        let ef = apply_chevalley(Chevalley::E(i), m, &apply_chevalley(Chevalley::F(i), m, &v));
        let fe = apply_chevalley(Chevalley::F(i), m, &apply_chevalley(Chevalley::E(i), m, &v));
        let neg = fe.scale(&-RingElem::one());
        prop_assert_eq!(ef.add(&neg), v.scale(&qint(lam as i64)));
    }

    #[test]
    fn generators_shift_weights((n, m, mono) in monomial(), i in 1usize..4) {
        prop_assume!(i < m);
        let s = mono.profile(n, m);
        let v = RepVector::basis(mono);
        let e = apply_chevalley(Chevalley::E(i), m, &v);
        let k = apply_chevalley(Chevalley::K(i, 1), m, &v);
        prop_assert_eq!(k, v.scale(&RingElem::q_pow(s.lambda(i))));
        if let Some(t) = webskein_core::weights::rung_target(&s, RungKind::E, i, 1).seq() {
            prop_assert!(vector_in(&e, t));
        } else {
            prop_assert!(e.is_zero());
        }
    }

    #[test]
    fn distant_generators_commute((n, m, mono) in monomial()) {
        prop_assume!(m >= 3);
        let v = RepVector::basis(mono);
        let a = apply_chevalley(Chevalley::E(1), m, &apply_chevalley(Chevalley::F(2), m, &v));
        let b = apply_chevalley(Chevalley::F(2), m, &apply_chevalley(Chevalley::E(1), m, &v));
        prop_assert_eq!(a, b);
        let _ = n;
    }
}

#[test]
fn divided_blocks_match_vector_action() {
    for (n, m) in [(2u32, 2usize), (2, 3), (3, 3)] {
        let space = RepSpace::new(n, m).unwrap();
        for total in 0..=(n as i32 * m as i32).min(5) {
            for s in all_sequences(n, m, total) {
                let basis = space.weight_space_basis(&s).unwrap();
                for (kind, i, k) in [(RungKind::E, 1, 1), (RungKind::F, 1, 2), (RungKind::E, m - 1, 2)] {
                    let blk = space.divided_block(&s, kind, i, k).unwrap();
                    for (c, mono) in basis.monomials.iter().enumerate() {
                        let img = apply_divided(kind, i, k, m, &RepVector::basis(*mono)).unwrap();
                        let Some(t) = blk.0.seq() else {
                            assert!(img.is_zero());
                            continue;
                        };
                        let coords = space.coordinates(t, &img).unwrap();
                        for (r, x) in coords.iter().enumerate() {
                            assert_eq!(*x, blk.1.entry(r, c), "{:?}{}^({}) on {} column {}", kind, i, k, s, c);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn extremal_blocks_are_lines() {
    let space = RepSpace::new(3, 4).unwrap();
    for s in all_sequences(3, 4, 6) {
        let d = space.dim(&s).unwrap();
        if s.is_extremal() {
            assert_eq!(d, 1);
        } else {
            assert!(d > 1);
        }
    }
    assert!(RepSpace::new(9, 8).is_err());
}
