use cyclo::Cyclo;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = Cyclo> {
    (prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]), prop::collection::vec((-5i64..6, 1i64..4), 0..6))
        .prop_map(|(n, cs)| {
            cs.into_iter()
                .enumerate()
                .map(|(k, (p, q))| Cyclo::ratio(p, q) * Cyclo::root_of_unity(n, k as i64))
                .sum()
        })
}

proptest! {
    #[test]
    fn addition_commutes(a in element(), b in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_associates(a in element(), b in element(), c in element()) {
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn distributive(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn inverse_is_two_sided(a in element()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, Cyclo::one());
        prop_assert_eq!(&inv * &a, Cyclo::one());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in element(), b in element()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
        prop_assert_eq!((&a + &b).conj(), a.conj() + b.conj());
    }

    #[test]
    fn print_parse_round_trip(a in element()) {
        let s = a.to_string();
        let back: Cyclo = s.parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), s);
    }

    #[test]
    fn roots_of_unity_have_their_order(n in 1u32..25, k in -30i64..30) {
        let z = Cyclo::root_of_unity(n, k);
        prop_assert_eq!(z.pow(n as i64), Cyclo::one());
        prop_assert_eq!(z.conj(), Cyclo::root_of_unity(n, -k));
    }
}

#[test]
fn norm_of_gaussian_integer() {
    let x = Cyclo::from_int(3) + Cyclo::from_int(4) * Cyclo::i();
    assert_eq!(&x * &x.conj(), Cyclo::from_int(25));
}

#[test]
fn sum_of_all_nth_roots_vanishes() {
    for n in 2..16u32 {
        let s: Cyclo = (0..n).map(|k| Cyclo::root_of_unity(n, k as i64)).sum();
        assert!(s.is_zero(), "n = {n}");
    }
}
