use fukaya_core::novikov::{int, rat};
use fukaya_core::{Novikov, Rat, Valuation};
use proptest::prelude::*;

const CUTOFF: i64 = 10;

fn series() -> impl Strategy<Value = Novikov> {
    prop::collection::vec((0i64..48, 1i64..5, -6i64..=6), 0..6)
        .prop_map(|ts| Novikov::from_terms(ts.into_iter().map(|(n, d, c)| (rat(n, d), int(c))), int(CUTOFF)))
}

fn unit_series() -> impl Strategy<Value = Novikov> {
    (series(), 1i64..5, prop::bool::ANY).prop_map(|(x, c, neg)| {
        let lead = Novikov::constant(if neg { -c } else { c }, int(CUTOFF));
        lead.add_ref(&x.shift(&rat(1, 3)))
    })
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Novikov::one(int(CUTOFF)), a.clone());
    }

    #[test]
    fn valuation_is_additive(a in series(), b in series()) {
        if let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) {
            let v = &va + &vb;
            if v < int(CUTOFF) {
                prop_assert_eq!((&a * &b).valuation(), Valuation::Finite(v));
            }
        }
    }

    #[test]
    fn inverse_of_a_unit(u in unit_series()) {
        let inv = u.inv().unwrap();
        prop_assert_eq!(&u * &inv, Novikov::one(int(CUTOFF)));
    }

    #[test]
    fn truncation_is_a_ring_map(a in series(), b in series(), n in 1i64..CUTOFF) {
        let s = int(n);
        prop_assert_eq!((&a * &b).truncate_to(&s), &a.truncate_to(&s) * &b.truncate_to(&s));
        prop_assert_eq!((&a + &b).truncate_to(&s), &a.truncate_to(&s) + &b.truncate_to(&s));
    }

    #[test]
    fn euler_derivative_is_a_derivation(a in series(), b in series()) {
        let lhs = (&a * &b).euler_derivative();
        let rhs = &(&a.euler_derivative() * &b) + &(&a * &b.euler_derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_commutes_with_products(a in series(), b in series(), n in 0i64..12, d in 1i64..4) {
        let s: Rat = rat(n, d);
        prop_assert_eq!(&a.shift(&s) * &b, (&a * &b).shift(&s));
    }
}
