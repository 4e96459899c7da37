use proptest::prelude::*;
use qunip::scalars::{qbinom, qint, Int, Laurent, ScalarQ};

fn laurent() -> impl Strategy<Value = Laurent> {
    (-3i32..=3, prop::collection::vec(-4i64..=4, 0..4))
        .prop_map(|(low, c)| Laurent::from_coeffs(low, c.into_iter().map(Int::from).collect()))
}

fn scalar() -> impl Strategy<Value = ScalarQ> {
    (laurent(), laurent().prop_filter("nonzero denominator", |d| !d.is_zero()))
        .prop_map(|(n, d)| ScalarQ::from_fraction(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&a), ScalarQ::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!((&b * &a).checked_div(&a).unwrap(), b.clone());
        }
    }

    #[test]
    fn bar_is_a_ring_involution(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!(ScalarQ::q_pow(3).bar(), ScalarQ::q_pow(-3));
    }

    #[test]
    fn display_parses_back(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<ScalarQ>().unwrap(), a);
    }

    #[test]
    fn shift_is_multiplication_by_q_power(a in scalar(), k in -5i64..=5) {
        prop_assert_eq!(a.shift(k), &a * &ScalarQ::q_pow(k));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), x in 2u64..1000) {
        const P: u64 = 1_000_003;
        if let (Some(ea), Some(eb), Some(eab)) = (a.eval_mod(x, P), b.eval_mod(x, P), (&a * &b).eval_mod(x, P)) {
            prop_assert_eq!(eab, ea * eb % P);
        }
    }

    #[test]
    fn q_binomials(n in 1i64..=9, d in 1i64..=3, k_frac in 0.0f64..=1.0) {
        let k = ((n as f64) * k_frac).floor() as i64;
        let b = qbinom(n, k, d).unwrap();
        prop_assert_eq!(&b, &qbinom(n, n - k, d).unwrap());
        prop_assert!(b.is_bar_invariant());
        if k >= 1 {
            let rhs = &qbinom(n - 1, k, d).unwrap().shift(-d * k) + &qbinom(n - 1, k - 1, d).unwrap().shift(d * (n - k));
            prop_assert_eq!(b, rhs);
        }
        prop_assert_eq!(qint(n, d).bar(), qint(n, d));
    }
}
