//! Field axioms for the quadratic-extension coefficients, exercised over
//! random small elements at every supported prime.

use num::bigint::BigInt;
use num::rational::BigRational;
use proptest::prelude::*;

use sdhall::coeff::Coeff;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn any_prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5), Just(7)]
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(q in any_prime(), seed in (-20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20)) {
        let (a1, a2, b1, b2, c1, c2) = seed;
        let a = Coeff::from_parts(q, ratio(a1, 2), ratio(a2, 3));
        let b = Coeff::from_parts(q, ratio(b1, 3), ratio(b2, 4));
        let c = Coeff::from_parts(q, ratio(c1, 4), ratio(c2, 5));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_distributes(q in any_prime(), seed in (-20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20)) {
        let (a1, a2, b1, b2, c1, c2) = seed;
        let a = Coeff::from_parts(q, ratio(a1, 3), ratio(a2, 2));
        let b = Coeff::from_parts(q, ratio(b1, 5), ratio(b2, 4));
        let c = Coeff::from_parts(q, ratio(c1, 2), ratio(c2, 3));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_elements_invert(q in any_prime(), seed in (-10i64..=10, -10i64..=10)) {
        let (r, s) = seed;
        let x = Coeff::from_parts(q, ratio(r, 3), ratio(s, 2));
        match x.inv() {
            Some(inv) => prop_assert!((&x * &inv).is_one()),
            None => prop_assert!(x.is_zero()),
        }
    }

    #[test]
    fn v_powers_form_a_group(q in any_prime(), a in -12i64..=12, b in -12i64..=12) {
        let va = Coeff::v_pow(q, a);
        let vb = Coeff::v_pow(q, b);
        prop_assert_eq!(&va * &vb, Coeff::v_pow(q, a + b));
        prop_assert!((&va * &Coeff::v_pow(q, -a)).is_one());
        // v^2 = q exactly.
        prop_assert_eq!(Coeff::v_pow(q, 2), Coeff::from_int(q, q as i64));
    }
}
