use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rnlab::quadring::{QuadError, QuadInt};

const DS: [u64; 7] = [3, 5, 7, 11, 23, 47, 76];

fn element(d: u64) -> impl Strategy<Value = QuadInt> {
    (-10_000i64..10_000, -10_000i64..10_000).prop_map(move |(u, v)| {
        let v = if d % 4 == 3 { v } else { v & !1 };
        let u = if d % 4 == 3 { (u & !1) | (v & 1) } else { u & !1 };
        QuadInt::from_halves(u, v, d).unwrap()
    })
}

fn pair() -> impl Strategy<Value = (QuadInt, QuadInt)> {
    prop::sample::select(DS.to_vec()).prop_flat_map(|d| (element(d), element(d)))
}

// (u^2 + D v^2) / 4 computed from the printed halves
fn norm_oracle(u: i64, v: i64, d: u64) -> BigUint {
    let n: BigInt = BigInt::from(u) * u + BigInt::from(d) * BigInt::from(v) * v;
    (n / BigInt::from(4)).to_biguint().unwrap()
}

proptest! {
    #[test]
    fn norm_is_multiplicative((a, b) in pair()) {
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn norm_matches_oracle(d in prop::sample::select(DS.to_vec()), u in -5000i64..5000, v in -5000i64..5000) {
        let q = QuadInt::new(u, v, d).unwrap();
        prop_assert_eq!(q.norm(), norm_oracle(2 * u, 2 * v, d));
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((a, b) in pair()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(BigInt::from((&a * &a.conj()).norm()), BigInt::from(a.norm()).pow(2));
    }

    #[test]
    fn exact_division_round_trips((a, b) in pair()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn division_by_non_factor_is_rejected(d in prop::sample::select(DS.to_vec()), a in 1i64..500) {
        // 1 / (a + sqrt(-D)) is never integral for a >= 1
        let one = QuadInt::one(d).unwrap();
        let den = QuadInt::new(a, 1, d).unwrap();
        prop_assert_eq!(one.exact_div(&den), Err(QuadError::NotDivisible));
    }

    #[test]
    fn power_matches_repeated_product(d in prop::sample::select(DS.to_vec()), u in -30i64..30, e in 0u64..12) {
        let q = QuadInt::new(u, 1, d).unwrap();
        let mut acc = QuadInt::one(d).unwrap();
        for _ in 0..e {
            acc = &acc * &q;
        }
        prop_assert_eq!(q.pow(e), acc);
    }
}

#[test]
fn parity_violations_are_rejected() {
    // (1 + sqrt(-76))/2 is not integral since 76 is not 3 mod 4
    assert!(matches!(QuadInt::from_halves(1, 1, 76), Err(QuadError::ParityViolation { .. })));
    assert!(QuadInt::from_halves(1, 1, 7).is_ok());
    assert!(matches!(QuadInt::from_halves(1, 0, 7), Err(QuadError::ParityViolation { .. })));
    assert_eq!(QuadInt::new(1, 1, 49), Err(QuadError::SquareD(49)));
}

#[test]
fn mixed_rings_are_rejected() {
    let a = QuadInt::new(1, 1, 7).unwrap();
    let b = QuadInt::new(1, 1, 11).unwrap();
    assert_eq!(a.checked_mul(&b), Err(QuadError::MixedD(7, 11)));
}
