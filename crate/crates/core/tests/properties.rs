//! Property tests: ring axioms on random small Laurent polynomials,
//! substitution identities, statistics positivity, and bit-exact
//! serialization round-trips.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rug::Rational;
use schreier_ising::poly::LaurentPoly;

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    // Up to 6 terms in two variables, exponents in -3..=3, coefficients in
    // -9..=9 (zero coefficients are dropped by construction).
    prop::collection::vec(((-3i32..=3), (-3i32..=3), (-9i64..=9)), 0..6).prop_map(|terms| {
        let vars = ["x", "y"];
        terms
            .into_iter()
            .fold(LaurentPoly::zero(&vars), |acc, (ex, ey, c)| {
                let m = LaurentPoly::monomial(&vars, "x", ex, c)
                    .mul(&LaurentPoly::monomial(&vars, "y", ey, 1));
                acc.add(&m)
            })
    })
}

fn arb_poly_nonneg_x() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((0i32..=3), (-3i32..=3), (-9i64..=9)), 0..6).prop_map(|terms| {
        let vars = ["x", "y"];
        terms
            .into_iter()
            .fold(LaurentPoly::zero(&vars), |acc, (ex, ey, c)| {
                let m = LaurentPoly::monomial(&vars, "x", ex, c)
                    .mul(&LaurentPoly::monomial(&vars, "y", ey, 1));
                acc.add(&m)
            })
    })
}

fn arb_nonneg_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((0i32..=5), (1i64..=9)), 1..6).prop_map(|terms| {
        let vars = ["x"];
        terms
            .into_iter()
            .fold(LaurentPoly::zero(&vars), |acc, (ex, c)| {
                acc.add(&LaurentPoly::monomial(&vars, "x", ex, c))
            })
    })
}

proptest! {
    #[test]
    fn addition_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
    }

    #[test]
    fn multiplication_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
    }

    #[test]
    fn multiplication_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
    }

    #[test]
    fn distributivity(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
    }

    #[test]
    fn one_is_neutral(p in arb_poly()) {
        let one = LaurentPoly::one(&["x", "y"]);
        prop_assert_eq!(p.mul(&one), p);
    }

    #[test]
    fn substitute_identity_is_identity(p in arb_poly()) {
        let x = LaurentPoly::var(&["x", "y"], "x");
        prop_assert_eq!(p.substitute("x", &x).unwrap(), p);
    }

    #[test]
    fn substitution_is_a_homomorphism(p in arb_poly_nonneg_x(), q in arb_poly_nonneg_x()) {
        // Substituting a non-monomial needs nonnegative exponents of the
        // substituted variable; y stays Laurent.
        let sub = LaurentPoly::one(&["x", "y"])
            .add(&LaurentPoly::var(&["x", "y"], "y"));
        let lhs = p.mul(&q).substitute("x", &sub).unwrap();
        let rhs = p.substitute("x", &sub).unwrap().mul(&q.substitute("x", &sub).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn variance_nonnegative(p in arb_nonneg_poly()) {
        let st = p.log_derivative_stats("x").unwrap();
        prop_assert!(st.variance >= 0);
    }

    #[test]
    fn json_round_trips_bit_exactly(p in arb_poly()) {
        let json = serde_json::to_string(&p.to_json()).unwrap();
        let parsed = LaurentPoly::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(&parsed, &p);
        prop_assert_eq!(serde_json::to_string(&parsed.to_json()).unwrap(), json);
    }

    #[test]
    fn rational_eval_matches_substitution(p in arb_nonneg_poly(), num in 1i64..5, den in 1i64..5) {
        let r = Rational::from((num, den));
        let mut asn = BTreeMap::new();
        asn.insert("x".to_string(), r.clone());
        let direct = p.eval_rational(&asn).unwrap();
        // Horner-free check: sum coefficient * r^k by hand.
        let mut expect = Rational::new();
        for (e, c) in p.sorted_terms() {
            let mut term = Rational::from(&c);
            for _ in 0..e[0] {
                term *= &r;
            }
            expect += term;
        }
        prop_assert_eq!(direct, expect);
    }
}
