//! Randomized invariants: term-order laws, field axioms, order
//! multiplicativity, Groebner normal forms, and monotonicity of the
//! partial-sum operator on Hilbert functions.

use proptest::prelude::*;
use std::cmp::Ordering;

use desingular::diagram::{diagram_of_ideal, h_of_diagram, iterated_partial_sums};
use desingular::field::rat_int;
use desingular::{deglex_compare, GroundField, Ideal, Monomial, Polynomial};

fn monomial2() -> impl Strategy<Value = Monomial> {
    (0u32..5, 0u32..5).prop_map(|(a, b)| Monomial(vec![a, b]))
}

/// Sparse polynomial in two variables over Q with small support.
fn poly2() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((0u32..4, 0u32..4, -5i64..6), 1..5).prop_map(|terms| {
        let field = GroundField::rationals();
        let vars = vec!["x".to_string(), "y".to_string()];
        let mut p = Polynomial::zero(field.clone(), vars);
        for (a, b, c) in terms {
            p = p.add_term(Monomial(vec![a, b]), field.from_rat(rat_int(c)));
        }
        p
    })
}

fn qt_elem() -> impl Strategy<Value = (GroundField, desingular::FieldElem)> {
    proptest::collection::vec((0u32..3, -4i64..5), 1..4).prop_map(|terms| {
        let field = GroundField::fraction(vec!["t".into()], vec![], false).unwrap();
        let mut e = field.zero();
        for (k, c) in terms {
            let t = field.param("t").unwrap();
            let mut pow = field.one();
            for _ in 0..k {
                pow = field.mul(&pow, &t);
            }
            let term = field.mul(&field.from_rat(rat_int(c)), &pow);
            e = field.add(&e, &term);
        }
        (field, e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deglex_is_a_total_order(a in monomial2(), b in monomial2(), c in monomial2()) {
        let ab = deglex_compare(&a, &b).unwrap();
        let ba = deglex_compare(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(deglex_compare(&a, &a).unwrap(), Ordering::Equal);
        // transitivity on the sampled triple
        if ab != Ordering::Greater && deglex_compare(&b, &c).unwrap() != Ordering::Greater {
            prop_assert_ne!(deglex_compare(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn deglex_respects_multiplication(a in monomial2(), b in monomial2(), m in monomial2()) {
        let before = deglex_compare(&a, &b).unwrap();
        let after = deglex_compare(&a.mul(&m), &b.mul(&m)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn function_field_axioms((field, a) in qt_elem(), (_, b) in qt_elem(), (_, c) in qt_elem()) {
        let left = field.mul(&field.add(&a, &b), &c);
        let right = field.add(&field.mul(&a, &c), &field.mul(&b, &c));
        prop_assert!(field.eq(&left, &right));
        if !field.is_zero(&a) {
            let inv = field.inv(&a).unwrap();
            prop_assert!(field.is_one(&field.mul(&a, &inv)));
        }
        prop_assert!(field.is_zero(&field.sub(&a, &a)));
    }

    #[test]
    fn order_is_multiplicative(f in poly2(), g in poly2()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let fg = f.mul(&g);
        prop_assert_eq!(
            fg.min_degree(),
            Some(f.min_degree().unwrap() + g.min_degree().unwrap())
        );
        prop_assert_eq!(
            fg.degree(),
            Some(f.degree().unwrap() + g.degree().unwrap())
        );
    }

    #[test]
    fn groebner_normal_forms_vanish_on_the_ideal(
        f in poly2(), g in poly2(), h in poly2()
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let field = GroundField::rationals();
        let vars = vec!["x".to_string(), "y".to_string()];
        let ideal = Ideal::new(field, vars, vec![f.clone(), g.clone()]).unwrap();
        // every generator reduces to zero, and so does any combination
        prop_assert!(ideal.contains(&f).unwrap());
        prop_assert!(ideal.contains(&g).unwrap());
        prop_assert!(ideal.contains(&f.mul(&h).add(&g)).unwrap());
    }

    #[test]
    fn diagram_h_is_nondecreasing(f in poly2(), g in poly2()) {
        prop_assume!(!f.is_zero());
        let field = GroundField::rationals();
        let vars = vec!["x".to_string(), "y".to_string()];
        let ideal = Ideal::new(field, vars, vec![f, g]).unwrap();
        let diagram = diagram_of_ideal(&ideal, 8).unwrap();
        let h: Vec<u64> = (0..=8).map(|k| h_of_diagram(&diagram, k)).collect();
        for w in h.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn partial_sums_preserve_monotone_growth(
        values in proptest::collection::vec(0u64..50, 1..9),
        times in 1u32..4
    ) {
        let mut sorted = values.clone();
        sorted.sort();
        let out = iterated_partial_sums(&sorted, times);
        prop_assert_eq!(out.len(), sorted.len());
        for w in out.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        // one application agrees with a direct running sum
        let once = iterated_partial_sums(&sorted, 1);
        let mut acc = 0;
        for (i, v) in sorted.iter().enumerate() {
            acc += v;
            prop_assert_eq!(once[i], acc);
        }
    }
}
