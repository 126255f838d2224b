//! Randomized algebraic identities for the polynomial kernel and Gröbner
//! reduction.

use proptest::prelude::*;

use crate::groebner::{Budget, Ideal};
use crate::poly::{ratio, Monomial, MonomialOrder, Polynomial, Rational, Ring, RingContext};

fn ring(order: MonomialOrder) -> Ring {
    RingContext::new(&["x", "y", "z"], order).unwrap()
}

fn poly(ring: Ring, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, 3), -5i64..=5, 1i64..=3),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            &ring,
            terms
                .into_iter()
                .map(|(e, a, b)| (Monomial::new(e), ratio(a, b))),
        )
    })
}

fn any_order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::GrevLex), Just(MonomialOrder::Lex)]
}

fn with_ring<S: Strategy>(
    f: impl Fn(Ring) -> S + Clone + 'static,
) -> impl Strategy<Value = (Ring, S::Value)> {
    any_order().prop_flat_map(move |o| {
        let r = ring(o);
        (Just(r.clone()), f(r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form((r, p) in with_ring(|r| poly(r, 4, 6))) {
        let terms = p.terms();
        for w in terms.windows(2) {
            prop_assert_eq!(r.order().compare(&w[0].0, &w[1].0), std::cmp::Ordering::Greater);
        }
        prop_assert!(terms.iter().all(|(_, c)| *c != Rational::from_integer(0.into())));
        prop_assert_eq!(Polynomial::parse(&p.to_string(), &r).unwrap(), p);
    }

    #[test]
    fn ring_axioms((_, (a, b, c)) in with_ring(|r| (poly(r.clone(), 3, 4), poly(r.clone(), 3, 4), poly(r, 3, 4)))) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz_rule((_, (a, b)) in with_ring(|r| (poly(r.clone(), 3, 4), poly(r, 3, 4)))) {
        for v in ["x", "y", "z"] {
            let lhs = (&a * &b).partial_derivative(v).unwrap();
            let rhs = &(&a.partial_derivative(v).unwrap() * &b) + &(&a * &b.partial_derivative(v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reduction_is_sound(
        (r, (gens, p)) in with_ring(|r| (prop::collection::vec(poly(r.clone(), 2, 3), 1..=2), poly(r, 3, 4)))
    ) {
        let ideal = Ideal::new(&r, gens).unwrap();
        let gb = ideal.groebner(&Budget::default()).unwrap();
        let rem = gb.reduce(&p).unwrap();
        // p − rem ∈ I, and rem has no term divisible by a leading monomial.
        let diff = &p - &rem;
        let cof = ideal.lift(&diff, &Budget::default()).unwrap();
        prop_assert!(cof.is_some_and(|c| crate::groebner::verify_lift(&diff, ideal.generators(), &c)));
        for (m, _) in rem.terms() {
            prop_assert!(gb.polys().iter().all(|g| !g.leading_monomial().unwrap().divides(m)));
        }
        // reduction is idempotent and kills ideal elements
        prop_assert_eq!(gb.reduce(&rem).unwrap(), rem);
        for g in ideal.generators() {
            prop_assert!(gb.reduce(&(g * &p)).unwrap().is_zero());
        }
    }
}
