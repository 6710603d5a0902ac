use std::collections::BTreeMap;

use fingap_core::exact::interpolate::rational_interpolate;
use fingap_core::exact::rational::{int, rat};
use fingap_core::exact::{solve_linear_over_field, Monomial, MultiPoly, RatFunc, Rational, Var};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const VARS: [Var; 3] = [Var::C, Var::E, Var::G2];

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u32..=2, VARS.len())
        .prop_map(|exps| Monomial::from_pairs(VARS.iter().copied().zip(exps).filter(|(_, k)| *k > 0)))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((monomial(), small_rational()), 0..4).prop_map(MultiPoly::from_terms)
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn rationals_are_reduced(n in -1000i64..1000, d in (-10_000i64..10_000).prop_filter("nonzero", |d| *d != 0)) {
        let r = rat(n, d);
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        if n == 0 {
            prop_assert!(r.denom().is_one());
        }
    }

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn no_stored_zero_coefficients(a in poly(), b in poly()) {
        for p in [&a + &b, &a - &b, &a * &b] {
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly(), b in poly(), x in poly(), y in poly()) {
        let map: BTreeMap<Var, MultiPoly> = [(Var::C, x), (Var::E, y)].into_iter().collect();
        let sub = |p: &MultiPoly| p.substitute_many(&map);
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
    }

    #[test]
    fn normalized_has_content_one(a in nonzero_poly()) {
        let n = a.normalized();
        prop_assert!(n.content().is_one());
        prop_assert!(n.leading_coeff().is_positive());
        // same polynomial up to a scalar
        prop_assert_eq!(n.scale(&(a.leading_coeff() / n.leading_coeff())), a);
    }

    #[test]
    fn weights_of_products_add(m1 in monomial(), m2 in monomial()) {
        prop_assert_eq!(m1.mul(&m2).weight(), m1.weight() + m2.weight());
    }

    #[test]
    fn text_round_trip(a in poly()) {
        prop_assert_eq!(MultiPoly::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn ratfunc_normal_form(n in poly(), d in nonzero_poly()) {
        let f = RatFunc::new(n.clone(), d.clone()).unwrap();
        prop_assert!(!f.denom().is_zero());
        prop_assert!(f.denom().leading_coeff().is_positive());
        prop_assert!(f.denom().content().is_one());
        // the value is unchanged: f * d == n
        prop_assert_eq!(&f * &RatFunc::from_poly(d), RatFunc::from_poly(n));
    }

    #[test]
    fn field_operations(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (x, y) = (RatFunc::new(a.clone(), b.clone()).unwrap(), RatFunc::new(c.clone(), a.clone()).unwrap());
        let q = x.checked_div(&y).unwrap();
        prop_assert_eq!(&q * &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn linear_solutions_back_substitute(
        entries in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..5),
        rhs_entries in prop::collection::vec(-3i64..=3, 4),
        use_param in any::<bool>(),
    ) {
        // A x = b over Q(e), with e entering through the last column
        let e = RatFunc::var(Var::E);
        let a: Vec<Vec<RatFunc>> = entries
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let k = RatFunc::constant(int(v));
                        if use_param && j == 2 { &k * &e } else { k }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<RatFunc> = (0..a.len())
            .map(|i| &RatFunc::constant(int(rhs_entries[i])) + &(if use_param { e.clone() } else { RatFunc::zero() }))
            .collect();
        let sol = solve_linear_over_field(&a, &b).unwrap();
        for c in &sol.conditions {
            prop_assert!(c.content().is_one());
            prop_assert!(c.leading_coeff().is_positive());
        }
        if sol.is_consistent() {
            for (row, rhs) in a.iter().zip(&b) {
                let lhs = row.iter().zip(&sol.solution).fold(RatFunc::zero(), |acc, (x, y)| &acc + &(x * y));
                prop_assert_eq!(lhs, rhs.clone());
            }
            for kernel in &sol.nullspace {
                for row in &a {
                    let lhs = row.iter().zip(kernel).fold(RatFunc::zero(), |acc, (x, y)| &acc + &(x * y));
                    prop_assert!(lhs.is_zero());
                }
            }
        }
    }

    #[test]
    fn interpolation_round_trip(
        num in prop::collection::vec(-5i64..=5, 1..4),
        den in prop::collection::vec(1i64..=4, 1..3),
    ) {
        // denominator with positive coefficients: no poles at the positive sample points
        let q = Var::Q;
        let to_poly = |cs: &[i64]| MultiPoly::from_univariate(q, &cs.iter().map(|&c| int(c)).collect::<Vec<_>>());
        let f = RatFunc::new(to_poly(&num), to_poly(&den)).unwrap();
        let (dn, dd) = (num.len() - 1, den.len() - 1);
        let points: Vec<(Rational, Rational)> = (1..=(dn + dd + 3) as i64)
            .map(|x| {
                let vals: BTreeMap<Var, Rational> = [(q, int(x))].into_iter().collect();
                (int(x), f.eval_rational(&vals).unwrap())
            })
            .collect();
        prop_assert_eq!(rational_interpolate(&points, dn, dd, q).unwrap(), f);
    }
}

#[test]
fn zero_is_zero_over_one() {
    let z = rat(0, -7);
    assert!(z.numer().is_zero() && z.denom().is_one());
    assert_eq!(RatFunc::new(MultiPoly::zero(), MultiPoly::var(Var::E)).unwrap().denom(), &MultiPoly::one());
}

#[test]
fn canonical_text() {
    let p = &MultiPoly::var(Var::C).scale(&int(9)) + &MultiPoly::var(Var::E).pow(2).scale(&int(3));
    assert_eq!(p.to_string(), "9*c + 3*e^2");
    assert_eq!(rat(6, -4).to_string(), "-3/2");
}
