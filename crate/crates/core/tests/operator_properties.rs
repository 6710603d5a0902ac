use fingap_core::exact::rational::{int, rat};
use fingap_core::exact::{MultiPoly, Rational, Var};
use fingap_core::operator::{
    cyclic_l0, find_commuting, indicial_polynomial, localize, parse_operator, third_order_from_gaps, CurveKind, DiffOp,
    EllipticOp,
};
use fingap_core::series::EllipticElement;
use num_traits::Zero;
use proptest::prelude::*;

fn element() -> impl Strategy<Value = EllipticElement> {
    let coeff = (prop::sample::select(vec![Var::C, Var::E, Var::G2]), -3i64..=3, 1i64..=2)
        .prop_map(|(v, n, d)| &MultiPoly::var(v).scale(&rat(n, d)) + &MultiPoly::int(n));
    (prop::collection::vec(coeff.clone(), 0..3), prop::collection::vec(coeff, 0..2))
        .prop_map(|(p0, p1)| EllipticElement::from_parts(p0, p1))
}

fn operator() -> impl Strategy<Value = EllipticOp> {
    (2usize..=4).prop_flat_map(|n| prop::collection::vec(element(), n)).prop_map(|mut cs| {
        cs.push(EllipticElement::one());
        DiffOp::new(cs)
    })
}

/// Admissible gap pairs: positive, congruent mod 3, not divisible by 3.
fn gaps() -> impl Strategy<Value = (i64, i64)> {
    (0i64..6, 0i64..6, any::<bool>()).prop_map(|(a, b, one)| {
        let base = if one { 1 } else { 2 };
        (base + 3 * a, base + 3 * b)
    })
}

/// Integer indices of an order-3 operator without a D^2 term, distinct mod 3.
fn cyclic_indices() -> impl Strategy<Value = Vec<Rational>> {
    (-5i64..=0, 1i64..=6)
        .prop_map(|(m0, step)| {
            let m1 = m0 + step;
            vec![m0, m1, 3 - m0 - m1]
        })
        .prop_filter("sorted, distinct mod 3", |m| {
            m[1] < m[2] && {
                let mut r: Vec<i64> = m.iter().map(|x| x.rem_euclid(3)).collect();
                r.sort();
                r.dedup();
                r.len() == 3
            }
        })
        .prop_map(|m| m.into_iter().map(int).collect())
}

fn indices_of(op: &EllipticOp) -> Vec<Rational> {
    let (_, data) = indicial_polynomial(&localize(op, 4)).unwrap();
    assert!(data.is_resolved());
    data.indices
}

proptest! {
    #[test]
    fn adjoint_is_an_involution(op in operator()) {
        prop_assert_eq!(op.adjoint().adjoint(), op);
    }

    #[test]
    fn gap_family_indices_sum_to_three((q, r) in gaps()) {
        let op = third_order_from_gaps(q, r).unwrap();
        let m = indices_of(&op);
        prop_assert_eq!(m.iter().fold(Rational::zero(), |a, x| a + x), int(3));
        prop_assert_eq!(&m[1] - &m[0], int(q));
        prop_assert_eq!(&m[2] - &m[1], int(r));
    }

    #[test]
    fn adjoint_reflects_indices((q, r) in gaps()) {
        let op = third_order_from_gaps(q, r).unwrap();
        let m = indices_of(&op);
        let adj = indices_of(&op.adjoint());
        let mut want: Vec<Rational> = m.iter().map(|x| int(2) - x).collect();
        want.sort();
        prop_assert_eq!(&adj, &want);
        // gaps swap
        prop_assert_eq!(&adj[1] - &adj[0], int(r));
        prop_assert_eq!(&adj[2] - &adj[1], int(q));
    }

    #[test]
    fn cyclic_operators_have_pure_poles(m in cyclic_indices()) {
        let op = cyclic_l0(&m, CurveKind::Equianharmonic).unwrap();
        let local = localize(&op, 2);
        let n = 3usize;
        for i in 2..=n {
            let a = local.coeff(n - i);
            for k in (1 - i as i64)..=0 {
                prop_assert!(a.coeff(k).unwrap().is_zero(), "a_{} has z^{}", i, k);
            }
        }
        let got = indices_of(&op);
        prop_assert_eq!(got.iter().fold(Rational::zero(), |a, x| a + x), int(3));
        prop_assert_eq!(got, m);
    }
}

#[test]
fn commuting_certificates_are_checked() {
    // Lame operators with integer m have odd-order partners
    for (spec, order) in [("D^2 - 2*P", 3), ("D^2 - 6*P", 5)] {
        let l = parse_operator(spec).unwrap();
        let m = find_commuting(&l, order, None).unwrap().expect("finite-gap operator");
        assert_eq!(m.order(), order);
        assert!(l.commutator(&m).is_zero(), "{spec}");
    }
}
