use fingap_core::exact::rational::rat;
use fingap_core::exact::{Monomial, MultiPoly, Var};
use fingap_core::series::wp::wp_coefficients;
use fingap_core::series::{wp_series, EllipticElement, LaurentSeries};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = MultiPoly> {
    let term = (prop::sample::select(vec![Var::C, Var::E, Var::G2, Var::G3]), 0u32..=1, -4i64..=4, 1i64..=3)
        .prop_map(|(v, k, n, d)| MultiPoly::term(Monomial::var(v, k), rat(n, d)));
    prop::collection::vec(term, 0..3).prop_map(|ts| ts.iter().fold(MultiPoly::zero(), |acc, t| &acc + t))
}

fn element() -> impl Strategy<Value = EllipticElement> {
    (prop::collection::vec(coeff(), 0..4), prop::collection::vec(coeff(), 0..3))
        .prop_map(|(p0, p1)| EllipticElement::from_parts(p0, p1))
}

fn series() -> impl Strategy<Value = LaurentSeries> {
    (-3i64..=1, prop::collection::vec(coeff(), 1..6), 0i64..=4).prop_map(|(low, cs, extra)| {
        let order = low + cs.len() as i64 + extra;
        LaurentSeries::new(low, cs, order)
    })
}

/// Coefficients of `z^k` for `lo <= k < hi`, which must all be trusted.
fn window(s: &LaurentSeries, lo: i64, hi: i64) -> Vec<MultiPoly> {
    (lo..hi).map(|k| s.coeff(k).expect("inside the trusted range")).collect()
}

proptest! {
    #[test]
    fn leibniz_rule_in_the_elliptic_ring(x in element(), y in element()) {
        let lhs = x.mul(&y).derive();
        let rhs = x.derive().mul(&y).add(&x.mul(&y.derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_commutes_with_derivation(x in element()) {
        let order = 8;
        let d_then_expand = x.derive().to_series(order - 1);
        let expand_then_d = x.to_series(order).derivative();
        let lo = -(2 * 3 + 3 + 1);
        prop_assert_eq!(window(&d_then_expand, lo, order - 1), window(&expand_then_d, lo, order - 1));
    }

    #[test]
    fn expansion_is_a_ring_map(x in element(), y in element()) {
        let order = 6;
        let lo = -12;
        let prod = x.mul(&y).to_series(order);
        let series_prod = x.to_series(order + 12).mul(&y.to_series(order + 12));
        prop_assert_eq!(window(&prod, lo, order), window(&series_prod, lo, order));
    }

    #[test]
    fn series_leibniz(a in series(), b in series()) {
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        // derivation can only raise valuations, so the right side is trusted at least as far
        prop_assert!(rhs.order() >= lhs.order());
        let lo = a.low() + b.low() - 2;
        prop_assert_eq!(window(&lhs, lo, lhs.order()), window(&rhs, lo, lhs.order()));
    }

    #[test]
    fn product_truncation_is_tight(a in series(), b in series()) {
        let p = a.mul(&b);
        let va = a.valuation().unwrap_or(a.order());
        let vb = b.valuation().unwrap_or(b.order());
        prop_assert_eq!(p.order(), (va + b.order()).min(vb + a.order()));
        // nothing is reported at or beyond the truncation order
        prop_assert!(p.coeff(p.order()).is_err());
        prop_assert_eq!(a.add(&b).order(), a.order().min(b.order()));
    }
}

#[test]
fn wp_coefficients_are_weighted_homogeneous() {
    // coefficient of z^j has weight j + 2 with deg g2 = 4, deg g3 = 6
    let s = wp_series(30);
    for j in -2..30 {
        let c = s.coeff(j).unwrap();
        if !c.is_zero() {
            assert_eq!(c.homogeneous_weight(), Some(j + 2), "z^{j}: {c}");
        }
    }
    assert_eq!(wp_coefficients(12).len(), 12);
}
