use std::collections::BTreeMap;

use fingap_core::exact::rational::{int, rat};
use fingap_core::exact::{MultiPoly, RatFunc, Rational, Var};
use fingap_core::locus3::constraints_for;
use fingap_core::locus3::reference::published_branches;
use fingap_core::monodromy::special::{second_order_local, third_order_local};
use fingap_core::monodromy::{second_order_conditions, trivial_monodromy_constraints, two_gap_conditions, Mode};
use fingap_core::operator::{localize, third_order_from_gaps};
use fingap_core::series::LaurentSeries;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn constants(xs: &[Rational]) -> Vec<MultiPoly> {
    xs.iter().map(|x| MultiPoly::constant(x.clone())).collect()
}

/// `-m(m+1) z^-2 + sum_j c_j z^j`; with `clear_odd` the odd `c_j` below
/// `2m` vanish except possibly the one at `spoil`.
fn second_order_data() -> impl Strategy<Value = (u32, LaurentSeries)> {
    (1u32..=4)
        .prop_flat_map(|m| {
            let top = 2 * m as usize + 2;
            (
                Just(m),
                prop::collection::vec(small_rational(), top + 1),
                any::<bool>(),
                prop::option::of((0..m as usize, nonzero_rational())),
            )
        })
        .prop_map(|(m, mut c, clear_odd, spoil)| {
            if clear_odd {
                for j in (1..2 * m as usize).step_by(2) {
                    c[j] = int(0);
                }
                if let Some((j, x)) = spoil {
                    c[2 * j + 1] = x;
                }
            }
            let mi = m as i64;
            let mut coeffs = vec![MultiPoly::int(-mi * (mi + 1)), MultiPoly::zero()];
            coeffs.extend(constants(&c));
            let order = c.len() as i64 + 1;
            (m, LaurentSeries::new(-2, coeffs, order))
        })
}

/// Laurent data `(a, b)` for indices (-1, 1, 3); on the locus when `on` and
/// not spoiled.
fn two_gap_data() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
    (
        prop::collection::vec(small_rational(), 7),
        prop::collection::vec(small_rational(), 7),
        any::<bool>(),
        prop::option::of((0usize..2, nonzero_rational())),
    )
        .prop_map(|(mut a, mut b, on, spoil)| {
            a[0] = int(-3);
            b[0] = int(3);
            if on {
                a[1] = int(0);
                b[2] = int(0);
                a[2] = -(&b[1] * &b[1]) / int(3);
                b[4] = &a[4] + &b[1] * &a[3] / int(3);
                match spoil {
                    Some((0, x)) => a[1] = x,
                    Some((_, x)) => b[4] += x,
                    None => {}
                }
            }
            (a, b)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_order_engine_matches_the_odd_coefficient_lemma((m, u) in second_order_data()) {
        let lemma = second_order_conditions(m, &u).unwrap().is_empty();
        let frob = trivial_monodromy_constraints(&second_order_local(u), Mode::Full).unwrap().is_trivial();
        prop_assert_eq!(lemma, frob);
    }

    #[test]
    fn two_gap_engine_matches_the_four_conditions((a, b) in two_gap_data()) {
        let (ap, bp) = (constants(&a), constants(&b));
        let lemma = two_gap_conditions(&ap, &bp).unwrap().is_empty();
        let op = third_order_local(LaurentSeries::new(-2, ap, 5), LaurentSeries::new(-3, bp, 4));
        let frob = trivial_monodromy_constraints(&op, Mode::Full).unwrap().is_trivial();
        prop_assert_eq!(lemma, frob);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Points of the middle-index locus satisfy every condition of the full
    /// computation.
    #[test]
    fn middle_only_solutions_solve_the_full_system(
        pair in prop::sample::select(vec![(1i64, 1i64), (4, 1), (2, 2), (5, 2), (4, 4), (5, 5)]),
        which in 0usize..2,
        free in prop::collection::vec(nonzero_rational(), 4),
    ) {
        let (q, r) = pair;
        let branches = published_branches(q, r).unwrap();
        let branch = &branches[which % branches.len()];
        let mut vals: BTreeMap<Var, RatFunc> = BTreeMap::new();
        for (v, x) in [Var::C, Var::E, Var::G2, Var::G3].into_iter().zip(&free) {
            if !branch.assignments.contains_key(&v) {
                vals.insert(v, RatFunc::constant(x.clone()));
            }
        }
        for (v, f) in &branch.assignments {
            vals.insert(*v, f.substitute_many(&vals).unwrap());
        }
        let subst: BTreeMap<Var, MultiPoly> = vals.iter().map(|(v, f)| (*v, f.to_poly().unwrap())).collect();
        let op = localize(&third_order_from_gaps(q, r).unwrap(), q + r + 8)
            .map(|s| s.map_coeffs(|p| p.substitute_many(&subst)));
        let middle = trivial_monodromy_constraints(&op, Mode::MiddleOnly).unwrap();
        let full = trivial_monodromy_constraints(&op, Mode::Full).unwrap();
        prop_assert!(middle.is_trivial());
        prop_assert!(full.is_trivial());
    }
}

#[test]
fn lambda_degree_is_r_over_three() {
    for r in [1i64, 2, 4, 5, 7, 8, 10] {
        let cs = constraints_for(r, r).unwrap();
        assert_eq!(cs.max_lambda_degree(), Some((r / 3) as u32), "r = {r}");
    }
}

#[test]
fn conditions_are_weighted_homogeneous() {
    // the condition at lambda-degree d has weight r - 3d
    for r in [1i64, 2, 4, 5, 7, 8] {
        for q in [r, r + 3] {
            let cs = constraints_for(q, r).unwrap();
            assert!(cs.weights_consistent(r), "(q, r) = ({q}, {r})");
            for p in cs.polys() {
                assert!(p.content() == int(1) && !p.leading_coeff().is_zero());
            }
        }
    }
}
