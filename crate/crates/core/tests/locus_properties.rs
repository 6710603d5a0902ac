use std::collections::BTreeMap;

use fingap_core::exact::rational::int;
use fingap_core::exact::{RatFunc, Rational, Var};
use fingap_core::locus3::reference::r8_j;
use fingap_core::locus3::{constraints_for, cyclic_branch, solve_locus, CurveFamily, LocusBranch};
use num_traits::Signed;
use proptest::prelude::*;

/// Admissible `(q, r)` with `r <= 8` and `q <= r + 9`.
fn cell() -> impl Strategy<Value = (i64, i64)> {
    prop::sample::select(vec![1i64, 2, 4, 5, 7, 8]).prop_flat_map(|r| {
        let qs: Vec<i64> = (1..=r + 9).filter(|q| (q - r) % 3 == 0).collect();
        (prop::sample::select(qs), Just(r))
    })
}

/// The branch with `e` replaced by `-e`.
fn reflect(b: &LocusBranch) -> LocusBranch {
    let minus_e = -RatFunc::var(Var::E);
    let flip = |f: &RatFunc| f.substitute(Var::E, &minus_e).unwrap();
    let mut out = b.clone();
    out.assignments = b
        .assignments
        .iter()
        .map(|(v, f)| (*v, if *v == Var::E { -flip(f) } else { flip(f) }))
        .collect::<BTreeMap<_, _>>();
    out.square_relation = b.square_relation.as_ref().map(|(v, s)| (*v, flip(s)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cyclic_point_and_every_branch_annihilate((q, r) in cell()) {
        let (cs, branches) = solve_locus(q, r, CurveFamily::Generic).unwrap();
        prop_assert!(cyclic_branch(CurveFamily::Generic).satisfies(&cs));
        for b in branches.iter().filter(|b| b.is_consistent()) {
            prop_assert!(b.verified, "{}", b.describe());
            prop_assert!(b.satisfies(&cs), "{}", b.describe());
        }
        for b in branches.iter().filter(|b| !b.is_consistent()) {
            prop_assert!(!b.residual_conditions.is_empty());
        }
    }
}

#[test]
fn adjoint_swaps_q_and_r_with_e_reflected() {
    for r in [1i64, 2, 4, 5] {
        for q in (1..=r + 9).filter(|q| (q - r) % 3 == 0) {
            let (_, forward) = solve_locus(q, r, CurveFamily::Generic).unwrap();
            let backward = constraints_for(r, q).unwrap();
            for b in forward.iter().filter(|b| b.is_consistent()) {
                assert!(reflect(b).satisfies(&backward), "({q}, {r}) -> ({r}, {q}): {}", b.describe());
            }
            let (_, reverse) = solve_locus(r, q, CurveFamily::Generic).unwrap();
            let here = constraints_for(q, r).unwrap();
            for b in reverse.iter().filter(|b| b.is_consistent()) {
                assert!(reflect(b).satisfies(&here), "({r}, {q}) -> ({q}, {r}): {}", b.describe());
            }
        }
    }
}

#[test]
fn r8_j_denominator_is_positive() {
    let den = RatFunc::from_poly(r8_j().denom().clone());
    for q in 1..=60 {
        let vals: BTreeMap<Var, Rational> = [(Var::Q, int(q))].into_iter().collect();
        assert!(den.eval_rational(&vals).unwrap().is_positive(), "q = {q}");
    }
}
