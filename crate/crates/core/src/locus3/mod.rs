//! The locus of third-order operators `D^3 + a P D + b P' + c D + e` with
//! trivial monodromy, for gap pairs `(q, r)`.

pub mod curve;
pub mod grid;
pub mod quantity;
pub mod reconstruct;
pub mod reference;
pub mod solve;

pub use curve::CurveFamily;
pub use grid::{grid_cell, scan_grid, GridCell, GridRow};
pub use quantity::{j_invariant, JValue, Quantity};
pub use reconstruct::{branch_value, reconstruct_in_q};
pub use solve::{cyclic_branch, triangular_solve, Classification, LocusBranch};

use crate::error::Result;
use crate::monodromy::{trivial_monodromy_constraints, ConstraintSet, Mode};
use crate::operator::global::check_gaps;
use crate::operator::{localize, third_order_from_gaps};

/// Trivial-monodromy conditions for the operator with gaps `(q, r)`, taken
/// from the middle Frobenius solution.
pub fn constraints_for(q: i64, r: i64) -> Result<ConstraintSet> {
    check_gaps(q, r)?;
    let op = localize(&third_order_from_gaps(q, r)?, q + r + 8);
    let out = trivial_monodromy_constraints(&op, Mode::MiddleOnly)?;
    Ok(out.constraints().expect("valid gaps give integer indices").clone())
}

/// Constraints and solved branches in one call.
pub fn solve_locus(q: i64, r: i64, curve: CurveFamily) -> Result<(ConstraintSet, Vec<LocusBranch>)> {
    let cs = constraints_for(q, r)?;
    let branches = triangular_solve(&cs, curve);
    Ok((cs, branches))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::exact::{MultiPoly, RatFunc, Rational, Var};
    use std::collections::BTreeMap;

    fn at(f: &RatFunc, q: i64) -> Rational {
        f.substitute(Var::Q, &RatFunc::constant(int(q))).unwrap().constant_value().unwrap()
    }

    fn classes(bs: &[LocusBranch]) -> Vec<Classification> {
        bs.iter().map(|b| b.classification).collect()
    }

    #[test]
    fn r1_forces_e() {
        for q in [1, 4, 7] {
            let cs = constraints_for(q, 1).unwrap();
            assert_eq!(cs.polys().cloned().collect::<Vec<_>>(), vec![MultiPoly::var(Var::E)]);
        }
    }

    #[test]
    fn every_branch_verifies() {
        for (q, r) in [(2, 2), (5, 2), (7, 4), (8, 5), (10, 7), (11, 8), (13, 10)] {
            let (cs, bs) = solve_locus(q, r, CurveFamily::Generic).unwrap();
            assert_eq!(bs[0].classification, Classification::CyclicPoint);
            for b in bs.iter().filter(|b| b.is_consistent()) {
                assert!(b.verified && b.satisfies(&cs), "(q, r) = ({q}, {r}): {}", b.describe());
            }
        }
    }

    #[test]
    fn branch_structure() {
        use Classification::*;
        let expect: [(i64, Vec<Classification>); 8] = [
            (2, vec![CyclicPoint, OneParameterFamily]),
            (4, vec![CyclicPoint, FiniteSet]),
            (5, vec![CyclicPoint, FiniteSet, FiniteSet]),
            (7, vec![CyclicPoint, FiniteSet]),
            (8, vec![CyclicPoint, ExoticJ]),
            (10, vec![CyclicPoint, ExoticJ]),
            (11, vec![CyclicPoint, Inconsistent]),
            (13, vec![CyclicPoint, ExoticJ]),
        ];
        for (r, want) in expect {
            let (_, bs) = solve_locus(r, r, CurveFamily::Generic).unwrap();
            assert_eq!(classes(&bs), want, "r = {r}");
        }
    }

    #[test]
    fn r11_witness_is_power_of_e() {
        let (_, bs) = solve_locus(11, 11, CurveFamily::Generic).unwrap();
        let bad = bs.iter().find(|b| b.classification == Classification::Inconsistent).unwrap();
        let w = &bad.residual_conditions[0];
        assert!(w.is_monomial());
        assert_eq!(w.degree_in(Var::E), 11);
    }

    #[test]
    fn closed_forms_at_small_q() {
        for q in [2, 5, 8] {
            assert_eq!(branch_value(q, 2, Quantity::COverE2).unwrap(), at(&reference::r2_c_over_e2(), q));
        }
        for q in [5, 8] {
            assert_eq!(branch_value(q, 5, Quantity::G2OverE4).unwrap(), at(&reference::r5_g2_over_e4(), q));
        }
        assert_eq!(branch_value(7, 7, Quantity::C2OverG2).unwrap(), at(&reference::r7_c2_over_g2(), 7));
        assert_eq!(branch_value(11, 8, Quantity::J).unwrap(), at(&reference::r8_j(), 11));
    }

    #[test]
    fn r8_constant_term() {
        let got = branch_value(8, 8, Quantity::G2OverE4).unwrap();
        assert_eq!(got, at(&reference::r8_g2_over_e4(), 8));
        assert_ne!(got, at(&reference::r8_g2_over_e4_with(reference::R8_P8_SHORT_CONSTANT), 8));
    }

    #[test]
    fn cyclic_point_annihilates() {
        let zero: BTreeMap<Var, RatFunc> =
            [(Var::C, RatFunc::zero()), (Var::E, RatFunc::zero()), (Var::G2, RatFunc::zero())].into();
        for (r, q) in grid::grid_pairs(1..=11, 6) {
            assert!(constraints_for(q, r).unwrap().annihilated_by(&zero).unwrap(), "({q}, {r})");
        }
    }

    #[test]
    fn degenerate_curves() {
        let (_, bs) = solve_locus(5, 2, CurveFamily::Cuspidal).unwrap();
        assert!(bs.iter().any(|b| b.classification == Classification::OneParameterFamily));
        let (_, bs) = solve_locus(7, 4, CurveFamily::Cuspidal).unwrap();
        assert_eq!(classes(&bs), vec![Classification::CyclicPoint]);
        let (_, bs) = solve_locus(5, 2, CurveFamily::Nodal).unwrap();
        let fam = bs.iter().find(|b| b.classification == Classification::OneParameterFamily).unwrap();
        assert_eq!(fam.j(), Some(JValue::Infinite));
    }

    #[test]
    fn adjoint_swaps_gaps() {
        let flip: BTreeMap<Var, RatFunc> = [(Var::E, -RatFunc::var(Var::E))].into();
        let key = |b: &LocusBranch, flip_e: bool| {
            let a: Vec<String> = b
                .assignments
                .iter()
                .map(|(v, x)| {
                    let x = if flip_e { x.substitute_many(&flip).unwrap() } else { x.clone() };
                    format!("{v}={x}")
                })
                .collect();
            (b.classification, a.join(","), b.square_relation.as_ref().map(|(v, s)| format!("{v}^2={s}")))
        };
        for (r, q) in grid::grid_pairs(1..=5, 9) {
            let mut ours: Vec<_> =
                solve_locus(q, r, CurveFamily::Generic).unwrap().1.iter().map(|b| key(b, true)).collect();
            let mut theirs: Vec<_> =
                solve_locus(r, q, CurveFamily::Generic).unwrap().1.iter().map(|b| key(b, false)).collect();
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs, "({q}, {r})");
        }
    }
}
