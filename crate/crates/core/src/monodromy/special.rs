//! Closed-form monodromy conditions for second-order operators and for
//! third-order operators with gaps 2, 2.

use super::constraints::{ConstraintSet, Source};
use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::MultiPoly;
use crate::operator::{DiffOp, LocalOp};
use crate::series::LaurentSeries;

/// `D^2 + u`.
pub fn second_order_local(u: LaurentSeries) -> LocalOp {
    let order = u.order();
    DiffOp::new(vec![u, LaurentSeries::zero(order), LaurentSeries::one(order)])
}

/// `D^3 + a D + b`.
pub fn third_order_local(a: LaurentSeries, b: LaurentSeries) -> LocalOp {
    let order = a.order().min(b.order());
    DiffOp::new(vec![b, a, LaurentSeries::zero(order), LaurentSeries::one(order)])
}

/// For `u = -m(m+1) z^-2 + sum_j c_j z^j`: the odd coefficients
/// `c_1, c_3, ..., c_(2m-1)`.
pub fn second_order_conditions(m: u32, u: &LaurentSeries) -> Result<ConstraintSet> {
    let m = m as i64;
    let principal = MultiPoly::int(-m * (m + 1));
    let wrong = u.valuation().is_some_and(|v| v < -2) || u.coeff(-2)? != principal || !u.coeff(-1)?.is_zero();
    if wrong {
        return Err(Error::InvalidInput(format!("principal part of u must be {principal}*z^-2")));
    }
    let mut cs = ConstraintSet::new(2);
    for k in 1..=m {
        cs.push(0, &u.coeff(2 * k - 1)?);
    }
    if m > 0 {
        cs.sources.push(Source { index: int(-m), offset: (2 * m + 1) as usize });
    }
    Ok(cs.finish())
}

/// For `a = sum_k a_k z^(k-2)`, `b = sum_k b_k z^(k-3)` with `a_0 = -3`,
/// `b_0 = 3` (indices -1, 1, 3): the conditions `a_1`, `b_2`,
/// `3 a_2 + b_1^2`, `3 b_4 - 3 a_4 - b_1 a_3`.
pub fn two_gap_conditions(a: &[MultiPoly], b: &[MultiPoly]) -> Result<ConstraintSet> {
    if a.len() < 5 || b.len() < 5 {
        return Err(Error::InvalidInput("need Laurent data a_0..a_4 and b_0..b_4".into()));
    }
    if a[0] != MultiPoly::int(-3) || b[0] != MultiPoly::int(3) {
        return Err(Error::InvalidInput("principal parts must be a_0 = -3, b_0 = 3".into()));
    }
    let three = MultiPoly::int(3);
    let mut cs = ConstraintSet::new(3);
    cs.q = Some(2);
    cs.r = Some(2);
    cs.push(1, &a[1]);
    cs.push(0, &b[2]);
    cs.push(0, &(&(&three * &a[2]) + &b[1].pow(2)));
    cs.push(0, &(&(&(&three * &b[4]) - &(&three * &a[4])) - &(&b[1] * &a[3])));
    Ok(cs.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Var;
    use crate::monodromy::constraints::{trivial_monodromy_constraints, Mode};

    fn u_series(m: i64, c: &[MultiPoly]) -> LaurentSeries {
        let mut coeffs = vec![MultiPoly::int(-m * (m + 1)), MultiPoly::zero()];
        coeffs.extend_from_slice(c);
        LaurentSeries::new(-2, coeffs, c.len() as i64)
    }

    fn syms(k: usize) -> Vec<MultiPoly> {
        (1..=k as u16).map(|i| MultiPoly::var(Var(20 + i))).collect()
    }

    #[test]
    fn odd_coefficients() {
        let c = syms(6);
        assert!(second_order_conditions(0, &u_series(0, &c)).unwrap().is_empty());
        let one = second_order_conditions(1, &u_series(1, &c)).unwrap();
        assert_eq!(one.polys().cloned().collect::<Vec<_>>(), vec![c[1].clone()]);
        let two = second_order_conditions(2, &u_series(2, &c)).unwrap();
        assert_eq!(two.len(), 2);
        assert!(second_order_conditions(2, &u_series(1, &c)).is_err());
    }

    #[test]
    fn symbolic_engine_matches_second_order_lemma() {
        // obstruction at m = 2 with symbolic c_j vanishes on c_1 = c_3 = 0
        let c = syms(6);
        let u = u_series(2, &c);
        let out = trivial_monodromy_constraints(&second_order_local(u), Mode::Full).unwrap();
        let cs = out.constraints().unwrap();
        let zero = [
            (c[1].vars().into_iter().next().unwrap(), MultiPoly::zero()),
            (c[3].vars().into_iter().next().unwrap(), MultiPoly::zero()),
        ]
        .into_iter()
        .collect();
        assert!(cs.specialize(&zero).is_empty());
        assert!(!cs.is_empty());
    }

    #[test]
    fn single_pole_two_gap() {
        // a_2 = c, b_1 = 3p, everything else zero: c = -3p^2
        let p = MultiPoly::var(Var::P);
        let c = MultiPoly::var(Var::C);
        let z = MultiPoly::zero();
        let a = [MultiPoly::int(-3), z.clone(), c, z.clone(), z.clone()];
        let b = [MultiPoly::int(3), p.scale(&int(3)), z.clone(), z.clone(), z];
        let cs = two_gap_conditions(&a, &b).unwrap();
        assert_eq!(cs.polys().cloned().collect::<Vec<_>>(), vec![MultiPoly::parse("c + 3*p^2").unwrap()]);
        assert!(two_gap_conditions(&b, &a).is_err());
    }
}
