use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{int, Rational};
use crate::exact::{MultiPoly, Var};
use crate::operator::indicial::{eval_indicial, index_data, indicial_from_b, leading_coefficients};
use crate::operator::LocalOp;
use crate::series::laurent::falling;
use crate::series::LaurentSeries;

/// A recorded failure of the recursion at a resonance.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    /// Offset `k` with `P(m + k) = 0`.
    pub offset: usize,
    /// Coefficient of `z^(m+k-n)` in `(L - lambda) psi`; polynomial in
    /// lambda, the operator's parameters and earlier free parameters.
    pub poly: MultiPoly,
}

/// `psi = z^m (1 + f_1 z + ... + f_K z^K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusSeries {
    pub index: Rational,
    pub coeffs: Vec<MultiPoly>,
    /// Free parameter introduced at each resonance.
    pub free: Vec<(usize, Var)>,
    pub obstructions: Vec<Obstruction>,
}

impl FrobeniusSeries {
    /// The series `sum f_k z^k` (without the `z^m` factor).
    pub fn power_series(&self) -> LaurentSeries {
        LaurentSeries::new(0, self.coeffs.clone(), self.coeffs.len() as i64)
    }
}

/// Offsets `k >= 1` with `P(m + k) = 0`.
pub fn resonances(n: usize, b: &[Rational], index: &Rational) -> Vec<usize> {
    // only rational roots can differ from a rational index by an integer
    let roots = index_data(&indicial_from_b(n, b)).indices;
    let mut out: Vec<usize> = roots
        .iter()
        .map(|r| r - index)
        .filter(|d| d.is_integer() && d > &Rational::zero())
        .map(|d| d.to_integer().try_into().expect("resonance offset fits in usize"))
        .collect();
    out.dedup();
    out
}

/// Laurent coefficients `a_(i,j)` (`z^(-i+j)` in the coefficient of
/// `D^(n-i)`), for `2 <= i <= n`, `0 <= j <= depth`.
fn local_data(op: &LocalOp, depth: usize) -> Result<Vec<Vec<MultiPoly>>> {
    let n = op.order();
    let mut a = vec![Vec::new(); n + 1];
    for (i, row) in a.iter_mut().enumerate().skip(2) {
        let s = op.coeff(n - i);
        for j in 0..=depth {
            row.push(s.coeff(j as i64 - i as i64)?);
        }
    }
    Ok(a)
}

/// Power-series solution of `(L - lambda) psi = 0` from the index `index`,
/// up to offset `up_to`. Free parameters are numbered from `first_aux`.
pub fn frobenius_solve(op: &LocalOp, index: &Rational, up_to: usize, first_aux: u16) -> Result<FrobeniusSeries> {
    let n = op.order();
    let b = leading_coefficients(op)?;
    if !eval_indicial(n, &b, index).is_zero() {
        return Err(Error::InvalidInput(format!("{index} is not an index of the operator")));
    }
    let res = resonances(n, &b, index);
    if let Some(&deepest) = res.last() {
        if deepest > up_to {
            return Err(Error::Truncation {
                requested: format!("offset {deepest}"),
                available: format!("offset {up_to}"),
            });
        }
    }
    let a = local_data(op, up_to)?;
    let lambda = MultiPoly::var(Var::LAMBDA);

    let mut f = vec![MultiPoly::one()];
    let mut free = Vec::new();
    let mut obstructions = Vec::new();
    let mut next_aux = first_aux;
    for k in 1..=up_to {
        let mut rest = MultiPoly::zero();
        for j in 1..=k {
            let fk = &f[k - j];
            if fk.is_zero() {
                continue;
            }
            let s = index + int((k - j) as i64);
            let mut cj = MultiPoly::zero();
            for (i, ai) in a.iter().enumerate().skip(2) {
                if !ai[j].is_zero() {
                    cj += &ai[j].scale(&falling(&s, n - i));
                }
            }
            if !cj.is_zero() {
                rest += &(fk * &cj);
            }
        }
        if k >= n {
            rest -= &(&lambda * &f[k - n]);
        }
        let p = eval_indicial(n, &b, &(index + int(k as i64)));
        if p.is_zero() {
            let u = Var::aux(next_aux);
            next_aux += 1;
            free.push((k, u));
            obstructions.push(Obstruction { offset: k, poly: rest });
            f.push(MultiPoly::var(u));
        } else {
            f.push(rest.scale(&(-p.recip())));
        }
    }
    Ok(FrobeniusSeries { index: index.clone(), coeffs: f, free, obstructions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::operator::{localize, third_order_from_gaps, DiffOp};

    /// Apply `L - lambda` to `z^m * psi` directly and compare.
    fn check_residual(op: &LocalOp, s: &FrobeniusSeries) {
        let n = op.order() as i64;
        let m = s.index.to_integer();
        let m: i64 = m.try_into().unwrap();
        let k_max = s.coeffs.len() as i64 - 1;
        let psi = LaurentSeries::new(m, s.coeffs.clone(), m + k_max + 1);
        let lam = LaurentSeries::constant(MultiPoly::var(Var::LAMBDA), 100);
        let image = op.apply(&psi).sub(&lam.mul(&psi));
        for k in 0..=k_max {
            let got = image.coeff(m + k - n).unwrap();
            let want =
                s.obstructions.iter().find(|o| o.offset as i64 == k).map_or_else(MultiPoly::zero, |o| o.poly.clone());
            assert_eq!(got, want, "offset {k}");
        }
    }

    #[test]
    fn trivial_gap_obstruction_is_e() {
        let l = localize(&third_order_from_gaps(1, 1).unwrap(), 4);
        let s = frobenius_solve(&l, &int(1), 1, 1).unwrap();
        assert_eq!(s.obstructions.len(), 1);
        assert_eq!(s.obstructions[0].poly, MultiPoly::var(Var::E));
        check_residual(&l, &s);
    }

    #[test]
    fn regular_point_has_no_obstruction() {
        let one = LaurentSeries::one(12);
        let coeffs = vec![
            LaurentSeries::new(0, vec![MultiPoly::int(2), MultiPoly::var(Var::C)], 12),
            LaurentSeries::new(0, vec![MultiPoly::var(Var::E)], 12),
            LaurentSeries::zero(12),
            one,
        ];
        let op = DiffOp::new(coeffs);
        for m in 0..3 {
            let s = frobenius_solve(&op, &int(m), 8, 1).unwrap();
            assert!(s.obstructions.iter().all(|o| o.poly.is_zero()));
            check_residual(&op, &s);
        }
    }

    #[test]
    fn lame_resonance() {
        // D^2 - 2 z^-2 + c1 z: indices -1, 2, resonance at 3
        let u = LaurentSeries::new(
            -2,
            vec![MultiPoly::int(-2), MultiPoly::zero(), MultiPoly::zero(), MultiPoly::var(Var::C)],
            6,
        );
        let op = DiffOp::new(vec![u, LaurentSeries::zero(6), LaurentSeries::one(6)]);
        let s = frobenius_solve(&op, &int(-1), 3, 1).unwrap();
        assert_eq!(s.obstructions[0].offset, 3);
        let ob = &s.obstructions[0].poly;
        assert_eq!(ob.vars().into_iter().collect::<Vec<_>>(), vec![Var::C]);
        assert!(ob.is_monomial());
        check_residual(&op, &s);
        assert!(frobenius_solve(&op, &int(-1), 2, 1).is_err());
        assert!(frobenius_solve(&op, &rat(1, 2), 3, 1).is_err());
    }

    #[test]
    fn residuals_vanish_for_gap_family() {
        for (q, r) in [(2, 2), (4, 1), (5, 2)] {
            let l = localize(&third_order_from_gaps(q, r).unwrap(), (q + r + 2) as i64);
            let m0 = &crate::operator::gap_indices(q, r)[0];
            let s = frobenius_solve(&l, m0, (q + r) as usize, 1).unwrap();
            assert_eq!(s.free.len(), 2);
            check_residual(&l, &s);
        }
    }
}
