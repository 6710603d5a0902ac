use std::collections::BTreeMap;

use num_integer::Integer;

use super::diffop::DiffOp;
use super::global::EllipticOp;
use crate::error::{Error, Result};
use crate::exact::{solve_linear_over_field, MultiPoly, RatFunc};
use crate::series::EllipticElement;

type Coords = BTreeMap<(usize, usize), MultiPoly>;

fn coordinates(op: &EllipticOp) -> Coords {
    let mut out = Coords::new();
    for (k, c) in op.coeffs().iter().enumerate() {
        for (idx, v) in c.coordinates() {
            out.insert((k, idx), v);
        }
    }
    out
}

fn monomial_op(f: &EllipticElement, k: usize) -> EllipticOp {
    let mut c = vec![EllipticElement::zero(); k + 1];
    c[k] = f.clone();
    DiffOp::new(c)
}

/// Search for `M = D^m + sum_i u_i D^(m-i)` with `[L, M] = 0`, where each
/// `u_i` is an elliptic function with pole order at most `pole_bound + i`
/// (default bound: `ord L + m`).
///
/// Returns `None` when the linear system has no solution for generic
/// parameters. A returned operator has been checked to commute exactly.
pub fn find_commuting(l: &EllipticOp, m: usize, pole_bound: Option<usize>) -> Result<Option<EllipticOp>> {
    let n = l.order();
    if m == 0 || m.gcd(&n) != 1 {
        return Err(Error::InvalidInput(format!("order {m} is not coprime to {n}")));
    }
    let bound = pole_bound.unwrap_or(n + m);

    let mut unknowns = Vec::new();
    let mut columns = Vec::new();
    for i in 1..=m {
        for b in EllipticElement::basis(bound + i) {
            columns.push(coordinates(&l.commutator(&monomial_op(&b, m - i))));
            unknowns.push((i, b));
        }
    }
    let one = EllipticElement::one();
    let rhs = coordinates(&l.commutator(&DiffOp::d_power(m, &one)).neg());

    let mut keys: Vec<(usize, usize)> = rhs.keys().copied().collect();
    for c in &columns {
        keys.extend(c.keys().copied());
    }
    keys.sort_unstable();
    keys.dedup();

    let to_rf = |p: Option<&MultiPoly>| p.map_or_else(RatFunc::zero, |p| RatFunc::from_poly(p.clone()));
    let a: Vec<Vec<RatFunc>> = keys.iter().map(|k| columns.iter().map(|c| to_rf(c.get(k))).collect()).collect();
    let b: Vec<RatFunc> = keys.iter().map(|k| to_rf(rhs.get(k))).collect();
    let sol = solve_linear_over_field(&a, &b)?;
    if !sol.is_consistent() {
        return Ok(None);
    }

    let mut coeffs = vec![EllipticElement::zero(); m + 1];
    coeffs[m] = one;
    for ((i, basis), x) in unknowns.iter().zip(&sol.solution) {
        if x.is_zero() {
            continue;
        }
        let x = x.to_poly().map_err(|_| Error::NonPolynomial(format!("commuting coefficient {x}")))?;
        coeffs[m - i] = coeffs[m - i].add(&basis.scale(&x));
    }
    let mop = DiffOp::new(coeffs);
    if !l.commutator(&mop).is_zero() {
        return Err(Error::InvalidInput("linear solution failed the commutator check".into()));
    }
    Ok(Some(mop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::global::parse_operator;

    #[test]
    fn lame_certificate() {
        let l = parse_operator("D^2 - 2*P").unwrap();
        let m = find_commuting(&l, 3, None).unwrap().unwrap();
        assert_eq!(m.order(), 3);
        assert_eq!(m, parse_operator("D^3 - 3*P*D - 3/2*P'").unwrap());
    }

    #[test]
    fn non_integer_lame_has_none() {
        let l = parse_operator("D^2 - 5/2*P").unwrap();
        assert!(find_commuting(&l, 3, None).unwrap().is_none());
    }

    #[test]
    fn constant_coefficients() {
        let l = parse_operator("D^3 + c*D").unwrap();
        assert_eq!(find_commuting(&l, 1, None).unwrap().unwrap(), parse_operator("D").unwrap());
        assert!(find_commuting(&l, 3, None).is_err());
    }
}
