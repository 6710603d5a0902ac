use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::rational::{int, Rational};
use crate::exact::{upoly, MultiPoly, Var};
use crate::series::laurent::falling;
use crate::series::LaurentSeries;

/// Indices at a singular point, sorted, and their gaps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexData {
    #[serde(serialize_with = "crate::exact::rational::text_vec::serialize")]
    pub indices: Vec<Rational>,
    /// Factor of the indicial polynomial without rational roots (ascending
    /// coefficients); empty or constant when every root is rational.
    #[serde(serialize_with = "crate::exact::rational::text_vec::serialize")]
    pub unresolved: Vec<Rational>,
}

impl IndexData {
    pub fn from_indices(mut indices: Vec<Rational>) -> Self {
        indices.sort();
        IndexData { indices, unresolved: Vec::new() }
    }

    pub fn is_resolved(&self) -> bool {
        upoly::degree(&self.unresolved).unwrap_or(0) == 0
    }

    /// `m_j - m_(j-1)`.
    pub fn gaps(&self) -> Vec<Rational> {
        self.indices.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

/// `P(s) = (s)_n + b_2 (s)_(n-2) + ... + b_n` as ascending coefficients.
pub fn indicial_from_b(n: usize, b: &[Rational]) -> Vec<Rational> {
    // b[i] is b_(i+2)
    let mut p = vec![Rational::zero(); n + 1];
    let add = |p: &mut Vec<Rational>, scale: &Rational, k: usize| {
        // add scale * (s)_k
        let mut f = vec![Rational::one()];
        for i in 0..k {
            f = upoly::mul(&f, &[-int(i as i64), Rational::one()]);
        }
        for (j, c) in f.iter().enumerate() {
            p[j] += scale * c;
        }
    };
    add(&mut p, &Rational::one(), n);
    for (i, bi) in b.iter().enumerate() {
        let k = n - (i + 2);
        add(&mut p, bi, k);
    }
    upoly::trim(p)
}

/// Leading Laurent coefficients `b_i` (coefficient of `z^-i` in the
/// coefficient of `D^(n-i)`), checking the Fuchsian bound.
pub fn leading_coefficients(op: &DiffOp<LaurentSeries>) -> Result<Vec<Rational>> {
    let n = op.order();
    if !op.is_monic() {
        return Err(Error::InvalidInput("operator must be monic".into()));
    }
    if n >= 1 && !op.coeff(n - 1).is_zero() {
        return Err(Error::InvalidInput("the D^(n-1) coefficient must vanish".into()));
    }
    let mut b = Vec::new();
    for i in 2..=n {
        let a = op.coeff(n - i);
        if let Some(v) = a.valuation() {
            if v < -(i as i64) {
                return Err(Error::InvalidInput(format!(
                    "coefficient of D^{} has a pole of order {} > {i}",
                    n - i,
                    -v
                )));
            }
        }
        let c = a.coeff(-(i as i64))?;
        let c = c
            .constant_value()
            .ok_or_else(|| Error::InvalidInput(format!("leading coefficient {c} of D^{} is not a number", n - i)))?;
        b.push(c);
    }
    Ok(b)
}

/// Indicial polynomial of a local operator (as a polynomial in `m`) and the
/// rational roots found.
pub fn indicial_polynomial(op: &DiffOp<LaurentSeries>) -> Result<(MultiPoly, IndexData)> {
    let b = leading_coefficients(op)?;
    let p = indicial_from_b(op.order(), &b);
    Ok((MultiPoly::from_univariate(Var::M, &p), index_data(&p)))
}

pub fn index_data(p: &[Rational]) -> IndexData {
    let (indices, rest) = upoly::rational_roots(p);
    IndexData { indices, unresolved: rest }
}

/// `b_2..b_n` whose indicial polynomial has the given roots: expand
/// `prod (s - m_j)` in the falling-factorial basis.
pub fn b_from_indices(indices: &[Rational]) -> Result<Vec<Rational>> {
    let n = indices.len();
    let mut p = vec![Rational::one()];
    for m in indices {
        p = upoly::mul(&p, &[-m.clone(), Rational::one()]);
    }
    let mut rest = p;
    rest.resize(n + 1, Rational::zero());
    let mut beta = vec![Rational::zero(); n + 1];
    for k in (0..=n).rev() {
        let c = rest[k].clone();
        beta[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        let mut f = vec![Rational::one()];
        for i in 0..k {
            f = upoly::mul(&f, &[-int(i as i64), Rational::one()]);
        }
        for (j, x) in f.iter().enumerate() {
            rest[j] -= &c * x;
        }
    }
    if n >= 1 && !beta[n - 1].is_zero() {
        let want = Rational::from_integer((n * (n - 1) / 2).into());
        return Err(Error::InvalidInput(format!("indices must sum to {want} for an operator without D^(n-1) term")));
    }
    Ok((2..=n).map(|i| beta[n - i].clone()).collect())
}

/// Integers pairwise distinct modulo `n`. Returns the verdict and a reason.
pub fn homogeneous_integrable(idx: &IndexData, n: usize) -> (bool, &'static str) {
    if !idx.is_resolved() || idx.indices.len() != n {
        return (false, "non-rational indices");
    }
    if idx.indices.iter().any(|m| !m.is_integer()) {
        return (false, "non-integer indices");
    }
    let residues: BTreeSet<_> =
        idx.indices.iter().map(|m| m.to_integer().mod_floor(&num_bigint::BigInt::from(n))).collect();
    if residues.len() != n {
        return (false, "indices repeat a residue modulo n");
    }
    (true, "integers distinct modulo n")
}

/// `P(s)` evaluated from `b` (for checks).
pub fn eval_indicial(n: usize, b: &[Rational], s: &Rational) -> Rational {
    let mut acc = falling(s, n);
    for (i, bi) in b.iter().enumerate() {
        acc += bi * falling(s, n - (i + 2));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn lame_indices() {
        let p = indicial_from_b(2, &[int(-12)]);
        assert_eq!(index_data(&p).indices, ints(&[-3, 4]));
    }

    #[test]
    fn regular_point() {
        let p = indicial_from_b(4, &ints(&[0, 0, 0]));
        assert_eq!(index_data(&p).indices, ints(&[0, 1, 2, 3]));
    }

    #[test]
    fn third_order_roots() {
        let p = indicial_from_b(3, &ints(&[-3, 3]));
        assert_eq!(index_data(&p).indices, ints(&[-1, 1, 3]));
        assert_eq!(b_from_indices(&ints(&[-1, 1, 3])).unwrap(), ints(&[-3, 3]));
    }

    #[test]
    fn residues_mod_n() {
        let ok = IndexData::from_indices(ints(&[-1, 1, 3]));
        assert!(homogeneous_integrable(&ok, 3).0);
        let bad = IndexData::from_indices(ints(&[0, 0, 3]));
        assert!(!homogeneous_integrable(&bad, 3).0);
        for m in 0..6 {
            let l = IndexData::from_indices(ints(&[-m, m + 1]));
            assert!(homogeneous_integrable(&l, 2).0);
        }
        let half = index_data(&indicial_from_b(2, &[rat(-5, 2)]));
        assert!(!homogeneous_integrable(&half, 2).0);
    }
}
