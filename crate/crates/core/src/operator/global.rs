use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::diffop::DiffOp;
use super::indicial::b_from_indices;
use crate::error::{Error, Result};
use crate::exact::parse::{parse_expr, Algebra};
use crate::exact::rational::{int, rat, Rational};
use crate::exact::{MultiPoly, Var};
use crate::series::{EllipticElement, LaurentSeries};

pub type EllipticOp = DiffOp<EllipticElement>;
pub type LocalOp = DiffOp<LaurentSeries>;

/// Indices `(m0, m1, m2)` for gaps `(q, r)` of a third-order operator.
pub fn gap_indices(q: i64, r: i64) -> [Rational; 3] {
    let q3 = rat(q, 3);
    let r3 = rat(r, 3);
    [int(1) - &q3 * int(2) - &r3, int(1) + &q3 - &r3, int(1) + &r3 * int(2) + &q3]
}

/// Check that `(q, r)` are admissible gaps.
pub fn check_gaps(q: i64, r: i64) -> Result<()> {
    let err = |reason: &str| Err(Error::InvalidGaps { q, r, reason: reason.into() });
    if q < 1 || r < 1 {
        return err("gaps must be positive");
    }
    if q % 3 == 0 || r % 3 == 0 {
        return err("gaps cannot be divisible by 3");
    }
    if (q - r).mod_floor(&3) != 0 {
        return err("gaps must be congruent modulo 3");
    }
    Ok(())
}

/// `(a, b)` in `D^3 + (aP + c) D + (bP' + eP)` for the given indices:
/// `a = e2(m) - 2`, `b = m0 m1 m2 / 2`.
pub fn third_order_params(m: &[Rational; 3]) -> (Rational, Rational) {
    let e2 = &m[0] * &m[1] + &m[0] * &m[2] + &m[1] * &m[2];
    let e3 = &m[0] * &m[1] * &m[2];
    (e2 - int(2), e3 / int(2))
}

/// `D^3 + (aP + c) D + (bP' + eP)` with `c`, `e` given as polynomials.
pub fn third_order(a: &Rational, b: &Rational, c: &MultiPoly, e: &MultiPoly) -> EllipticOp {
    let a2 = EllipticElement::wp().scale(&MultiPoly::constant(a.clone())).add(&EllipticElement::constant(c.clone()));
    let a3 = EllipticElement::wp_prime().scale(&MultiPoly::constant(b.clone())).add(&EllipticElement::wp().scale(e));
    DiffOp::new(vec![a3, a2, EllipticElement::zero(), EllipticElement::one()])
}

/// The third-order one-pole operator with gaps `(q, r)` and symbolic `c`, `e`.
pub fn third_order_from_gaps(q: i64, r: i64) -> Result<EllipticOp> {
    check_gaps(q, r)?;
    Ok(third_order_from_gaps_unchecked(q, r))
}

/// Same, without the congruence checks (indices may be non-integer).
pub fn third_order_from_gaps_unchecked(q: i64, r: i64) -> EllipticOp {
    let (a, b) = third_order_params(&gap_indices(q, r));
    third_order(&a, &b, &MultiPoly::var(Var::C), &MultiPoly::var(Var::E))
}

/// Which curve to specialize to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Generic,
    /// g2 = 0
    Equianharmonic,
    /// g3 = 0
    Lemniscatic,
}

impl CurveKind {
    pub fn specialize(&self, p: &MultiPoly) -> MultiPoly {
        match self {
            CurveKind::Generic => p.clone(),
            CurveKind::Equianharmonic => p.substitute_poly(Var::G2, &MultiPoly::zero()),
            CurveKind::Lemniscatic => p.substitute_poly(Var::G3, &MultiPoly::zero()),
        }
    }
}

/// Whether the rotational-symmetry argument covers `L(0)` of order `n` on this curve.
pub fn cyclic_symmetry_covered(n: usize, curve: CurveKind) -> bool {
    match n {
        2 => true,
        3 | 6 => curve == CurveKind::Equianharmonic,
        4 => curve == CurveKind::Lemniscatic,
        _ => false,
    }
}

/// Elliptic function whose Laurent expansion at 0 is exactly
/// `lead * z^-k + O(z)` (no other nonpositive powers).
pub fn pure_pole(k: usize, lead: &Rational) -> Result<EllipticElement> {
    if k == 1 {
        return Err(Error::InvalidInput("no elliptic function has a single simple pole".into()));
    }
    let mut acc = EllipticElement::zero();
    if k == 0 {
        return Ok(acc);
    }
    for p in (2..=k).rev() {
        let s = acc.to_series(1);
        let have = s.coeff(-(p as i64))?;
        let want = if p == k { MultiPoly::constant(lead.clone()) } else { MultiPoly::zero() };
        let diff = &want - &have;
        if diff.is_zero() {
            continue;
        }
        let (basis, leading) = if p % 2 == 0 {
            (EllipticElement::wp_pow(p / 2), int(1))
        } else {
            let mut p1 = vec![MultiPoly::zero(); (p - 3) / 2 + 1];
            p1[(p - 3) / 2] = MultiPoly::one();
            (EllipticElement::from_parts(Vec::new(), p1), int(-2))
        };
        acc = acc.add(&basis.scale(&diff.scale(&leading.recip())));
    }
    let acc = acc.without_constant();
    debug_assert!(acc.to_series(1).coeff(-1).unwrap().is_zero());
    Ok(acc)
}

/// The operator `L(0)`: coefficients `a_i = b_i z^-i + O(z)` with all other
/// nonpositive Laurent coefficients zero, on the chosen curve.
pub fn cyclic_l0(indices: &[Rational], curve: CurveKind) -> Result<EllipticOp> {
    let n = indices.len();
    if n < 2 {
        return Err(Error::InvalidInput("order must be at least 2".into()));
    }
    let b = b_from_indices(indices)?;
    let mut coeffs = vec![EllipticElement::zero(); n + 1];
    coeffs[n] = EllipticElement::one();
    for (i, bi) in b.iter().enumerate() {
        let i = i + 2;
        coeffs[n - i] = pure_pole(i, bi)?.map_coeffs(|p| curve.specialize(p));
    }
    Ok(DiffOp::new(coeffs))
}

/// Laurent expansion of every coefficient, trusted below `z^order`.
pub fn localize(op: &EllipticOp, order: i64) -> LocalOp {
    op.map_into(|c| c.to_series(order))
}

/// Specialize parameters in an elliptic operator (`var -> value`).
pub fn specialize(op: &EllipticOp, values: &[(Var, MultiPoly)]) -> EllipticOp {
    let map = values.iter().cloned().collect();
    op.map(|c| c.map_coeffs(|p| p.substitute_many(&map)))
}

/// Expression wrapper used to parse operator text such as
/// `D^3 + (-3*P + c)*D + (-3/2*P' + e*P)`; products are compositions.
#[derive(Clone, Debug)]
struct OpExpr(EllipticOp);

impl Algebra for OpExpr {
    fn from_rational(r: Rational) -> Self {
        OpExpr(DiffOp::multiplication(EllipticElement::constant(MultiPoly::constant(r))))
    }

    fn from_ident(name: &str) -> std::result::Result<Self, String> {
        if name == "D" {
            return Ok(OpExpr(DiffOp::d_power(1, &EllipticElement::one())));
        }
        if let Some(primes) = name.strip_prefix('P') {
            if primes.chars().all(|c| c == '\'') {
                let mut f = EllipticElement::wp();
                for _ in 0..primes.len() {
                    f = f.derive();
                }
                return Ok(OpExpr(DiffOp::multiplication(f)));
            }
        }
        match Var::from_name(name) {
            Some(v) if v != Var::WP && v != Var::DWP => {
                Ok(OpExpr(DiffOp::multiplication(EllipticElement::constant(MultiPoly::var(v)))))
            }
            _ => Err(format!("unknown symbol {name:?}")),
        }
    }

    fn add(self, o: Self) -> Self {
        OpExpr(self.0.add(&o.0))
    }

    fn neg(self) -> Self {
        OpExpr(self.0.neg())
    }

    fn mul(self, o: Self) -> std::result::Result<Self, String> {
        Ok(OpExpr(self.0.compose(&o.0)))
    }

    fn div(self, o: Self) -> std::result::Result<Self, String> {
        let c = (o.0.order() == 0)
            .then(|| o.0.coeff(0).constant_value())
            .flatten()
            .and_then(|p| p.constant_value())
            .filter(|c| !c.is_zero())
            .ok_or_else(|| "can only divide by nonzero numbers".to_string())?;
        Ok(OpExpr(self.0.scale(&c.recip())))
    }
}

/// Parse operator text. `D` is d/dz, `P`, `P'`, `P''`... are the Weierstrass
/// function and its derivatives; other identifiers are parameters.
pub fn parse_operator(s: &str) -> Result<EllipticOp> {
    Ok(parse_expr::<OpExpr>(s)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::indicial::{index_data, indicial_polynomial};

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn gap_examples() {
        for (q, r, m, a, b) in [
            (1, 1, [0, 1, 2], int(0), int(0)),
            (2, 2, [-1, 1, 3], int(-3), rat(-3, 2)),
            (4, 1, [-2, 2, 3], int(-6), int(-6)),
            (4, 4, [-3, 1, 5], int(-15), rat(-15, 2)),
        ] {
            let idx = gap_indices(q, r);
            assert_eq!(idx.to_vec(), ints(&m));
            assert_eq!(third_order_params(&idx), (a, b));
        }
        assert!(third_order_from_gaps(3, 3).is_err());
        assert!(third_order_from_gaps(2, 1).is_err());
    }

    #[test]
    fn localized_indices_match() {
        for (q, r) in [(1, 1), (2, 2), (4, 1), (5, 2), (7, 4)] {
            let l = third_order_from_gaps(q, r).unwrap();
            let (_, idx) = indicial_polynomial(&localize(&l, 4)).unwrap();
            assert_eq!(idx.indices, gap_indices(q, r).to_vec());
        }
    }

    #[test]
    fn adjoint_swaps_gaps() {
        let l = third_order_from_gaps(4, 1).unwrap();
        let (_, idx) = indicial_polynomial(&localize(&l.adjoint(), 4)).unwrap();
        let gaps: Vec<Rational> = idx.gaps();
        assert_eq!(gaps, ints(&[1, 4]));
        let expect: Vec<Rational> = gap_indices(4, 1).iter().rev().map(|m| int(2) - m).collect();
        assert_eq!(idx.indices, expect);
    }

    #[test]
    fn cyclic_operators() {
        let lame = cyclic_l0(&ints(&[-1, 2]), CurveKind::Generic).unwrap();
        assert_eq!(lame, parse_operator("D^2 - 2*P").unwrap());
        let third = cyclic_l0(&ints(&[-1, 1, 3]), CurveKind::Equianharmonic).unwrap();
        assert_eq!(third, parse_operator("D^3 - 3*P*D - 3/2*P'").unwrap());
        let four = cyclic_l0(&ints(&[-1, 1, 2, 4]), CurveKind::Generic).unwrap();
        for (i, k) in [(2usize, 2usize), (3, 1), (4, 0)] {
            let s = four.coeff(k).to_series(1);
            for j in (-(i as i64) + 1)..=0 {
                assert!(s.coeff(j).unwrap().is_zero(), "a_{i} has z^{j} term");
            }
        }
        let (_, idx) = indicial_polynomial(&localize(&four, 2)).unwrap();
        assert_eq!(idx.indices, ints(&[-1, 1, 2, 4]));
        let _ = index_data(&[int(1)]);
    }

    #[test]
    fn parse_round_trip() {
        let l = third_order_from_gaps(2, 2).unwrap();
        let text = l.to_string();
        assert_eq!(text, "D^3 + (-3*P + c)*D + (-3/2*P' + e*P)");
        assert_eq!(parse_operator(&text).unwrap(), l);
        // composition: D*P = P*D + P'
        let dp = parse_operator("D*P").unwrap();
        assert_eq!(dp, parse_operator("P*D + P'").unwrap());
    }
}
