use std::fmt;

use crate::exact::rational::{int, Rational};
use crate::exact::MultiPoly;
use crate::series::laurent::binomial;
use crate::series::{EllipticElement, LaurentSeries};

/// Coefficient ring of a differential operator: a commutative ring with a
/// derivation.
pub trait DiffRing: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn derive(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl DiffRing for EllipticElement {
    fn zero_like(&self) -> Self {
        EllipticElement::zero()
    }
    fn one_like(&self) -> Self {
        EllipticElement::one()
    }
    fn is_zero(&self) -> bool {
        EllipticElement::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
    fn add(&self, o: &Self) -> Self {
        EllipticElement::add(self, o)
    }
    fn neg(&self) -> Self {
        EllipticElement::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        EllipticElement::mul(self, o)
    }
    fn derive(&self) -> Self {
        EllipticElement::derive(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        EllipticElement::scale(self, &MultiPoly::constant(r.clone()))
    }
}

impl DiffRing for LaurentSeries {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.order())
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one(self.order())
    }
    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.shift() == &int(0)
            && (self.low().min(0)..self.order()).all(|k| {
                let c = self.coeff(k).unwrap();
                if k == 0 {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
    }
    fn add(&self, o: &Self) -> Self {
        LaurentSeries::add(self, o)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        LaurentSeries::mul(self, o)
    }
    fn derive(&self) -> Self {
        self.derivative()
    }
    fn scale(&self, r: &Rational) -> Self {
        LaurentSeries::scale(self, &MultiPoly::constant(r.clone()))
    }
}

/// `sum_k coeffs[k] * D^k`. Missing powers are stored as explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<R> {
    coeffs: Vec<R>,
}

impl<R: DiffRing> DiffOp<R> {
    /// Build from ascending coefficients (`coeffs[k]` multiplies `D^k`);
    /// trailing zeros are dropped but at least one entry is kept.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "an operator needs at least one coefficient");
        let mut op = DiffOp { coeffs };
        op.trim();
        op
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
    }

    /// `D^k` with coefficients modelled on `unit`.
    pub fn d_power(k: usize, unit: &R) -> Self {
        let mut c = vec![unit.zero_like(); k + 1];
        c[k] = unit.one_like();
        DiffOp { coeffs: c }
    }

    pub fn multiplication(f: R) -> Self {
        DiffOp { coeffs: vec![f] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `D^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(DiffRing::is_zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().unwrap().is_one()
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        DiffOp::new(self.coeffs.iter().map(f).collect())
    }

    pub fn map_into<S: DiffRing>(&self, f: impl Fn(&R) -> S) -> DiffOp<S> {
        DiffOp::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOp::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(DiffRing::neg)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    /// Left multiplication by a function.
    pub fn left_mul(&self, f: &R) -> Self {
        self.map(|c| f.mul(c))
    }

    /// Composition `self ∘ o` by the Leibniz rule.
    pub fn compose(&self, o: &Self) -> Self {
        let n = self.order();
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero.clone(); n + o.order() + 1];
        // derivatives of o's coefficients up to order n
        let mut ders: Vec<Vec<R>> = Vec::with_capacity(o.coeffs.len());
        for b in &o.coeffs {
            let mut d = Vec::with_capacity(n + 1);
            let mut cur = b.clone();
            for _ in 0..=n {
                d.push(cur.clone());
                cur = cur.derive();
            }
            ders.push(d);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, dj) in ders.iter().enumerate() {
                for (l, bl) in dj.iter().enumerate().take(i + 1) {
                    if bl.is_zero() {
                        continue;
                    }
                    let t = a.mul(bl).scale(&binomial(i, l));
                    out[i + j - l] = out[i + j - l].add(&t);
                }
            }
        }
        DiffOp::new(out)
    }

    /// `[self, o] = self∘o - o∘self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }

    /// `self(f) = sum_k a_k f^(k)`.
    pub fn apply(&self, f: &R) -> R {
        let mut acc = f.zero_like();
        let mut d = f.clone();
        for a in &self.coeffs {
            if !a.is_zero() {
                acc = acc.add(&a.mul(&d));
            }
            d = d.derive();
        }
        acc
    }

    /// Formal adjoint `sum_k (-D)^k ∘ a_k`, multiplied by `(-1)^n` so that a
    /// monic operator stays monic.
    pub fn adjoint(&self) -> Self {
        let n = self.order();
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; n + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            let mut der = a.clone();
            for l in 0..=k {
                if !der.is_zero() {
                    // (-1)^k C(k,l) a^(l) D^(k-l)
                    let sign = if (k + n).is_multiple_of(2) { 1 } else { -1 };
                    let t = der.scale(&(binomial(k, l) * int(sign)));
                    out[k - l] = out[k - l].add(&t);
                }
                der = der.derive();
            }
        }
        DiffOp::new(out)
    }
}

impl<R: DiffRing> fmt::Display for DiffOp<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let d = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            parts.push(match (c.is_one(), k) {
                (true, 0) => "1".to_string(),
                (true, _) => d,
                (false, 0) => format!("({c})"),
                (false, _) => format!("({c})*{d}"),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn el(s: &str) -> EllipticElement {
        EllipticElement::from_poly(&MultiPoly::parse(s).unwrap())
    }

    fn lame() -> DiffOp<EllipticElement> {
        DiffOp::new(vec![el("-2*P"), el("0"), el("1")])
    }

    fn lame_partner() -> DiffOp<EllipticElement> {
        DiffOp::new(vec![el("-3/2*P'"), el("-3*P"), el("0"), el("1")])
    }

    #[test]
    fn constant_operators_commute() {
        let one = EllipticElement::one();
        let d2 = DiffOp::d_power(2, &one);
        let d3 = DiffOp::d_power(3, &one);
        assert!(d2.commutator(&d3).is_zero());
        assert!(lame().commutator(&lame()).is_zero());
    }

    #[test]
    fn lame_pair_commutes() {
        assert!(lame().commutator(&lame_partner()).is_zero());
        assert!(!lame().commutator(&DiffOp::new(vec![el("-P'"), el("-3*P"), el("0"), el("1")])).is_zero());
    }

    #[test]
    fn adjoint_is_an_involution() {
        let l = DiffOp::new(vec![el("-3/2*P' + e*P"), el("-3*P + c"), el("0"), el("1")]);
        let a = l.adjoint();
        assert!(a.is_monic());
        assert_eq!(a.adjoint(), l);
        // a' = a, b' = a - b, c' = c, e' = -e
        assert_eq!(a.coeff(1), el("-3*P + c"));
        assert_eq!(a.coeff(0), el("-3/2*P' - e*P"));
        assert_eq!(lame().adjoint(), lame());
    }

    #[test]
    fn text_form() {
        let l = DiffOp::new(vec![el("-3/2*P' + e*P"), el("-3*P + c"), el("0"), el("1")]);
        assert_eq!(l.to_string(), "D^3 + (-3*P + c)*D + (-3/2*P' + e*P)");
        let s = lame().scale(&rat(1, 1));
        assert_eq!(s.to_string(), "D^2 + (-2*P)");
    }
}
