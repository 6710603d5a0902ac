use std::fmt;

use num_traits::One;

use super::laurent::LaurentSeries;
use super::wp::{wp_prime_series, wp_series};
use crate::error::{Error, Result};
use crate::exact::rational::{int, rat, Rational};
use crate::exact::{Monomial, MultiPoly, RatFunc, Var};

/// Element `p0(P) + p1(P) * P'` of Q[params][P, P'] / (P'^2 - 4P^3 + g2 P + g3).
///
/// `p0[k]`, `p1[k]` are the coefficients of `P^k`; they are polynomials in the
/// curve invariants and any other parameters (c, e, ...).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EllipticElement {
    p0: Vec<MultiPoly>,
    p1: Vec<MultiPoly>,
}

fn trim(mut v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    while v.last().is_some_and(MultiPoly::is_zero) {
        v.pop();
    }
    v
}

fn add_vec(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

fn mul_vec(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![MultiPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    trim(out)
}

fn scale_vec(a: &[MultiPoly], c: &MultiPoly) -> Vec<MultiPoly> {
    trim(a.iter().map(|x| x * c).collect())
}

/// `4P^3 - g2 P - g3`.
fn cubic() -> Vec<MultiPoly> {
    vec![-MultiPoly::var(Var::G3), -MultiPoly::var(Var::G2), MultiPoly::zero(), MultiPoly::int(4)]
}

/// Derivative of a polynomial in P (without the P' factor): `d/dP`.
fn d_dp(a: &[MultiPoly]) -> Vec<MultiPoly> {
    trim(a.iter().enumerate().skip(1).map(|(k, c)| c.scale(&int(k as i64))).collect())
}

impl EllipticElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(MultiPoly::one())
    }

    pub fn constant(c: MultiPoly) -> Self {
        EllipticElement { p0: trim(vec![c]), p1: Vec::new() }
    }

    pub fn from_parts(p0: Vec<MultiPoly>, p1: Vec<MultiPoly>) -> Self {
        EllipticElement { p0: trim(p0), p1: trim(p1) }
    }

    /// `P`.
    pub fn wp() -> Self {
        Self::from_parts(vec![MultiPoly::zero(), MultiPoly::one()], Vec::new())
    }

    /// `P'`.
    pub fn wp_prime() -> Self {
        Self::from_parts(Vec::new(), vec![MultiPoly::one()])
    }

    /// `P^k` (k >= 0).
    pub fn wp_pow(k: usize) -> Self {
        let mut p0 = vec![MultiPoly::zero(); k + 1];
        p0[k] = MultiPoly::one();
        Self::from_parts(p0, Vec::new())
    }

    pub fn part0(&self) -> &[MultiPoly] {
        &self.p0
    }

    pub fn part1(&self) -> &[MultiPoly] {
        &self.p1
    }

    pub fn is_zero(&self) -> bool {
        self.p0.is_empty() && self.p1.is_empty()
    }

    /// The element as a constant, if it has no P or P' dependence.
    pub fn constant_value(&self) -> Option<MultiPoly> {
        if !self.p1.is_empty() || self.p0.len() > 1 {
            return None;
        }
        Some(self.p0.first().cloned().unwrap_or_else(MultiPoly::zero))
    }

    /// Pole order at 0.
    pub fn pole_order(&self) -> usize {
        let a = self.p0.len().checked_sub(1).map_or(0, |d| 2 * d);
        let b = self.p1.len().checked_sub(1).map_or(0, |d| 2 * d + 3);
        a.max(b)
    }

    pub fn add(&self, o: &Self) -> Self {
        EllipticElement { p0: add_vec(&self.p0, &o.p0), p1: add_vec(&self.p1, &o.p1) }
    }

    pub fn neg(&self) -> Self {
        EllipticElement { p0: self.p0.iter().map(|c| -c).collect(), p1: self.p1.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        EllipticElement { p0: scale_vec(&self.p0, c), p1: scale_vec(&self.p1, c) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        // (a0 + a1 P')(b0 + b1 P') = a0 b0 + a1 b1 (4P^3 - g2 P - g3) + (a0 b1 + a1 b0) P'
        let p0 = add_vec(&mul_vec(&self.p0, &o.p0), &mul_vec(&mul_vec(&self.p1, &o.p1), &cubic()));
        let p1 = add_vec(&mul_vec(&self.p0, &o.p1), &mul_vec(&self.p1, &o.p0));
        EllipticElement { p0, p1 }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// d/dz with P -> P', P' -> 6P^2 - g2/2.
    pub fn derive(&self) -> Self {
        // d(a0(P)) = a0'(P) P'
        // d(a1(P) P') = a1'(P) P'^2 + a1(P) (6P^2 - g2/2)
        let second = vec![MultiPoly::var(Var::G2).scale(&rat(-1, 2)), MultiPoly::zero(), MultiPoly::int(6)];
        let p0 = add_vec(&mul_vec(&d_dp(&self.p1), &cubic()), &mul_vec(&self.p1, &second));
        let p1 = d_dp(&self.p0);
        EllipticElement { p0, p1 }
    }

    /// Apply a map to every coefficient polynomial.
    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self::from_parts(self.p0.iter().map(&f).collect(), self.p1.iter().map(&f).collect())
    }

    /// Laurent expansion at 0, trusted below `z^order`.
    pub fn to_series(&self, order: i64) -> LaurentSeries {
        let deg = self.p0.len().max(self.p1.len()) as i64;
        let work = order + 2 * deg + 6;
        let p = wp_series(work);
        let dp = wp_prime_series(work);
        let mut acc = LaurentSeries::zero(work);
        let mut pk = LaurentSeries::one(work);
        for k in 0..self.p0.len().max(self.p1.len()) {
            if let Some(c) = self.p0.get(k) {
                if !c.is_zero() {
                    acc = acc.add(&pk.scale(c));
                }
            }
            if let Some(c) = self.p1.get(k) {
                if !c.is_zero() {
                    acc = acc.add(&pk.mul(&dp).scale(c));
                }
            }
            pk = pk.mul(&p);
        }
        acc.truncate(order)
    }

    /// Constant term of the Laurent expansion at 0.
    pub fn series_constant(&self) -> MultiPoly {
        self.to_series(1).coeff(0).expect("order 1 covers z^0")
    }

    /// Subtract the Laurent constant term so that the expansion has no
    /// `z^0` coefficient.
    pub fn without_constant(&self) -> Self {
        self.sub(&Self::constant(self.series_constant()))
    }

    /// Write as a polynomial in the variables `P`, `P'`.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (k, c) in self.p0.iter().enumerate() {
            out += &c.mul_monomial(&Monomial::var(Var::WP, k as u32), &Rational::one());
        }
        let dp = Monomial::var(Var::DWP, 1);
        for (k, c) in self.p1.iter().enumerate() {
            out += &c.mul_monomial(&Monomial::var(Var::WP, k as u32).mul(&dp), &Rational::one());
        }
        out
    }

    /// Reduce a polynomial in `P`, `P'` (and parameters).
    pub fn from_poly(p: &MultiPoly) -> Self {
        let mut acc = Self::zero();
        let by_dp = p.coefficients_in(Var::DWP);
        let mut dpk = Self::one();
        for c in by_dp {
            let by_p = c.coefficients_in(Var::WP);
            acc = acc.add(&Self::from_parts(by_p, Vec::new()).mul(&dpk));
            dpk = dpk.mul(&Self::wp_prime());
        }
        acc
    }

    /// Checked down-cast from a rational function in `P`, `P'`, parameters.
    pub fn from_ratfunc(r: &RatFunc) -> Result<Self> {
        match r.to_poly() {
            Ok(p) => Ok(Self::from_poly(&p)),
            Err(_) => Err(Error::NonPolynomial(format!("elliptic coefficient {r} is not polynomial"))),
        }
    }

    /// Coefficient vector against the basis `1, P, P', P^2, P P', P^3, ...`
    /// (ordered by pole order 0, 2, 3, 4, 5, ...), up to pole order `max_pole`.
    pub fn basis(max_pole: usize) -> Vec<Self> {
        let mut out = vec![Self::one()];
        for k in 2..=max_pole {
            if k % 2 == 0 {
                out.push(Self::wp_pow(k / 2));
            } else {
                let mut p1 = vec![MultiPoly::zero(); (k - 3) / 2 + 1];
                p1[(k - 3) / 2] = MultiPoly::one();
                out.push(Self::from_parts(Vec::new(), p1));
            }
        }
        out
    }

    /// Coordinates in [`Self::basis`] (index = position in that basis).
    pub fn coordinates(&self) -> Vec<(usize, MultiPoly)> {
        let mut out = Vec::new();
        for (k, c) in self.p0.iter().enumerate() {
            if !c.is_zero() {
                out.push((if k == 0 { 0 } else { 2 * k - 1 }, c.clone()));
            }
        }
        for (k, c) in self.p1.iter().enumerate() {
            if !c.is_zero() {
                out.push((2 * k + 2, c.clone()));
            }
        }
        out.sort_by_key(|x| x.0);
        out
    }
}

impl fmt::Display for EllipticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_rules() {
        assert_eq!(EllipticElement::wp().derive(), EllipticElement::wp_prime());
        let expected = EllipticElement::from_poly(&MultiPoly::parse("6*P^2 - g2/2").unwrap());
        assert_eq!(EllipticElement::wp_prime().derive(), expected);
        let p2 = EllipticElement::wp_pow(2);
        assert_eq!(p2.derive(), EllipticElement::wp().mul(&EllipticElement::wp_prime()).scale(&MultiPoly::int(2)));
    }

    #[test]
    fn reduction_of_prime_square() {
        let dp = EllipticElement::wp_prime();
        let lhs = dp.mul(&dp);
        let rhs = EllipticElement::from_poly(&MultiPoly::parse("4*P^3 - g2*P - g3").unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_of_generators() {
        let s = EllipticElement::wp().to_series(6);
        assert_eq!(s.coeff(-2).unwrap(), MultiPoly::one());
        assert_eq!(s.coeff(2).unwrap(), MultiPoly::parse("g2/20").unwrap());
        let d = EllipticElement::wp_prime().to_series(4);
        assert_eq!(d.coeff(-3).unwrap(), MultiPoly::int(-2));
        assert_eq!(d.coeff(1).unwrap(), MultiPoly::parse("g2/10").unwrap());
        assert_eq!(EllipticElement::one().to_series(3), LaurentSeries::one(3));
    }

    #[test]
    fn square_series_matches_product() {
        let p = EllipticElement::wp();
        let s1 = p.mul(&p).to_series(10);
        let w = wp_series(14);
        assert_eq!(s1, w.mul(&w).truncate(10));
    }

    #[test]
    fn constant_removal() {
        let p2 = EllipticElement::wp_pow(2).without_constant();
        assert_eq!(p2, EllipticElement::from_poly(&MultiPoly::parse("P^2 - g2/10").unwrap()));
        assert!(p2.series_constant().is_zero());
    }

    #[test]
    fn text_form() {
        let x = EllipticElement::from_poly(&MultiPoly::parse("-3/2*P' + e*P").unwrap());
        assert_eq!(x.to_string(), "-3/2*P' + e*P");
        assert_eq!(EllipticElement::basis(5).len(), 5);
    }
}
