use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use super::rational::Rational;
use super::upoly;
use super::var::Var;
use crate::error::{Error, Result};

/// Quotient of two polynomials.
///
/// Kept in a normal form where the denominator is a primitive integer
/// polynomial with positive leading coefficient, common monomial factors are
/// cancelled, and common factors are removed whenever they can be detected
/// cheaply (exact division, or a univariate gcd). Equality is tested by
/// cross-multiplication, so the normal form need not be fully reduced.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Checked down-cast to a polynomial.
    pub fn to_poly(&self) -> Result<MultiPoly> {
        match self.den.constant_value() {
            Some(d) => Ok(self.num.scale(&d.recip())),
            None => Err(Error::NonPolynomial(self.to_string())),
        }
    }

    pub fn constant_value(&self) -> Option<Rational> {
        let d = self.den.constant_value()?;
        Some(self.num.constant_value()? / d)
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let mut num = num;
        let mut den = den;
        // common monomial factor
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).unwrap();
            den = den.div_monomial(&g).unwrap();
        }
        if !den.is_constant() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = MultiPoly::one();
            } else if let Some(q) = den.div_exact(&num) {
                den = q;
                num = MultiPoly::one();
            } else if let Some((v, a, b)) = common_univariate(&num, &den) {
                let g = upoly::gcd(&a, &b);
                if upoly::degree(&g).unwrap_or(0) > 0 {
                    let gp = MultiPoly::from_univariate(v, &g);
                    num = num.div_exact(&gp).expect("gcd divides numerator");
                    den = den.div_exact(&gp).expect("gcd divides denominator");
                }
            }
        }
        // primitive denominator with positive leading coefficient
        let mut s = den.content();
        if den.leading_coeff().is_negative() {
            s = -s;
        }
        let inv = s.recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc { num: self.num.pow(k), den: self.den.pow(k) }
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    /// Ring homomorphism `v -> value` on both numerator and denominator.
    pub fn substitute(&self, v: Var, value: &RatFunc) -> Result<RatFunc> {
        let (n, dn) = substitute_into_poly(&self.num, v, value);
        let (d, dd) = substitute_into_poly(&self.den, v, value);
        // n/value.den^dn  /  d/value.den^dd
        let vd = &value.den;
        let (n, d) = match dn.cmp(&dd) {
            std::cmp::Ordering::Equal => (n, d),
            std::cmp::Ordering::Greater => (n, &d * &vd.pow(dn - dd)),
            std::cmp::Ordering::Less => (&n * &vd.pow(dd - dn), d),
        };
        RatFunc::new(n, d)
    }

    pub fn substitute_many(&self, map: &BTreeMap<Var, RatFunc>) -> Result<RatFunc> {
        let mut out = self.clone();
        for (v, val) in map {
            out = out.substitute(*v, val)?;
        }
        Ok(out)
    }

    pub fn eval_rational(&self, values: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let d = self.den.eval_rational(values)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_rational(values)? / d)
    }

    pub fn eval_complex(&self, value: &dyn Fn(Var) -> Option<Complex64>) -> Option<Complex64> {
        Some(self.num.eval_complex(value)? / self.den.eval_complex(value)?)
    }

    pub fn derivative(&self, v: Var) -> RatFunc {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::normalize(n, self.den.pow(2))
    }

    pub fn parse(s: &str) -> Result<RatFunc> {
        super::parse::parse_ratfunc(s)
    }
}

/// Substitute `v -> N/D` into `p`; returns `(p(N/D) * D^k, k)` with `k` the
/// degree of `p` in `v` (homogenized Horner).
pub fn substitute_into_poly(p: &MultiPoly, v: Var, value: &RatFunc) -> (MultiPoly, u32) {
    let k = p.degree_in(v);
    if k == 0 {
        return (p.clone(), 0);
    }
    if value.den.is_one() {
        return (p.substitute_poly(v, &value.num), 0);
    }
    let coeffs = p.coefficients_in(v);
    // sum_j a_j N^j D^(k-j)
    let mut npow = vec![MultiPoly::one()];
    let mut dpow = vec![MultiPoly::one()];
    for i in 1..=k as usize {
        npow.push(&npow[i - 1] * &value.num);
        dpow.push(&dpow[i - 1] * &value.den);
    }
    let mut out = MultiPoly::zero();
    for (j, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        out += &(&(a * &npow[j]) * &dpow[k as usize - j]);
    }
    (out, k)
}

fn common_univariate(a: &MultiPoly, b: &MultiPoly) -> Option<(Var, Vec<Rational>, Vec<Rational>)> {
    let mut vars = a.vars();
    vars.extend(b.vars());
    if vars.len() != 1 {
        return None;
    }
    let v = *vars.iter().next().unwrap();
    Some((v, a.as_univariate(v)?, b.as_univariate(v)?))
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.den.constant_value() {
            return write!(f, "{}", self.num.scale(&d.recip()));
        }
        let wrap = |p: &MultiPoly| {
            if p.len() > 1 || p.terms().any(|(_, c)| !c.is_integer()) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalize(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("rational function division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

/// Monomial helper used by solvers: `c * v1^k1 * ...` as a rational function.
pub fn monomial(m: &Monomial, c: Rational) -> RatFunc {
    RatFunc::from_poly(MultiPoly::term(m.clone(), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn reduces_common_univariate_factor() {
        let q = MultiPoly::var(Var::Q);
        let a = &q + &MultiPoly::one();
        let num = &a * &(&q - &MultiPoly::int(2));
        let den = &a * &(&q + &MultiPoly::int(3));
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.denom().degree(), 1);
    }

    #[test]
    fn substitution_into_condition() {
        // 9c + 3e^2 with c -> -3e^2/9
        let p = RatFunc::parse("9*c + 3*e^2").unwrap();
        let v = RatFunc::parse("-3*e^2/9").unwrap();
        assert!(p.substitute(Var::C, &v).unwrap().is_zero());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(RatFunc::new(MultiPoly::one(), MultiPoly::zero()).unwrap_err(), Error::DivisionByZero);
        let p = RatFunc::parse("1/c").unwrap();
        assert!(p.substitute(Var::C, &RatFunc::zero()).is_err());
    }

    #[test]
    fn sign_convention() {
        let r = RatFunc::new(MultiPoly::int(3), MultiPoly::var(Var::Q).scale(&int(-6))).unwrap();
        assert!(r.denom().leading_coeff() > Rational::zero());
        assert_eq!(r.to_string(), "(-1/2)/q");
        assert_eq!(r.eval_rational(&[(Var::Q, int(1))].into()).unwrap(), rat(-1, 2));
    }
}
