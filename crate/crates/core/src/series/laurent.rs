use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::{MultiPoly, Var};

/// Truncated Laurent series `z^shift * sum_{k >= low} a_k z^k`, trusted for
/// integer offsets `k < order`.
///
/// `shift` lies in `[0, 1)` and lets the same type carry `z^m * (power
/// series)` for rational `m`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    shift: Rational,
    low: i64,
    coeffs: Vec<MultiPoly>,
    order: i64,
}

impl LaurentSeries {
    /// Coefficients for `z^low, z^(low+1), ...`; anything at or beyond `order`
    /// is dropped.
    pub fn new(low: i64, coeffs: Vec<MultiPoly>, order: i64) -> Self {
        let mut s = LaurentSeries { shift: Rational::zero(), low, coeffs, order };
        s.clip();
        s
    }

    pub fn zero(order: i64) -> Self {
        Self::new(0, Vec::new(), order)
    }

    pub fn one(order: i64) -> Self {
        Self::constant(MultiPoly::one(), order)
    }

    pub fn constant(c: MultiPoly, order: i64) -> Self {
        Self::new(0, vec![c], order)
    }

    /// `c * z^k`.
    pub fn monomial(k: i64, c: MultiPoly, order: i64) -> Self {
        Self::new(k, vec![c], order)
    }

    /// `z^m * self` for rational `m`: the integer part moves `low`, the
    /// fractional part accumulates in the shift.
    pub fn shifted(&self, m: &Rational) -> Self {
        let total = &self.shift + m;
        let fl = total.floor();
        let k = fl.to_integer();
        let k: i64 = k.try_into().expect("shift fits in i64");
        LaurentSeries { shift: total - fl, low: self.low + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    pub fn mul_z_power(&self, k: i64) -> Self {
        LaurentSeries {
            shift: self.shift.clone(),
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    fn clip(&mut self) {
        let keep = (self.order - self.low).max(0) as usize;
        self.coeffs.truncate(keep);
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of `z^(shift + k)`.
    pub fn coeff(&self, k: i64) -> Result<MultiPoly> {
        if k >= self.order {
            return Err(Error::Truncation {
                requested: (&self.shift + rational::int(k)).to_string(),
                available: (&self.shift + rational::int(self.order)).to_string(),
            });
        }
        if k < self.low {
            return Ok(MultiPoly::zero());
        }
        Ok(self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(MultiPoly::zero))
    }

    /// Lowest exponent with a nonzero coefficient, if any below `order`.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.low + i as i64)
    }

    /// Drop leading zero coefficients.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) => {
                let skip = (v - self.low) as usize;
                LaurentSeries {
                    shift: self.shift.clone(),
                    low: v,
                    coeffs: self.coeffs[skip..].to_vec(),
                    order: self.order,
                }
            }
            None => LaurentSeries { shift: self.shift.clone(), low: self.order, coeffs: Vec::new(), order: self.order },
        }
    }

    pub fn truncate(&self, order: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(order);
        s.clip();
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MultiPoly::is_zero)
    }

    fn check_shift(&self, other: &Self) {
        assert_eq!(self.shift, other.shift, "adding Laurent series with different fractional shifts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shift(other);
        let order = self.order.min(other.order);
        let low = self.low.min(other.low);
        let len = (order - low).max(0) as usize;
        let mut coeffs = vec![MultiPoly::zero(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = low + i as i64;
            for s in [self, other] {
                if k >= s.low {
                    if let Some(x) = s.coeffs.get((k - s.low) as usize) {
                        *c += x;
                    }
                }
            }
        }
        LaurentSeries { shift: self.shift.clone(), low, coeffs, order }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            shift: self.shift.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        LaurentSeries {
            shift: self.shift.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = self.normalized();
        let b = other.normalized();
        let shift_sum = &a.shift + &b.shift;
        let carry = shift_sum.floor();
        let k = carry.to_integer();
        let k: i64 = k.try_into().expect("shift carry");
        let order = (a.low + b.order).min(b.low + a.order) + k;
        let low = a.low + b.low + k;
        let len = (order - low).max(0) as usize;
        let mut coeffs = vec![MultiPoly::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !y.is_zero() {
                    coeffs[i + j] += &(x * y);
                }
            }
        }
        LaurentSeries { shift: shift_sum - carry, low, coeffs, order }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentSeries::one(i64::MAX / 4);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/dz`: `z^(s+k) -> (s+k) z^(s+k-1)`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&(&self.shift + rational::int(self.low + i as i64))))
            .collect();
        LaurentSeries { shift: self.shift.clone(), low: self.low - 1, coeffs, order: self.order - 1 }
    }

    /// Apply a ring map to every coefficient (e.g. specialize parameters).
    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        LaurentSeries {
            shift: self.shift.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        }
    }

    /// Numeric value of the truncated sum at `z` (principal branch for the
    /// fractional shift).
    pub fn eval_complex(&self, z: Complex64, value: &dyn Fn(Var) -> Option<Complex64>) -> Option<Complex64> {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.eval_complex(value)?;
        }
        let p = Complex64::from(rational::to_f64(&self.shift)) + self.low as f64;
        Some(acc * z.powc(p))
    }
}

/// Equal shift, equal trusted order, equal coefficients.
impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.shift != other.shift || self.order != other.order {
            return false;
        }
        let low = self.low.min(other.low);
        (low..self.order).all(|k| self.coeff(k).ok() == other.coeff(k).ok())
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = &self.shift + rational::int(self.low);
        let body: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let t = if c.len() > 1 { format!("({c})") } else { c.to_string() };
                match i {
                    0 => t,
                    1 => format!("{t}*z"),
                    _ => format!("{t}*z^{i}"),
                }
            })
            .collect();
        let inner = if body.is_empty() { "0".to_string() } else { body.join(" + ") };
        let tail = &self.shift + rational::int(self.order);
        write!(f, "z^{lead}*({inner}) + O(z^{tail})")
    }
}

/// Binomial coefficient as a rational (used by Leibniz expansions).
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = num_bigint::BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Rational::from_integer(acc)
}

/// Falling factorial `x (x-1) ... (x-k+1)`.
pub fn falling(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= x - rational::int(i as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn derivative_of_inverse_square() {
        let s = LaurentSeries::monomial(-2, MultiPoly::one(), 10);
        let d = s.derivative();
        assert_eq!(d.coeff(-3).unwrap(), MultiPoly::int(-2));
        assert_eq!(d.order(), 9);
    }

    #[test]
    fn truncation_is_reported() {
        let s = LaurentSeries::one(3);
        assert!(matches!(s.coeff(3), Err(Error::Truncation { .. })));
        assert!(s.coeff(2).unwrap().is_zero());
    }

    #[test]
    fn product_order_is_tight() {
        // (z^-2 + O(z^4)) * (1 + z + O(z^3)) is trusted below z^1
        let a = LaurentSeries::new(-2, vec![MultiPoly::one()], 4);
        let b = LaurentSeries::new(0, vec![MultiPoly::one(), MultiPoly::one()], 3);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeff(-1).unwrap(), MultiPoly::one());
    }

    #[test]
    fn fractional_shift_derivative() {
        let s = LaurentSeries::one(5).shifted(&crate::exact::rational::rat(1, 2));
        let d = s.derivative();
        assert_eq!(d.shift(), &crate::exact::rational::rat(1, 2));
        assert_eq!(d.coeff(-1).unwrap(), MultiPoly::constant(crate::exact::rational::rat(1, 2)));
        assert_eq!(falling(&int(5), 3), int(60));
        assert_eq!(binomial(5, 2), int(10));
    }
}
