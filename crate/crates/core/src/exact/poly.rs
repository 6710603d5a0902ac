//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{self, Rational};
use super::var::Var;
use crate::error::{Error, Result};

/// A power product of variables, stored sorted by variable with no zero
/// exponents. Ordered graded-lexicographically (total degree first, then the
/// exponent of the lowest-numbered variable where the two differ).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, k: u32) -> Self {
        let mut m = Monomial::one();
        if k > 0 {
            m.0.push((v, k));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, k) in pairs {
            m = m.mul(&Monomial::var(v, k));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, k)| k)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                if d > k {
                    return None;
                }
                if k > d {
                    out.push((v, k - d));
                }
                j += 1;
            } else {
                out.push((v, k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, k) in &self.0 {
            let o = other.exponent(v);
            if o > 0 {
                out.push((v, k.min(o)));
            }
        }
        Monomial(out)
    }

    /// Remove `v`, returning its exponent and the cofactor.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        let mut out = self.clone();
        let k = self.exponent(v);
        out.0.retain(|(w, _)| *w != v);
        (k, out)
    }

    /// Homothety weight (unweighted variables count 0).
    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&(v, k)| v.weight().unwrap_or(0) * k as i64).sum()
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if va > vb {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &(v, k)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over Q. No zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.pairs().map(|(v, _)| v)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`: `self = sum_k out[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let (k, rest) = m.split_var(v);
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out += &c.mul_monomial(&Monomial::var(v, k as u32), &Rational::one());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c * s)).collect() }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Ring homomorphism `v -> value`.
    pub fn substitute_poly(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        if !self.vars().contains(&v) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(v);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn substitute_many(&self, map: &BTreeMap<Var, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut cache: HashMap<(Var, u32), MultiPoly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            let mut rest = Monomial::one();
            for (v, k) in m.pairs() {
                match map.get(&v) {
                    Some(val) => {
                        let pw = cache.entry((v, k)).or_insert_with(|| val.pow(k)).clone();
                        t = &t * &pw;
                    }
                    None => rest = rest.mul(&Monomial::var(v, k)),
                }
            }
            out += &t.mul_monomial(&rest, &Rational::one());
        }
        out
    }

    /// Evaluate the variables present in `values`, leaving the rest symbolic.
    pub fn eval_partial(&self, values: &BTreeMap<Var, Rational>) -> MultiPoly {
        let map = values.iter().map(|(v, r)| (*v, MultiPoly::constant(r.clone()))).collect();
        self.substitute_many(&map)
    }

    pub fn eval_rational(&self, values: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let p = self.eval_partial(values);
        p.constant_value()
            .ok_or_else(|| Error::InvalidInput(format!("unassigned variables in evaluation: {:?}", p.vars())))
    }

    pub fn eval_complex(&self, value: &dyn Fn(Var) -> Option<Complex64>) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational::to_f64(c), 0.0);
            for (v, k) in m.pairs() {
                t *= value(v)?.powu(k);
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_var(v);
            if k > 0 {
                out.add_term(rest.mul(&Monomial::var(v, k - 1)), c * rational::int(k as i64));
            }
        }
        out
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn content(&self) -> Rational {
        rational::content(self.terms.values())
    }

    /// Content 1 and positive leading coefficient. Zero stays zero.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            out.insert(k.div(m)?, c.clone());
        }
        Some(MultiPoly { terms: out })
    }

    /// `self / d` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let (m, c) = d.leading_term().unwrap();
            return self.div_monomial(m).map(|p| p.scale(&c.recip()));
        }
        let (lm, lc) = {
            let (m, c) = d.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem -= &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Set of homothety weights of the terms.
    pub fn weights(&self) -> BTreeSet<i64> {
        self.terms.keys().map(Monomial::weight).collect()
    }

    /// `Some(w)` when every term has weight `w` (zero is homogeneous of any
    /// weight and reports `None`).
    pub fn homogeneous_weight(&self) -> Option<i64> {
        let w = self.weights();
        (w.len() == 1).then(|| *w.iter().next().unwrap())
    }

    /// Univariate coefficient list (ascending) if only `v` occurs.
    pub fn as_univariate(&self, v: Var) -> Option<Vec<Rational>> {
        if self.vars().iter().any(|w| *w != v) {
            return None;
        }
        let mut out = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(v) as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(v: Var, coeffs: &[Rational]) -> MultiPoly {
        MultiPoly::from_terms(coeffs.iter().enumerate().map(|(k, c)| (Monomial::var(v, k as u32), c.clone())))
    }

    pub fn parse(s: &str) -> Result<MultiPoly> {
        super::parse::parse_poly(s)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order on polynomials: by leading terms, descending.
impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.terms().rev();
        let b = other.terms().rev();
        for (x, y) in a.zip(b) {
            let o = x.0.cmp(y.0).then_with(|| x.1.cmp(y.1));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        self.len().cmp(&other.len())
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * rhs.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let t = c1 * c2;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(t);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += t;
                    }
                }
            }
        }
        MultiPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn c() -> MultiPoly {
        MultiPoly::var(Var::C)
    }
    fn e() -> MultiPoly {
        MultiPoly::var(Var::E)
    }

    #[test]
    fn difference_of_squares() {
        let e2 = e().pow(2);
        let p = (&c() + &e2) * (&c() - &e2);
        assert_eq!(p, c().pow(2) - e().pow(4));
    }

    #[test]
    fn canonical_text() {
        let p = c().scale(&int(9)) + e().pow(2).scale(&int(3));
        assert_eq!(p.to_string(), "9*c + 3*e^2");
        assert_eq!(p.normalized().to_string(), "3*c + e^2");
        let q = c().scale(&rat(-3, 2)) + MultiPoly::int(1);
        assert_eq!(q.to_string(), "1 - 3/2*c");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::var(Var::C, 1);
        let b = Monomial::var(Var::E, 2);
        assert!(a < b);
        let x = Monomial::var(Var::C, 2);
        let y = Monomial::from_pairs([(Var::C, 1), (Var::E, 1)]);
        assert!(x > y);
    }

    #[test]
    fn weighted_degree_of_discriminant() {
        let g2 = MultiPoly::var(Var::G2);
        let g3 = MultiPoly::var(Var::G3);
        let d = g2.pow(3) - g3.pow(2).scale(&int(27));
        assert_eq!(d.homogeneous_weight(), Some(12));
    }

    #[test]
    fn exact_division() {
        let a = &c() + &e();
        let b = &c() - &e().scale(&int(2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!((&prod + &MultiPoly::one()).div_exact(&a), None);
    }

    #[test]
    fn substitution_is_linear_in_constants() {
        let p = c().scale(&int(9)) + e().pow(2).scale(&int(3));
        let v = e().pow(2).scale(&rat(-3, 9));
        assert!(p.substitute_poly(Var::C, &v).is_zero());
    }

    #[test]
    fn coefficient_split() {
        let l = MultiPoly::var(Var::LAMBDA);
        let p = &(&l * &c()) + &e();
        let k = p.coefficients_in(Var::LAMBDA);
        assert_eq!(k, vec![e(), c()]);
        assert_eq!(MultiPoly::from_coefficients_in(Var::LAMBDA, &k), p);
    }
}
