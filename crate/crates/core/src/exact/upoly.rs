//! Dense univariate polynomials over Q (coefficient vectors, ascending).
//!
//! Only what the rest of the crate needs: gcd for reducing rational
//! functions, and rational-root search for indicial polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};

pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder. Panics on a zero divisor.
pub fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    let lead = b[db].clone();
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let f = &rem[dr] / &lead;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            rem[dr - db + i] -= &f * c;
        }
        quot[dr - db] = f;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let l = x[d].clone();
        x.iter_mut().for_each(|c| *c /= &l);
    }
    x
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * rational::int(k as i64)).collect())
}

/// All rational roots with multiplicity, ascending, plus the leftover factor
/// that has no rational roots.
pub fn rational_roots(p: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rest = trim(p.to_vec());
    let mut roots = Vec::new();
    if rest.is_empty() {
        return (roots, rest);
    }
    loop {
        let Some(d) = degree(&rest) else { break };
        if d == 0 {
            break;
        }
        if rest[0].is_zero() {
            roots.push(Rational::zero());
            rest.remove(0);
            continue;
        }
        let ints = integer_coefficients(&rest);
        let a0 = ints[0].abs();
        let ad = ints[d].abs();
        let mut found = None;
        'search: for num in rational::divisors(&a0) {
            for den in rational::divisors(&ad) {
                if num.gcd(&den) != BigInt::one() {
                    continue;
                }
                for s in [1, -1] {
                    let cand = Rational::new(&num * BigInt::from(s), den.clone());
                    if eval(&rest, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(x) => {
                let (q, _) = div_rem(&rest, &[-x.clone(), Rational::one()]);
                roots.push(x);
                rest = q;
            }
            None => break,
        }
    }
    roots.sort();
    (roots, rest)
}

fn integer_coefficients(p: &[Rational]) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect()
}
